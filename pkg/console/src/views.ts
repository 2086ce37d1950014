// Pure render functions: state in, HTML string out. Metric cells are
// rendered from the raw response text captured in FetchedReport, so the
// page shows exactly the bytes the API returned.

import { rawSummaryFields } from "./raw.js";
import type {
  DeploymentDescriptor,
  FetchedReport,
  Job,
  ModelEntry,
} from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderDeploymentBanner(
  deployment: DeploymentDescriptor | null,
): string {
  if (!deployment || deployment.active === false) {
    return `<div class="banner banner-idle">No active deployment` +
      ` <span class="version">v0</span></div>`;
  }
  const models = Object.entries(deployment.models ?? {})
    .map(([stage, id]) => `${escapeHtml(stage)}: ${escapeHtml(id)}`)
    .join(" · ");
  return (
    `<div class="banner banner-active">` +
    `Serving <strong>${escapeHtml(deployment.strategy ?? "?")}</strong> ` +
    `<span class="version">v${deployment.version}</span>` +
    `<span class="models">${models}</span></div>`
  );
}

export function renderJobCard(job: Job): string {
  const lines = [
    `<div class="job-card job-${job.state}" data-job="${escapeHtml(job.job_id)}">`,
    `<span class="job-id">${escapeHtml(job.job_id)}</span>`,
    `<span class="job-state">${job.state}</span>`,
  ];
  if (job.error) {
    lines.push(`<span class="job-error">${escapeHtml(job.error)}</span>`);
  }
  if (job.result) {
    const ids = Object.entries(job.result.model_ids)
      .map(([stage, id]) => `${escapeHtml(stage)} → ${escapeHtml(id)}`)
      .join(", ");
    lines.push(`<span class="job-models">${ids}</span>`);
  }
  lines.push("</div>");
  return lines.join("");
}

export interface ModelsTableOptions {
  selection?: Record<string, ModelEntry | undefined>;
  bestByStage?: Record<string, string>; // stage -> model_id to highlight
}

export function renderModelsTable(
  models: ModelEntry[],
  options: ModelsTableOptions = {},
): string {
  const rows = models
    .map((m) => {
      const selected = Object.values(options.selection ?? {}).some(
        (entry) => entry?.model_id === m.model_id,
      );
      const best = options.bestByStage?.[m.stage ?? ""] === m.model_id;
      const classes = [
        selected ? "selected" : "",
        best ? "best" : "",
      ].filter(Boolean).join(" ");
      return (
        `<tr class="${classes}" data-model="${escapeHtml(m.model_id)}" ` +
        `data-stage="${escapeHtml(m.stage ?? "")}">` +
        `<td>${escapeHtml(m.model_id)}</td>` +
        `<td>${escapeHtml(m.stage ?? "-")}</td>` +
        `<td>${escapeHtml(m.kind)}</td>` +
        `<td>${escapeHtml(m.label_set.join(" "))}</td>` +
        `<td>${escapeHtml(m.created_at)}</td>` +
        `<td>${
          m.report_id
            ? `<a href="#report/${escapeHtml(m.model_id)}" class="report-link">report</a>`
            : "-"
        }</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="models"><thead><tr>` +
    `<th>model</th><th>stage</th><th>kind</th><th>labels</th>` +
    `<th>created</th><th>report</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

const SUMMARY_KEYS = [
  "mean_accuracy",
  "std_accuracy",
  "mean_weighted_f",
  "std_weighted_f",
];

/** Metric values are cut from the raw JSON text, never re-derived from the
 *  parsed floats. */
export function renderReportView(report: FetchedReport): string {
  const raw = rawSummaryFields(report.raw, SUMMARY_KEYS);
  const cell = (key: string) => escapeHtml(raw[key] ?? "?");
  return (
    `<div class="report">` +
    `<div class="report-meta">${report.body.folds}-fold × ` +
    `${report.body.repeats} repeats · labels ` +
    `${escapeHtml(report.body.label_set.join(" "))}</div>` +
    `<table class="report-summary"><thead>` +
    `<tr><th>metric</th><th>mean</th><th>std</th></tr></thead><tbody>` +
    `<tr><td>accuracy</td>` +
    `<td class="metric" data-key="mean_accuracy">${cell("mean_accuracy")}</td>` +
    `<td class="metric" data-key="std_accuracy">${cell("std_accuracy")}</td></tr>` +
    `<tr><td>weighted F</td>` +
    `<td class="metric" data-key="mean_weighted_f">${cell("mean_weighted_f")}</td>` +
    `<td class="metric" data-key="std_weighted_f">${cell("std_weighted_f")}</td></tr>` +
    `</tbody></table></div>`
  );
}

export function renderBatchTable(
  header: string[],
  rows: string[][],
  page: number,
  pageSize = 50,
): string {
  const pages = Math.max(1, Math.ceil(rows.length / pageSize));
  const current = Math.min(Math.max(page, 0), pages - 1);
  const slice = rows.slice(current * pageSize, (current + 1) * pageSize);
  const errorIdx = header.indexOf("error");
  const body = slice
    .map((row) => {
      const hasError = errorIdx >= 0 && row[errorIdx] !== "";
      const cells = row
        .map((value) => `<td>${escapeHtml(value)}</td>`)
        .join("");
      return `<tr class="${hasError ? "row-error" : ""}">${cells}</tr>`;
    })
    .join("");
  const head = header.map((h) => `<th>${escapeHtml(h)}</th>`).join("");
  return (
    `<table class="batch"><thead><tr>${head}</tr></thead>` +
    `<tbody>${body}</tbody></table>` +
    `<div class="pager" data-pages="${pages}" data-page="${current}">` +
    `page ${current + 1} / ${pages} · ${rows.length} row(s)</div>`
  );
}

export function renderFieldErrors(errors: Record<string, string>): string {
  const items = Object.entries(errors)
    .map(([field, message]) =>
      `<li data-field="${escapeHtml(field)}">` +
      `<strong>${escapeHtml(field)}</strong>: ${escapeHtml(message)}</li>`)
    .join("");
  return items ? `<ul class="field-errors">${items}</ul>` : "";
}

export interface AuditEntry {
  at: string;
  version: number;
  strategy: string;
  models: Record<string, string>;
}

export function renderHistory(entries: AuditEntry[]): string {
  const items = entries
    .map((e) =>
      `<li>v${e.version} · ${escapeHtml(e.strategy)} · ` +
      `${escapeHtml(e.at)} · ` +
      `${escapeHtml(Object.values(e.models).join(", "))}</li>`)
    .join("");
  return `<ol class="history">${items}</ol>`;
}
