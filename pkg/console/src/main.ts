// DOM bootstrap: wires the three screens (Training Center, Models &
// Deployment, Batch Classification) to the flow controllers. All durable
// state lives on the server; a refresh only loses unsubmitted form input.

import { ApiClient } from "./api.js";
import {
  activateModelsFlow,
  batchClassificationFlow,
  refreshModels,
  trainingCenterFlow,
} from "./flows.js";
import { DEFAULT_POLL_INTERVAL_MS } from "./poll.js";
import {
  CLASSIFIER_KINDS,
  defaultFormState,
  stagesFor,
} from "./state.js";
import type { ModelEntry, Strategy } from "./types.js";
import {
  AuditEntry,
  renderBatchTable,
  renderDeploymentBanner,
  renderFieldErrors,
  renderHistory,
  renderJobCard,
  renderModelsTable,
  renderReportView,
} from "./views.js";

const client = new ApiClient("");
const $ = (id: string) => document.getElementById(id)!;

// ---------------------------------------------------------------- tabs
function showTab(name: string): void {
  for (const tab of Array.from(document.querySelectorAll(".screen"))) {
    (tab as HTMLElement).hidden = tab.id !== `screen-${name}`;
  }
  for (const button of Array.from(document.querySelectorAll(".tab"))) {
    button.classList.toggle(
      "active",
      (button as HTMLElement).dataset.tab === name,
    );
  }
}

// ------------------------------------------------------ training center
const formState = defaultFormState();

function renderTrainingForm(): void {
  const stages = stagesFor(formState.strategy);
  const classifierRows = stages
    .map((stage) => {
      const choice = formState.classifiers[stage];
      const options = CLASSIFIER_KINDS.map(
        (kind) =>
          `<option value="${kind}" ${choice?.kind === kind ? "selected" : ""}>` +
          `${kind}</option>`,
      ).join("");
      return (
        `<label class="stage-row">${stage}` +
        `<select data-stage="${stage}" class="kind-select">${options}</select>` +
        `</label>`
      );
    })
    .join("");
  $("classifier-grid").innerHTML = classifierRows;
  for (const select of Array.from(
    document.querySelectorAll(".kind-select"),
  ) as HTMLSelectElement[]) {
    select.onchange = () => {
      const stage = select.dataset.stage!;
      const existing = formState.classifiers[stage] ?? {
        hyperparameters: {},
        seed: 0,
        kind: "",
      };
      formState.classifiers[stage] = { ...existing, kind: select.value };
    };
  }
}

function syncFormInputs(): void {
  formState.datasetMode = ($("dataset-upload") as HTMLInputElement).checked
    ? "upload"
    : "bundled";
  formState.bundledSpec = ($("bundled-spec") as HTMLSelectElement).value;
  formState.datasetSeed = Number(($("dataset-seed") as HTMLInputElement).value);
  formState.resampleMethod = ($("resample") as HTMLSelectElement)
    .value as typeof formState.resampleMethod;
  formState.folds = Number(($("folds") as HTMLInputElement).value);
  formState.repeats = Number(($("repeats") as HTMLInputElement).value);
}

async function onSubmitTraining(): Promise<void> {
  syncFormInputs();
  $("form-errors").innerHTML = "";
  $("job-status").innerHTML = "<em>submitting…</em>";
  const outcome = await trainingCenterFlow(client, formState, {
    intervalMs: DEFAULT_POLL_INTERVAL_MS,
    onUpdate: (job) => {
      $("job-status").innerHTML = renderJobCard(job);
    },
  });
  if (outcome.kind === "invalid") {
    $("form-errors").innerHTML = renderFieldErrors(outcome.errors);
    $("job-status").innerHTML = "";
  } else if (outcome.kind === "rejected") {
    $("form-errors").innerHTML = renderFieldErrors(
      Object.fromEntries(outcome.errors.map((e, i) => [`error ${i + 1}`, e])),
    );
    $("job-status").innerHTML = "";
  } else if (outcome.kind === "network-error") {
    $("job-status").innerHTML =
      `<div class="network-error">${outcome.message} ` +
      `<button id="retry-train">retry</button></div>`;
    $("retry-train").onclick = () => void onSubmitTraining();
  } else {
    await loadModels();
  }
}

// --------------------------------------------------- models & deployment
let models: ModelEntry[] = [];
const selection: Record<string, ModelEntry | undefined> = {};
const history: AuditEntry[] = [];
let lastSeenVersion = -1;

async function loadModels(): Promise<void> {
  models = await refreshModels(client);
  $("models-table").innerHTML = renderModelsTable(models, { selection });
  for (const row of Array.from(
    document.querySelectorAll(".models tbody tr"),
  ) as HTMLTableRowElement[]) {
    row.onclick = () => {
      const id = row.dataset.model!;
      const entry = models.find((m) => m.model_id === id);
      if (entry?.stage) {
        selection[entry.stage] = entry;
        void loadModels();
      }
    };
  }
  for (const link of Array.from(
    document.querySelectorAll(".report-link"),
  ) as HTMLAnchorElement[]) {
    link.onclick = async (event) => {
      event.preventDefault();
      const id = link.closest("tr")!.dataset.model!;
      const report = await client.getReport(id);
      $("report-panel").innerHTML = renderReportView(report);
    };
  }
}

async function refreshDeployment(): Promise<void> {
  const deployment = await client.getDeployment();
  if (deployment.version !== lastSeenVersion) {
    lastSeenVersion = deployment.version;
    $("deployment-banner").innerHTML = renderDeploymentBanner(deployment);
  }
}

async function onActivate(): Promise<void> {
  const strategy = ($("strategy-select") as HTMLSelectElement)
    .value as Strategy;
  const outcome = await activateModelsFlow(client, strategy, selection);
  if (outcome.kind === "blocked") {
    $("activation-message").textContent = outcome.message;
    return;
  }
  if (outcome.kind === "rejected") {
    $("activation-message").textContent =
      `rejected: ${outcome.message} (still serving v${outcome.current.version})`;
    return;
  }
  $("activation-message").textContent = "";
  history.unshift(outcome.audit);
  $("history").innerHTML = renderHistory(history);
  await refreshDeployment();
}

// ----------------------------------------------------- batch classification
async function onBatchFile(file: File): Promise<void> {
  const text = await file.text();
  const outcome = await batchClassificationFlow(client, text);
  if (outcome.kind === "blocked" || outcome.kind === "rejected") {
    $("batch-message").textContent = outcome.message;
    $("batch-table").innerHTML = "";
    return;
  }
  $("batch-message").textContent = "";
  let page = 0;
  const draw = () => {
    $("batch-table").innerHTML = renderBatchTable(
      outcome.header,
      outcome.rows,
      page,
    );
  };
  draw();
  $("batch-prev").onclick = () => {
    page = Math.max(0, page - 1);
    draw();
  };
  $("batch-next").onclick = () => {
    page = page + 1;
    draw();
  };
  const blob = new Blob([outcome.download], { type: "text/csv" });
  const link = $("batch-download") as HTMLAnchorElement;
  link.href = URL.createObjectURL(blob);
  link.download = "classified.csv";
  link.hidden = false;
}

// ---------------------------------------------------------------- boot
function boot(): void {
  for (const button of Array.from(document.querySelectorAll(".tab"))) {
    (button as HTMLElement).onclick = () =>
      showTab((button as HTMLElement).dataset.tab!);
  }
  ($("strategy-radio-s1") as HTMLInputElement).onchange = () => {
    formState.strategy = "S1";
    renderTrainingForm();
  };
  ($("strategy-radio-s2") as HTMLInputElement).onchange = () => {
    formState.strategy = "S2";
    renderTrainingForm();
  };
  $("submit-training").onclick = () => void onSubmitTraining();
  ($("dataset-file") as HTMLInputElement).onchange = async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) {
      formState.uploadName = file.name;
      formState.uploadText = await file.text();
      ($("dataset-upload") as HTMLInputElement).checked = true;
    }
  };
  $("activate").onclick = () => void onActivate();
  ($("batch-file") as HTMLInputElement).onchange = (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) void onBatchFile(file);
  };
  renderTrainingForm();
  void loadModels();
  void refreshDeployment();
  setInterval(() => void refreshDeployment(), DEFAULT_POLL_INTERVAL_MS);
  showTab("training");
}

document.addEventListener("DOMContentLoaded", boot);
