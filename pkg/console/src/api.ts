// Thin client over the service HTTP API. No statistics are computed here;
// report payloads keep their raw text so displayed numbers stay identical
// to what the server sent.

import type {
  DeploymentDescriptor,
  FetchedReport,
  Job,
  ModelEntry,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
    public errors: string[] = [],
  ) {
    super(detail);
  }
}

async function failFrom(response: Response): Promise<never> {
  let detail = `HTTP ${response.status}`;
  let errors: string[] = [];
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
    if (Array.isArray(body.errors)) errors = body.errors.map(String);
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, detail, errors);
}

export class ApiClient {
  constructor(public baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}/api/v1${path}`;
  }

  async health(): Promise<{ status: string; deployment_version: number }> {
    const r = await fetch(this.url("/health"));
    if (!r.ok) await failFrom(r);
    return r.json();
  }

  async submitTraining(config: unknown): Promise<string> {
    const r = await fetch(this.url("/train"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
    if (!r.ok) await failFrom(r);
    const body = await r.json();
    return body.job_id as string;
  }

  async getJob(jobId: string): Promise<Job> {
    const r = await fetch(this.url(`/jobs/${jobId}`));
    if (!r.ok) await failFrom(r);
    return r.json();
  }

  async listModels(): Promise<ModelEntry[]> {
    const r = await fetch(this.url("/models"));
    if (!r.ok) await failFrom(r);
    return (await r.json()).models as ModelEntry[];
  }

  async getReport(modelId: string): Promise<FetchedReport> {
    const r = await fetch(this.url(`/models/${modelId}/report`));
    if (!r.ok) await failFrom(r);
    const raw = await r.text();
    return { raw, body: JSON.parse(raw) };
  }

  async getDeployment(): Promise<DeploymentDescriptor> {
    const r = await fetch(this.url("/deployment"));
    if (!r.ok) await failFrom(r);
    return r.json();
  }

  async activate(
    strategy: string,
    models: Record<string, string>,
  ): Promise<DeploymentDescriptor> {
    const r = await fetch(this.url("/deployment"), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ strategy, models }),
    });
    if (!r.ok) await failFrom(r);
    return r.json();
  }

  /** Returns the server's CSV bytes untouched; the download must equal
   *  this string exactly. */
  async classifyBatch(csvText: string): Promise<string> {
    const r = await fetch(this.url("/classify/batch"), {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csvText,
    });
    if (!r.ok) await failFrom(r);
    return r.text();
  }
}
