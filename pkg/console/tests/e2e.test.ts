// End-to-end: drive the console flows against a real, locally spawned
// assignment service. Covers train -> report -> activate -> batch-classify,
// byte-equality of displayed metrics, and download identity with the
// server's CSV.

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  activateModelsFlow,
  batchClassificationFlow,
  refreshModels,
  trainingCenterFlow,
} from "../src/flows.js";
import { rawNumber } from "../src/raw.js";
import { defaultFormState } from "../src/state.js";
import { renderDeploymentBanner, renderReportView } from "../src/views.js";
import type { ModelEntry } from "../src/types.js";

const PORT = 8901 + Math.floor(Math.random() * 500);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let dataDir: string;
const client = new ApiClient(BASE);

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      await client.health();
      return;
    } catch {
      if (Date.now() > deadline) {
        throw new Error("service did not become healthy");
      }
      await new Promise((r) => setTimeout(r, 300));
    }
  }
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "console-e2e-"));
  server = spawn("triagekit-serve", ["--port", String(PORT)], {
    env: { ...process.env, TRIAGEKIT_DATA_DIR: dataDir },
    stdio: "ignore",
  });
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
  rmSync(dataDir, { recursive: true, force: true });
});

function smallFormState() {
  const state = defaultFormState();
  state.bundledSpec = "noise-free";
  state.datasetSeed = 11;
  state.folds = 5;
  state.repeats = 1;
  state.classifiers["team"] = {
    kind: "sgd_text",
    hyperparameters: { epochs: 60 },
    seed: 1,
  };
  state.classifiers["T_A"] = {
    kind: "logistic_regression",
    hyperparameters: { epochs: 40 },
    seed: 1,
  };
  state.classifiers["T_B"] = {
    kind: "naive_bayes_multinomial",
    hyperparameters: {},
    seed: 1,
  };
  return state;
}

describe("console against a live service", () => {
  let modelIds: Record<string, string>;
  let models: ModelEntry[];

  it("rejects an invalid config inline without creating a job", async () => {
    const state = smallFormState();
    state.classifiers["T_A"] = {
      kind: "sgd_text",
      hyperparameters: {},
      seed: 0,
    };
    const before = await fetch(`${BASE}/api/v1/jobs`).then((r) => r.json());
    const outcome = await trainingCenterFlow(client, state);
    expect(outcome.kind).toBe("invalid");
    if (outcome.kind === "invalid") {
      expect(outcome.errors["classifiers.T_A"]).toMatch(/binary-only/);
    }
    const after = await fetch(`${BASE}/api/v1/jobs`).then((r) => r.json());
    expect(after.jobs.length).toBe(before.jobs.length);
  });

  it("runs the training center flow to a succeeded job", async () => {
    const states: string[] = [];
    const outcome = await trainingCenterFlow(client, smallFormState(), {
      intervalMs: 200,
      timeoutMs: 110_000,
      onUpdate: (job) => states.push(job.state),
    });
    expect(outcome.kind).toBe("finished");
    if (outcome.kind !== "finished") return;
    expect(outcome.job.state).toBe("succeeded");
    expect(states[states.length - 1]).toBe("succeeded");
    modelIds = outcome.job.result!.model_ids;
    expect(Object.keys(modelIds).sort()).toEqual(["T_A", "T_B", "team"]);
  });

  it("lists the trained models in the registry", async () => {
    models = await refreshModels(client);
    const ids = models.map((m) => m.model_id);
    for (const id of Object.values(modelIds)) {
      expect(ids).toContain(id);
    }
  });

  it("renders report metrics byte-equal to the API payload", async () => {
    const report = await client.getReport(modelIds["team"]);
    const html = renderReportView(report);
    for (const key of ["mean_accuracy", "std_accuracy", "mean_weighted_f",
                       "std_weighted_f"]) {
      const raw = rawNumber(report.raw, key);
      expect(raw).not.toBeNull();
      expect(html).toContain(`data-key="${key}">${raw}<`);
    }
  });

  it("blocks activating a mismatched selection client-side", async () => {
    const byId = new Map(models.map((m) => [m.model_id, m]));
    const outcome = await activateModelsFlow(client, "S2", {
      team: byId.get(modelIds["team"]),
      T_A: byId.get(modelIds["T_B"]), // wrong stage on purpose
      T_B: byId.get(modelIds["T_B"]),
    });
    expect(outcome.kind).toBe("blocked");
    const deployment = await client.getDeployment();
    expect(deployment.version).toBe(0); // nothing reached the server
  });

  it("activates a coherent selection and shows the new version", async () => {
    const byId = new Map(models.map((m) => [m.model_id, m]));
    const outcome = await activateModelsFlow(client, "S2", {
      team: byId.get(modelIds["team"]),
      T_A: byId.get(modelIds["T_A"]),
      T_B: byId.get(modelIds["T_B"]),
    });
    expect(outcome.kind).toBe("activated");
    if (outcome.kind !== "activated") return;
    expect(outcome.deployment.version).toBe(1);
    const banner = renderDeploymentBanner(outcome.deployment);
    expect(banner).toContain("v1");
    expect(banner).toContain(modelIds["team"]);
  });

  it("sees a concurrent activation from another session on refresh", async () => {
    // Another session activates directly against the API.
    const response = await fetch(`${BASE}/api/v1/deployment`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ strategy: "S2", models: modelIds }),
    });
    expect(response.ok).toBe(true);
    const deployment = await client.getDeployment();
    expect(deployment.version).toBe(2);
    expect(renderDeploymentBanner(deployment)).toContain("v2");
  });

  it("blocks a batch upload with a broken header before sending", async () => {
    const outcome = await batchClassificationFlow(client, "id,text\n1,x\n");
    expect(outcome.kind).toBe("blocked");
    if (outcome.kind === "blocked") {
      expect(outcome.message).toMatch(/key/);
    }
  });

  it("classifies a batch; download equals the server CSV byte-for-byte",
     async () => {
    const upload =
      "key,summary,description\n" +
      "B-1,network signal drops,antenna roaming handover\n" +
      "B-2,camera flash broken,zoom gallery shutter\n" +
      "B-3,battery drain,charging thermal reboot\n";
    const outcome = await batchClassificationFlow(client, upload);
    expect(outcome.kind).toBe("classified");
    if (outcome.kind !== "classified") return;
    expect(outcome.rows.length).toBe(3);
    const keyIdx = outcome.header.indexOf("key");
    expect(outcome.rows.map((r) => r[keyIdx])).toEqual(["B-1", "B-2", "B-3"]);
    const teamIdx = outcome.header.indexOf("team");
    const subIdx = outcome.header.indexOf("subteam");
    expect(outcome.rows[0][subIdx]).toBe("ST1");
    expect(outcome.rows[1][subIdx]).toBe("ST5");
    expect(outcome.rows[2][subIdx]).toBe("ST6");
    expect(outcome.rows.every((r) => ["T_A", "T_B"].includes(r[teamIdx])))
      .toBe(true);
    // The download is exactly what the server would serve for this body.
    const direct = await fetch(`${BASE}/api/v1/classify/batch`, {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: upload,
    }).then((r) => r.text());
    expect(outcome.download).toBe(direct);
  });

  it("trains from an uploaded CSV dataset", async () => {
    // Build a small labeled corpus as CSV, the way the upload mode embeds
    // a chosen file's text into the request.
    const header =
      "key,summary,assignee,reporter,components,priority,attach#,created," +
      "updated,duedate,labels,description,status,duplicate,subteam";
    const vocab: Record<string, string> = {
      ST1: "network signal antenna",
      ST2: "audio speaker volume",
      ST3: "wifi bluetooth pairing",
      ST4: "display screen touch",
      ST5: "camera zoom flash",
      ST6: "battery charging thermal",
    };
    const lines = [header];
    let n = 0;
    for (const [subteam, words] of Object.entries(vocab)) {
      for (let i = 0; i < 8; i++) {
        n += 1;
        const day = String(1 + (n % 27)).padStart(2, "0");
        lines.push(
          `U-${n},${words},lead,qa,,P2,0,2020-01-${day}T00:00:00,` +
          `2020-01-${day}T01:00:00,,,${words} ${words},closed,false,${subteam}`,
        );
      }
    }
    const state = smallFormState();
    state.datasetMode = "upload";
    state.uploadName = "upload.csv";
    state.uploadText = lines.join("\n") + "\n";
    state.folds = 4;
    const outcome = await trainingCenterFlow(client, state, {
      intervalMs: 200,
      timeoutMs: 110_000,
    });
    expect(outcome.kind).toBe("finished");
    if (outcome.kind === "finished") {
      expect(outcome.job.state).toBe("succeeded");
    }
  });

  it("resumes job state from the server after a page reload", async () => {
    // A reload only keeps the job id (e.g. in the URL); the server is the
    // source of truth for its state.
    const jobs = await fetch(`${BASE}/api/v1/jobs`).then((r) => r.json());
    const done = jobs.jobs.find((j: any) => j.state === "succeeded");
    expect(done).toBeTruthy();
    const reloaded = await client.getJob(done.job_id);
    expect(reloaded.state).toBe("succeeded");
    expect(reloaded.result).toEqual(done.result);
  });
});
