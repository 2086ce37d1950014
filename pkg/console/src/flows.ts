// Screen controllers. Each flow talks to the API client and reports what
// happened through a discriminated result, so the DOM layer (and the e2e
// tests) can react without re-deriving any state.

import { ApiClient, ApiError } from "./api.js";
import { parseCsv, validateBatchHeader } from "./csv.js";
import { pollJob, PollOptions } from "./poll.js";
import {
  buildTrainingRequest,
  selectionToModelIds,
  validateSelection,
  validateTrainingForm,
} from "./state.js";
import type {
  DeploymentDescriptor,
  Job,
  ModelEntry,
  Strategy,
  TrainingFormState,
} from "./types.js";
import type { AuditEntry } from "./views.js";

export type TrainingOutcome =
  | { kind: "invalid"; errors: Record<string, string> }
  | { kind: "rejected"; errors: string[] }
  | { kind: "network-error"; message: string; state: TrainingFormState }
  | { kind: "finished"; job: Job };

/** Validate locally, submit, and poll to a terminal state. The form state
 *  rides along unchanged on network failure so a retry resubmits as-is. */
export async function trainingCenterFlow(
  client: ApiClient,
  state: TrainingFormState,
  poll: PollOptions = {},
): Promise<TrainingOutcome> {
  const errors = validateTrainingForm(state);
  if (Object.keys(errors).length > 0) {
    return { kind: "invalid", errors };
  }
  let jobId: string;
  try {
    jobId = await client.submitTraining(buildTrainingRequest(state));
  } catch (err) {
    if (err instanceof ApiError) {
      return { kind: "rejected", errors: err.errors.length ? err.errors : [err.detail] };
    }
    return { kind: "network-error", message: String(err), state };
  }
  const job = await pollJob(client, jobId, poll);
  return { kind: "finished", job };
}

export type ActivationOutcome =
  | { kind: "blocked"; message: string }
  | { kind: "rejected"; message: string; current: DeploymentDescriptor }
  | { kind: "activated"; deployment: DeploymentDescriptor; audit: AuditEntry };

export async function activateModelsFlow(
  client: ApiClient,
  strategy: Strategy,
  selection: Record<string, ModelEntry | undefined>,
): Promise<ActivationOutcome> {
  const guard = validateSelection(strategy, selection);
  if (guard !== null) {
    return { kind: "blocked", message: guard };
  }
  try {
    const deployment = await client.activate(
      strategy,
      selectionToModelIds(strategy, selection),
    );
    return {
      kind: "activated",
      deployment,
      audit: {
        at: deployment.activated_at ?? new Date().toISOString(),
        version: deployment.version,
        strategy,
        models: deployment.models ?? {},
      },
    };
  } catch (err) {
    if (err instanceof ApiError) {
      // The previous deployment keeps serving; show what it is.
      const current = await client.getDeployment();
      return { kind: "rejected", message: err.detail, current };
    }
    throw err;
  }
}

export type BatchOutcome =
  | { kind: "blocked"; message: string }
  | { kind: "rejected"; message: string }
  | {
      kind: "classified";
      /** Exact server bytes; offered for download untouched. */
      download: string;
      header: string[];
      rows: string[][];
    };

export async function batchClassificationFlow(
  client: ApiClient,
  fileText: string,
): Promise<BatchOutcome> {
  const headerProblem = validateBatchHeader(fileText);
  if (headerProblem !== null) {
    return { kind: "blocked", message: headerProblem };
  }
  let csvOut: string;
  try {
    csvOut = await client.classifyBatch(fileText);
  } catch (err) {
    if (err instanceof ApiError) {
      return { kind: "rejected", message: err.detail };
    }
    throw err;
  }
  const parsed = parseCsv(csvOut);
  return {
    kind: "classified",
    download: csvOut,
    header: parsed.header,
    rows: parsed.rows,
  };
}

/** Registry refresh used by the training center after a job finishes. */
export async function refreshModels(client: ApiClient): Promise<ModelEntry[]> {
  return client.listModels();
}
