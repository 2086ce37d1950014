// Flow controllers against fake clients: error paths that the e2e test
// cannot trigger deterministically (network loss, server rejection).

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import {
  activateModelsFlow,
  batchClassificationFlow,
  trainingCenterFlow,
} from "../src/flows.js";
import { defaultFormState } from "../src/state.js";
import type { ModelEntry } from "../src/types.js";

function fakeClient(overrides: Partial<Record<keyof ApiClient, unknown>>) {
  return overrides as unknown as ApiClient;
}

function entry(stage: string, labels: string[]): ModelEntry {
  return {
    model_id: `m-${stage}`,
    kind: "knn",
    stage,
    label_set: labels,
    created_at: "2020-01-01",
    report_id: null,
  };
}

const GOOD_SELECTION = {
  team: entry("team", ["T_A", "T_B"]),
  T_A: entry("T_A", ["ST1", "ST2", "ST3"]),
  T_B: entry("T_B", ["ST4", "ST5", "ST6"]),
};

describe("trainingCenterFlow", () => {
  it("keeps the form state on network failure so retry can resubmit", async () => {
    const state = defaultFormState();
    const client = fakeClient({
      submitTraining: async () => {
        throw new TypeError("fetch failed");
      },
    });
    const outcome = await trainingCenterFlow(client, state);
    expect(outcome.kind).toBe("network-error");
    if (outcome.kind === "network-error") {
      expect(outcome.state).toBe(state); // same object, nothing lost
      expect(outcome.message).toMatch(/fetch failed/);
    }
  });

  it("surfaces server-side field errors as rejected", async () => {
    const client = fakeClient({
      submitTraining: async () => {
        throw new ApiError(422, "invalid training config",
                           ["classifiers.team: unknown kind"]);
      },
    });
    const outcome = await trainingCenterFlow(client, defaultFormState());
    expect(outcome.kind).toBe("rejected");
    if (outcome.kind === "rejected") {
      expect(outcome.errors[0]).toMatch(/classifiers.team/);
    }
  });

  it("does not call the server when local validation fails", async () => {
    let called = false;
    const state = defaultFormState();
    state.folds = 0;
    const client = fakeClient({
      submitTraining: async () => {
        called = true;
        return "j-1";
      },
    });
    const outcome = await trainingCenterFlow(client, state);
    expect(outcome.kind).toBe("invalid");
    expect(called).toBe(false);
  });
});

describe("activateModelsFlow", () => {
  it("reports the still-serving deployment when the server rejects", async () => {
    const client = fakeClient({
      activate: async () => {
        throw new ApiError(409, "unknown model 'm-gone'");
      },
      getDeployment: async () => ({ active: true, version: 7 }),
    });
    const outcome = await activateModelsFlow(client, "S2", GOOD_SELECTION);
    expect(outcome.kind).toBe("rejected");
    if (outcome.kind === "rejected") {
      expect(outcome.current.version).toBe(7);
      expect(outcome.message).toMatch(/m-gone/);
    }
  });

  it("blocks locally before any request", async () => {
    let called = false;
    const client = fakeClient({
      activate: async () => {
        called = true;
        return { version: 1 };
      },
    });
    const outcome = await activateModelsFlow(client, "S2", {
      team: GOOD_SELECTION.team,
    });
    expect(outcome.kind).toBe("blocked");
    expect(called).toBe(false);
  });
});

describe("batchClassificationFlow", () => {
  it("renders server errors verbatim", async () => {
    const client = fakeClient({
      classifyBatch: async () => {
        throw new ApiError(409, "no active deployment");
      },
    });
    const outcome = await batchClassificationFlow(
      client, "key,summary,description\nK,s,d\n");
    expect(outcome.kind).toBe("rejected");
    if (outcome.kind === "rejected") {
      expect(outcome.message).toBe("no active deployment");
    }
  });

  it("blocks a bad header before uploading", async () => {
    let called = false;
    const client = fakeClient({
      classifyBatch: async () => {
        called = true;
        return "";
      },
    });
    const outcome = await batchClassificationFlow(client, "a,b\n1,2\n");
    expect(outcome.kind).toBe("blocked");
    expect(called).toBe(false);
  });
});
