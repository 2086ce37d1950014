// Training form state, client-side validation mirroring the service
// schema, and request building. The server remains the source of truth;
// these checks only keep obviously invalid submissions from leaving the
// page.

import type {
  ClassifierChoice,
  ModelEntry,
  Strategy,
  TrainingFormState,
} from "./types.js";

export const CLASSIFIER_KINDS = [
  "zero_r",
  "naive_bayes_multinomial",
  "knn",
  "logistic_regression",
  "sgd_text",
  "random_forest",
];

export const TEAMS = ["T_A", "T_B"];
export const SUBTEAMS_BY_TEAM: Record<string, string[]> = {
  T_A: ["ST1", "ST2", "ST3"],
  T_B: ["ST4", "ST5", "ST6"],
};

export function stagesFor(strategy: Strategy): string[] {
  return strategy === "S1" ? ["flat"] : ["team", ...TEAMS];
}

export function defaultClassifier(stage: string): ClassifierChoice {
  if (stage === "team") {
    return { kind: "sgd_text", hyperparameters: { epochs: 200 }, seed: 0 };
  }
  return {
    kind: "logistic_regression",
    hyperparameters: { epochs: 100 },
    seed: 0,
  };
}

export function defaultFormState(): TrainingFormState {
  const state: TrainingFormState = {
    datasetMode: "bundled",
    bundledSpec: "noise-free",
    datasetSeed: 42,
    uploadName: "",
    uploadText: "",
    strategy: "S2",
    classifiers: {},
    resampleMethod: "none",
    folds: 10,
    repeats: 2,
    evalSeed: 0,
    trainingWeeks: null,
    testingWeeks: null,
  };
  for (const stage of stagesFor(state.strategy)) {
    state.classifiers[stage] = defaultClassifier(stage);
  }
  return state;
}

/** Field-keyed validation messages; empty object means submittable. */
export function validateTrainingForm(
  state: TrainingFormState,
): Record<string, string> {
  const errors: Record<string, string> = {};
  if (state.datasetMode === "bundled") {
    if (!state.bundledSpec) errors["dataset"] = "pick a bundled dataset";
  } else if (!state.uploadText.trim()) {
    errors["dataset"] = "choose a CSV file to upload";
  }
  for (const stage of stagesFor(state.strategy)) {
    const choice = state.classifiers[stage];
    if (!choice) {
      errors[`classifiers.${stage}`] = "required";
      continue;
    }
    if (!CLASSIFIER_KINDS.includes(choice.kind)) {
      errors[`classifiers.${stage}`] = `unknown kind ${choice.kind}`;
    } else if (choice.kind === "sgd_text" && stage !== "team") {
      errors[`classifiers.${stage}`] =
        "sgd_text is binary-only: it fits the team stage, not " + stage;
    }
  }
  if (!Number.isInteger(state.folds) || state.folds < 2) {
    errors["folds"] = "folds must be an integer >= 2";
  }
  if (!Number.isInteger(state.repeats) || state.repeats < 1) {
    errors["repeats"] = "repeats must be an integer >= 1";
  }
  const windowHalf =
    (state.trainingWeeks === null) !== (state.testingWeeks === null);
  if (windowHalf) {
    errors["windows"] = "set both training and testing weeks, or neither";
  }
  if (state.trainingWeeks !== null && state.trainingWeeks <= 0) {
    errors["windows"] = "training weeks must be positive";
  }
  if (state.testingWeeks !== null && state.testingWeeks <= 0) {
    errors["windows"] = "testing weeks must be positive";
  }
  return errors;
}

export function buildTrainingRequest(state: TrainingFormState): unknown {
  const dataset =
    state.datasetMode === "bundled"
      ? { synthetic: { spec: state.bundledSpec, seed: state.datasetSeed } }
      : { csv: { text: state.uploadText } };
  const classifiers: Record<string, unknown> = {};
  for (const stage of stagesFor(state.strategy)) {
    classifiers[stage] = state.classifiers[stage];
  }
  const request: Record<string, unknown> = {
    dataset,
    strategy: state.strategy,
    classifiers,
    resample: { method: state.resampleMethod },
    evaluation: {
      folds: state.folds,
      repeats: state.repeats,
      seed: state.evalSeed,
    },
  };
  return request;
}

// ---------------------------------------------------------------------
// Activation selection guard
// ---------------------------------------------------------------------

function sameLabels(a: string[], b: string[]): boolean {
  const x = [...a].sort();
  const y = [...b].sort();
  return x.length === y.length && x.every((v, i) => v === y[i]);
}

/** Client-side pipeline check: returns an error message, or null when the
 *  selection can be submitted. */
export function validateSelection(
  strategy: Strategy,
  selection: Record<string, ModelEntry | undefined>,
): string | null {
  if (strategy === "S1") {
    const flat = selection["flat"];
    if (!flat) return "select a flat six-way model";
    const all = TEAMS.flatMap((t) => SUBTEAMS_BY_TEAM[t]);
    if (!sameLabels(flat.label_set, all)) {
      return `flat model labels [${flat.label_set}] do not cover all sub-teams`;
    }
    return null;
  }
  const team = selection["team"];
  if (!team) return "select a team model";
  if (!sameLabels(team.label_set, TEAMS)) {
    return `team model labels [${team.label_set}] must be exactly [${TEAMS}]`;
  }
  for (const t of TEAMS) {
    const sub = selection[t];
    if (!sub) return `select a sub-team model for ${t}`;
    if (!sameLabels(sub.label_set, SUBTEAMS_BY_TEAM[t])) {
      return (
        `${t} model labels [${sub.label_set}] do not match ` +
        `[${SUBTEAMS_BY_TEAM[t]}]`
      );
    }
  }
  return null;
}

export function selectionToModelIds(
  strategy: Strategy,
  selection: Record<string, ModelEntry | undefined>,
): Record<string, string> {
  const ids: Record<string, string> = {};
  for (const stage of stagesFor(strategy)) {
    const entry = selection[stage];
    if (entry) ids[stage] = entry.model_id;
  }
  return ids;
}
