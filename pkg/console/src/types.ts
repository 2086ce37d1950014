// Shapes returned by the assignment service API.

export type JobState = "queued" | "running" | "succeeded" | "failed";

export interface Job {
  job_id: string;
  state: JobState;
  created_at: string;
  started_at: string | null;
  finished_at: string | null;
  result: {
    strategy: string;
    model_ids: Record<string, string>;
    report_ids: Record<string, string | null>;
  } | null;
  error: string | null;
}

export interface ModelEntry {
  model_id: string;
  kind: string;
  stage: string | null;
  label_set: string[];
  created_at: string;
  report_id: string | null;
}

export interface DeploymentDescriptor {
  active?: boolean;
  version: number;
  strategy?: string;
  models?: Record<string, string>;
  activated_at?: string;
}

export interface BatchRow {
  key: string;
  summary: string;
  description: string;
  team: string;
  subteam: string;
  team_confidence: string;
  subteam_confidence: string;
  error: string;
}

// A report fetched from the API: parsed body for structure, raw text so
// metric cells can be displayed byte-for-byte as the server sent them.
export interface FetchedReport {
  raw: string;
  body: {
    label_set: string[];
    folds: number;
    repeats: number;
    summary: Record<string, number>;
  };
}

export type Strategy = "S1" | "S2";

export interface ClassifierChoice {
  kind: string;
  hyperparameters: Record<string, unknown>;
  seed: number;
}

export interface TrainingFormState {
  datasetMode: "bundled" | "upload";
  bundledSpec: string;
  datasetSeed: number;
  uploadName: string;
  uploadText: string;
  strategy: Strategy;
  classifiers: Record<string, ClassifierChoice>;
  resampleMethod: "none" | "undersample" | "oversample" | "smote";
  folds: number;
  repeats: number;
  evalSeed: number;
  trainingWeeks: number | null;
  testingWeeks: number | null;
}
