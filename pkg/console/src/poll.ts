// Job polling: the server is the source of truth, the console just asks
// again until the job reaches a terminal state.

import type { ApiClient } from "./api.js";
import type { Job } from "./types.js";

export const DEFAULT_POLL_INTERVAL_MS = 2000;

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  onUpdate?: (job: Job) => void;
}

export async function pollJob(
  client: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<Job> {
  const interval = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
  const deadline =
    options.timeoutMs !== undefined ? Date.now() + options.timeoutMs : null;
  for (;;) {
    const job = await client.getJob(jobId);
    options.onUpdate?.(job);
    if (job.state === "succeeded" || job.state === "failed") {
      return job;
    }
    if (deadline !== null && Date.now() >= deadline) {
      throw new Error(`job ${jobId} still ${job.state} after timeout`);
    }
    await sleep(interval);
  }
}
