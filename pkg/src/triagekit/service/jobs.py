"""Asynchronous training jobs with a persisted journal.

Jobs move queued -> running -> succeeded | failed. Every transition is
written to the document store, so a restarted service still knows about
every job: finished jobs keep their result, jobs that were queued are
re-queued, and jobs caught mid-run are marked failed as interrupted.
"""

from __future__ import annotations

import queue
import threading
import traceback
import uuid
from datetime import datetime, timezone
from typing import Callable, Optional

from .stores import DocumentStore

QUEUED = "queued"
RUNNING = "running"
SUCCEEDED = "succeeded"
FAILED = "failed"

_COLLECTION = "jobs"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class JobManager:
    def __init__(
        self,
        docs: DocumentStore,
        runner: Callable[[dict], dict],
        workers: int = 1,
    ) -> None:
        self.docs = docs
        self.runner = runner
        self.workers = max(1, workers)
        self._queue: "queue.Queue[Optional[str]]" = queue.Queue()
        self._threads: list[threading.Thread] = []
        self._lock = threading.Lock()
        self._recover()

    def _recover(self) -> None:
        for job in self.docs.list(_COLLECTION):
            if job["state"] == RUNNING:
                job["state"] = FAILED
                job["error"] = "interrupted by service restart"
                job["finished_at"] = _now()
                self.docs.put(_COLLECTION, job["job_id"], job)
            elif job["state"] == QUEUED:
                self._queue.put(job["job_id"])

    def start(self) -> None:
        for n in range(self.workers):
            thread = threading.Thread(target=self._work, daemon=True,
                                      name=f"training-worker-{n}")
            thread.start()
            self._threads.append(thread)

    def stop(self) -> None:
        for _ in self._threads:
            self._queue.put(None)
        for thread in self._threads:
            thread.join(timeout=10)
        self._threads.clear()

    def submit(self, request: dict) -> str:
        job_id = f"j-{uuid.uuid4().hex[:12]}"
        self.docs.put(_COLLECTION, job_id, {
            "job_id": job_id,
            "request": request,
            "state": QUEUED,
            "created_at": _now(),
            "started_at": None,
            "finished_at": None,
            "result": None,
            "error": None,
        })
        self._queue.put(job_id)
        return job_id

    def get(self, job_id: str) -> dict:
        return self.docs.get(_COLLECTION, job_id)

    def list_jobs(self) -> list[dict]:
        return sorted(self.docs.list(_COLLECTION), key=lambda j: j["created_at"])

    def _update(self, job_id: str, **fields) -> dict:
        with self._lock:
            job = self.docs.get(_COLLECTION, job_id)
            job.update(fields)
            self.docs.put(_COLLECTION, job_id, job)
            return job

    def _work(self) -> None:
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            try:
                job = self.docs.get(_COLLECTION, job_id)
            except KeyError:
                continue
            if job["state"] != QUEUED:
                continue
            self._update(job_id, state=RUNNING, started_at=_now())
            try:
                result = self.runner(job["request"])
            except Exception as exc:
                self._update(job_id, state=FAILED, finished_at=_now(),
                             error=f"{type(exc).__name__}: {exc}")
                traceback.print_exc()
                continue
            self._update(job_id, state=SUCCEEDED, finished_at=_now(),
                         result=result)
