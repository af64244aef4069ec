"""Background job runner for training, evaluation, and sweeps.

One worker thread: jobs queue up and run strictly one at a time, so a
sweep can never race a training run for the model file.
"""

from __future__ import annotations

import threading
import time
import traceback
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable

JOB_STATES = ("queued", "running", "done", "failed")


class UnknownJob(KeyError):
    pass


@dataclass(frozen=True)
class Job:
    id: str
    kind: str
    status: str = "queued"
    result: Any = None
    error: str | None = None
    created_at: float = field(default_factory=time.time)
    finished_at: float | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "result": self.result,
            "error": self.error,
            "created_at": self.created_at,
            "finished_at": self.finished_at,
        }


class JobRunner:
    def __init__(self):
        self._executor = ThreadPoolExecutor(max_workers=1)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, kind: str, fn: Callable[[], Any]) -> Job:
        job = Job(id=uuid.uuid4().hex[:12], kind=kind)
        with self._lock:
            self._jobs[job.id] = job
        self._executor.submit(self._run, job.id, fn)
        return job

    def _run(self, job_id: str, fn: Callable[[], Any]) -> None:
        self._update(job_id, status="running")
        try:
            result = fn()
        except Exception:
            self._update(
                job_id,
                status="failed",
                error=traceback.format_exc(limit=5),
                finished_at=time.time(),
            )
        else:
            self._update(job_id, status="done", result=result, finished_at=time.time())

    def _update(self, job_id: str, **changes) -> None:
        with self._lock:
            self._jobs[job_id] = replace(self._jobs[job_id], **changes)

    def get(self, job_id: str) -> Job:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise UnknownJob(job_id)
        return job

    def wait(self, job_id: str, timeout: float = 300.0) -> Job:
        """Poll until the job leaves the queue; test helper."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            job = self.get(job_id)
            if job.status in ("done", "failed"):
                return job
            time.sleep(0.02)
        raise TimeoutError(f"job {job_id} still {self.get(job_id).status}")

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)
