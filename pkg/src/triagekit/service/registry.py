"""Model registry: artifacts in the blob store, metadata and evaluation
reports in the document store."""

from __future__ import annotations

import uuid
from datetime import datetime, timezone
from typing import Optional

from ..artifacts import dump_model, load_model
from ..evaluate import EvaluationReport
from ..learners import TrainedModel
from .stores import BlobStore, DocumentStore


class RegistryError(KeyError):
    pass


class ModelRegistry:
    def __init__(self, blobs: BlobStore, docs: DocumentStore) -> None:
        self.blobs = blobs
        self.docs = docs

    def register(
        self,
        model: TrainedModel,
        report: Optional[EvaluationReport] = None,
        stage: Optional[str] = None,
    ) -> str:
        model_id = f"m-{uuid.uuid4().hex[:12]}"
        report_id = None
        if report is not None:
            report_id = f"r-{uuid.uuid4().hex[:12]}"
            self.docs.put("reports", report_id, report.to_dict())
        self.blobs.put(f"models/{model_id}.tkm", dump_model(model))
        window = model.training_window
        self.docs.put("models", model_id, {
            "model_id": model_id,
            "kind": model.spec.kind,
            "stage": stage,
            "label_set": list(model.label_set),
            "hyperparameters": dict(model.spec.hyperparameters),
            "seed": model.spec.seed,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "trained_at": model.trained_at.isoformat(),
            "training_window": ([window[0].isoformat(), window[1].isoformat()]
                                if window else None),
            "report_id": report_id,
        })
        return model_id

    def load(self, model_id: str) -> TrainedModel:
        name = f"models/{model_id}.tkm"
        if not self.blobs.exists(name):
            raise RegistryError(f"unknown model {model_id!r}")
        return load_model(self.blobs.get(name))

    def entry(self, model_id: str) -> dict:
        try:
            return self.docs.get("models", model_id)
        except KeyError:
            raise RegistryError(f"unknown model {model_id!r}") from None

    def exists(self, model_id: str) -> bool:
        return self.docs.exists("models", model_id)

    def list_models(self) -> list[dict]:
        return sorted(self.docs.list("models"), key=lambda d: d["created_at"])

    def get_report(self, model_id: str) -> dict:
        entry = self.entry(model_id)
        report_id = entry.get("report_id")
        if not report_id:
            raise RegistryError(f"model {model_id!r} has no stored report")
        try:
            return self.docs.get("reports", report_id)
        except KeyError:
            raise RegistryError(f"report {report_id!r} missing") from None
