"""Active-pipeline management with atomic swap.

The current deployment is an immutable snapshot (version + pipeline).
Activation builds and validates the whole replacement before publishing
it with a single reference assignment, so a classify call sees entirely
the old or entirely the new pipeline. The descriptor is persisted and
restored on startup.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from ..assign import AssignError, AssignmentPipeline
from ..corpus import DEFAULT_TAXONOMY, Taxonomy
from ..textprep import StopwordList
from .registry import ModelRegistry, RegistryError
from .stores import DocumentStore

_DOC_ID = "current"
_COLLECTION = "deployment"


class DeploymentError(ValueError):
    pass


@dataclass(frozen=True)
class Deployment:
    version: int
    strategy: str
    model_ids: dict[str, str]
    activated_at: str
    pipeline: AssignmentPipeline

    def descriptor(self) -> dict:
        return {
            "version": self.version,
            "strategy": self.strategy,
            "models": dict(self.model_ids),
            "activated_at": self.activated_at,
        }


class DeploymentManager:
    def __init__(
        self,
        registry: ModelRegistry,
        docs: DocumentStore,
        stopwords: StopwordList,
        taxonomy: Taxonomy = DEFAULT_TAXONOMY,
    ) -> None:
        self.registry = registry
        self.docs = docs
        self.stopwords = stopwords
        self.taxonomy = taxonomy
        self._lock = threading.Lock()
        self._current: Optional[Deployment] = None
        self._version_floor = 0
        self._restore()

    def _restore(self) -> None:
        try:
            saved = self.docs.get(_COLLECTION, _DOC_ID)
        except KeyError:
            return
        # Even if the artifacts are gone, later activations must keep the
        # version strictly increasing.
        self._version_floor = int(saved.get("version", 0))
        try:
            pipeline = self._build(saved["strategy"], saved["models"])
        except (DeploymentError, RegistryError):
            return  # artifacts gone; start without an active deployment
        self._current = Deployment(
            version=saved["version"],
            strategy=saved["strategy"],
            model_ids=saved["models"],
            activated_at=saved["activated_at"],
            pipeline=pipeline,
        )

    def _build(self, strategy: str, model_ids: dict) -> AssignmentPipeline:
        models = {}
        for stage, model_id in model_ids.items():
            try:
                models[stage] = self.registry.load(model_id)
            except RegistryError as exc:
                raise DeploymentError(str(exc)) from None
        try:
            return AssignmentPipeline(
                strategy=strategy,
                models=models,
                stopwords=self.stopwords,
                taxonomy=self.taxonomy,
                model_ids=dict(model_ids),
            )
        except AssignError as exc:
            raise DeploymentError(str(exc)) from None

    def activate(self, strategy: str, model_ids: dict) -> Deployment:
        """Validate and publish a new deployment; failures leave the
        previous one serving."""
        pipeline = self._build(strategy, model_ids)
        with self._lock:
            current = self._current.version if self._current else 0
            version = max(current, self._version_floor) + 1
            deployment = Deployment(
                version=version,
                strategy=strategy,
                model_ids=dict(model_ids),
                activated_at=datetime.now(timezone.utc).isoformat(),
                pipeline=pipeline,
            )
            self.docs.put(_COLLECTION, _DOC_ID, deployment.descriptor())
            self._current = deployment
        return deployment

    def current(self) -> Optional[Deployment]:
        return self._current
