"""Versioned model artifact container.

Layout: one ASCII header line carrying the magic and schema version,
followed by a gzip-compressed JSON payload. Floats survive the round trip
exactly (shortest-repr JSON encoding), so a reloaded model predicts
identically to the original.
"""

from __future__ import annotations

import gzip
import json
from datetime import datetime

from .learners import ClassifierSpec, TrainedModel
from .learners.baseline import ZeroR
from .learners.bayes import MultinomialNB
from .learners.forest import RandomForest
from .learners.linear import HingeSGD, SoftmaxRegression
from .learners.neighbors import KNearest
from .vectorize import FeatureSpace

MAGIC = b"triagekit-model"
SCHEMA_VERSION = 1

_LEARNERS = {
    "zero_r": ZeroR,
    "naive_bayes_multinomial": MultinomialNB,
    "knn": KNearest,
    "logistic_regression": SoftmaxRegression,
    "sgd_text": HingeSGD,
    "random_forest": RandomForest,
}


class ArtifactError(ValueError):
    pass


def dump_model(model: TrainedModel) -> bytes:
    payload = {
        "schema": SCHEMA_VERSION,
        "kind": model.spec.kind,
        "spec": model.spec.to_dict(),
        "label_set": list(model.label_set),
        "space": model.space.to_dict(),
        "params": model.learner.to_params(),
        "trained_at": model.trained_at.isoformat(),
        "training_window": ([model.training_window[0].isoformat(),
                             model.training_window[1].isoformat()]
                            if model.training_window else None),
        "metrics_ref": model.metrics_ref,
    }
    header = b"%s %d\n" % (MAGIC, SCHEMA_VERSION)
    return header + gzip.compress(json.dumps(payload).encode("utf-8"))


def load_model(blob: bytes) -> TrainedModel:
    newline = blob.find(b"\n")
    if newline < 0:
        raise ArtifactError("truncated artifact: no header line")
    header = blob[:newline].split(b" ")
    if len(header) != 2 or header[0] != MAGIC:
        raise ArtifactError("not a model artifact (bad magic)")
    version = int(header[1])
    if version > SCHEMA_VERSION:
        raise ArtifactError(f"artifact schema {version} is newer than supported "
                            f"{SCHEMA_VERSION}")
    payload = json.loads(gzip.decompress(blob[newline + 1:]).decode("utf-8"))
    kind = payload["kind"]
    if kind not in _LEARNERS:
        raise ArtifactError(f"unknown learner kind {kind!r}")
    learner = _LEARNERS[kind].from_params(payload["params"])
    window = payload.get("training_window")
    return TrainedModel(
        spec=ClassifierSpec.from_dict(payload["spec"]),
        label_set=tuple(payload["label_set"]),
        space=FeatureSpace.from_dict(payload["space"]),
        learner=learner,
        trained_at=datetime.fromisoformat(payload["trained_at"]),
        training_window=((datetime.fromisoformat(window[0]),
                          datetime.fromisoformat(window[1])) if window else None),
        metrics_ref=payload.get("metrics_ref"),
    )


def save_model(model: TrainedModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dump_model(model))


def read_model(path) -> TrainedModel:
    with open(path, "rb") as fh:
        return load_model(fh.read())
