"""Classifier suite behind a single train/predict contract.

Every learner consumes TF-IDF vectors from a shared FeatureSpace, is
deterministic given (spec, data, seed), and predicts a full probability
distribution over its label set. Argmax ties break toward the earlier label
in label_set order.

Kinds: zero_r, naive_bayes_multinomial, knn, logistic_regression,
sgd_text (binary only), random_forest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from ..vectorize import FeatureSpace, LabeledDataset, SparseVector

KINDS = (
    "zero_r",
    "naive_bayes_multinomial",
    "knn",
    "logistic_regression",
    "sgd_text",
    "random_forest",
)


class LearnerError(ValueError):
    pass


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LearnerError(f"unknown classifier kind {self.kind!r}")
        h = self.hyperparameters
        if self.kind == "knn" and h.get("k", 1) < 1:
            raise LearnerError("knn requires k >= 1")
        if self.kind == "random_forest" and h.get("trees", 100) < 1:
            raise LearnerError("random_forest requires trees >= 1")
        for name in ("ridge",):
            if h.get(name, 0.0) < 0:
                raise LearnerError(f"{name} must be non-negative")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "hyperparameters": dict(self.hyperparameters),
                "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierSpec":
        return cls(kind=data["kind"],
                   hyperparameters=dict(data.get("hyperparameters", {})),
                   seed=int(data.get("seed", 0)))


@dataclass(frozen=True)
class Distribution:
    """Per-label scores; non-negative, summing to one."""

    label_set: tuple[str, ...]
    scores: tuple[float, ...]

    def __post_init__(self):
        if len(self.label_set) != len(self.scores):
            raise LearnerError("label/score length mismatch")
        if any(s < 0 for s in self.scores):
            raise LearnerError("negative score in distribution")
        if abs(sum(self.scores) - 1.0) > 1e-9:
            raise LearnerError(f"scores sum to {sum(self.scores)}, not 1")

    def top(self) -> tuple[str, float]:
        best = 0
        for i in range(1, len(self.scores)):
            if self.scores[i] > self.scores[best]:
                best = i
        return self.label_set[best], self.scores[best]

    def score_of(self, label: str) -> float:
        return self.scores[self.label_set.index(label)]


def _normalized(label_set: tuple[str, ...], raw: np.ndarray) -> Distribution:
    raw = np.asarray(raw, dtype=float)
    raw = np.clip(raw, 0.0, None)
    total = raw.sum()
    if total <= 0:
        raw = np.ones_like(raw)
        total = raw.sum()
    scores = raw / total
    # Compensate float dust so downstream sum checks hold exactly enough.
    scores = scores / scores.sum()
    return Distribution(label_set=label_set, scores=tuple(float(s) for s in scores))


def dense_matrix(dataset: LabeledDataset) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    """Densify a dataset onto the space's selected columns.

    Returns (X, y, columns) where y holds label_set indices and columns maps
    dense column -> term index.
    """
    columns = dataset.space.columns()
    col_of = {term_idx: j for j, term_idx in enumerate(columns)}
    X = np.zeros((len(dataset), len(columns)))
    for row, vec in enumerate(dataset.vectors):
        for idx, w in vec.entries:
            j = col_of.get(idx)
            if j is not None:
                X[row, j] = w
    label_index = {lab: i for i, lab in enumerate(dataset.label_set)}
    y = np.array([label_index[lab] for lab in dataset.labels], dtype=np.int64)
    return X, y, columns


def dense_vector(vector: SparseVector, columns: tuple[int, ...]) -> np.ndarray:
    col_of = {term_idx: j for j, term_idx in enumerate(columns)}
    x = np.zeros(len(columns))
    for idx, w in vector.entries:
        j = col_of.get(idx)
        if j is not None:
            x[j] = w
    return x


@dataclass(frozen=True)
class TrainedModel:
    spec: ClassifierSpec
    label_set: tuple[str, ...]
    space: FeatureSpace
    learner: "object"
    trained_at: datetime
    training_window: Optional[tuple[datetime, datetime]] = None
    metrics_ref: Optional[str] = None


def train(
    spec: ClassifierSpec,
    data: LabeledDataset,
    training_window: Optional[tuple[datetime, datetime]] = None,
) -> TrainedModel:
    """Fit a classifier. Deterministic given (spec, data)."""
    if len(data) == 0:
        raise LearnerError("cannot train on an empty dataset")
    if spec.kind == "sgd_text" and len(data.label_set) != 2:
        raise LearnerError(
            f"binary-only classifier: sgd_text got {len(data.label_set)} labels")
    from . import baseline, bayes, forest, linear, neighbors

    fitters = {
        "zero_r": baseline.ZeroR.fit,
        "naive_bayes_multinomial": bayes.MultinomialNB.fit,
        "knn": neighbors.KNearest.fit,
        "logistic_regression": linear.SoftmaxRegression.fit,
        "sgd_text": linear.HingeSGD.fit,
        "random_forest": forest.RandomForest.fit,
    }
    learner = fitters[spec.kind](data, spec.hyperparameters, spec.seed)
    return TrainedModel(
        spec=spec,
        label_set=data.label_set,
        space=data.space,
        learner=learner,
        trained_at=datetime.now(timezone.utc),
        training_window=training_window,
    )


def predict(model: TrainedModel, vector: SparseVector) -> Distribution:
    """Score one vector; the classification is the distribution argmax."""
    raw = model.learner.scores(vector)
    return _normalized(model.label_set, raw)


def classify(model: TrainedModel, vector: SparseVector) -> str:
    return predict(model, vector).top()[0]
