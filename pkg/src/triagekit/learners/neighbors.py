"""k-nearest-neighbour classifier with cosine similarity on TF-IDF vectors.

Neighbour ranking ties break toward the lower training index, so
predictions do not depend on floating-point argsort quirks. A zero query
vector falls back to the training class priors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vectorize import LabeledDataset, SparseVector
from . import dense_matrix, dense_vector


@dataclass(frozen=True)
class KNearest:
    columns: tuple[int, ...]
    k: int
    n_labels: int
    X_unit: np.ndarray   # rows L2-normalized; zero rows stay zero
    y: np.ndarray
    priors: np.ndarray

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "KNearest":
        k = int(hyper.get("k", 1))
        X, y, columns = dense_matrix(data)
        norms = np.linalg.norm(X, axis=1, keepdims=True)
        X_unit = np.divide(X, norms, out=np.zeros_like(X), where=norms > 0)
        counts = np.bincount(y, minlength=len(data.label_set)).astype(float)
        return cls(columns=columns, k=min(k, len(y)), n_labels=len(data.label_set),
                   X_unit=X_unit, y=y, priors=counts / counts.sum())

    def scores(self, vector: SparseVector) -> np.ndarray:
        x = dense_vector(vector, self.columns)
        norm = np.linalg.norm(x)
        if norm == 0:
            return self.priors.copy()
        sims = self.X_unit @ (x / norm)
        order = np.argsort(-sims, kind="stable")[: self.k]
        votes = np.bincount(self.y[order], minlength=self.n_labels).astype(float)
        return votes / votes.sum()

    def to_params(self) -> dict:
        return {
            "columns": list(self.columns),
            "k": self.k,
            "n_labels": self.n_labels,
            "X_unit": self.X_unit.tolist(),
            "y": self.y.tolist(),
            "priors": self.priors.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "KNearest":
        return cls(
            columns=tuple(params["columns"]),
            k=int(params["k"]),
            n_labels=int(params["n_labels"]),
            X_unit=np.array(params["X_unit"]),
            y=np.array(params["y"], dtype=np.int64),
            priors=np.array(params["priors"]),
        )
