"""Majority-class baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vectorize import LabeledDataset, SparseVector


@dataclass(frozen=True)
class ZeroR:
    """Always predicts the training majority class, with probability one."""

    n_labels: int
    majority_index: int

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "ZeroR":
        counts = data.class_counts()
        best = max(range(len(data.label_set)),
                   key=lambda i: (counts[data.label_set[i]], -i))
        return cls(n_labels=len(data.label_set), majority_index=best)

    def scores(self, vector: SparseVector) -> np.ndarray:
        out = np.zeros(self.n_labels)
        out[self.majority_index] = 1.0
        return out

    def to_params(self) -> dict:
        return {"n_labels": self.n_labels, "majority_index": self.majority_index}

    @classmethod
    def from_params(cls, params: dict) -> "ZeroR":
        return cls(n_labels=int(params["n_labels"]),
                   majority_index=int(params["majority_index"]))
