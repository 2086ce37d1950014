"""Multinomial naive Bayes over TF-IDF weights.

Feature weights are treated as (fractional) event counts. Laplace smoothing
with alpha = 1 by default. An all-zero vector scores exactly the class
priors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vectorize import LabeledDataset, SparseVector
from . import dense_matrix, dense_vector


@dataclass(frozen=True)
class MultinomialNB:
    columns: tuple[int, ...]
    log_prior: np.ndarray        # (K,)
    log_likelihood: np.ndarray   # (K, d)

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "MultinomialNB":
        alpha = float(hyper.get("alpha", 1.0))
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        X, y, columns = dense_matrix(data)
        k = len(data.label_set)
        d = X.shape[1]
        class_counts = np.bincount(y, minlength=k).astype(float)
        log_prior = np.log(class_counts / class_counts.sum())
        term_mass = np.zeros((k, d))
        for c in range(k):
            term_mass[c] = X[y == c].sum(axis=0)
        smoothed = term_mass + alpha
        log_lik = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
        return cls(columns=columns, log_prior=log_prior, log_likelihood=log_lik)

    def scores(self, vector: SparseVector) -> np.ndarray:
        x = dense_vector(vector, self.columns)
        logp = self.log_prior + self.log_likelihood @ x
        logp -= logp.max()
        p = np.exp(logp)
        return p / p.sum()

    def to_params(self) -> dict:
        return {
            "columns": list(self.columns),
            "log_prior": self.log_prior.tolist(),
            "log_likelihood": self.log_likelihood.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "MultinomialNB":
        return cls(
            columns=tuple(params["columns"]),
            log_prior=np.array(params["log_prior"]),
            log_likelihood=np.array(params["log_likelihood"]),
        )
