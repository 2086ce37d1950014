"""Random forest of Gini decision trees with threshold splits.

Trees draw a feature subset per split (sqrt of the feature count by
default) and train on bootstrap samples. Per-tree seeds derive from the
forest seed, so training is deterministic regardless of tree count. The
forest predicts by majority vote; scores are vote fractions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vectorize import LabeledDataset, SparseVector
from . import dense_matrix, dense_vector

_EPS = 1e-12


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.sum(p * p))


def _best_split(X: np.ndarray, y: np.ndarray, idx: np.ndarray, k: int,
                feature_order: np.ndarray):
    """Scan candidate features for the Gini-minimizing threshold.

    Features are scanned in the given order with strict improvement, so the
    outcome is deterministic for a fixed rng draw.
    """
    n = idx.size
    total = np.bincount(y[idx], minlength=k).astype(float)
    parent = _gini(total)
    if parent <= _EPS:
        return None
    best = (parent - _EPS, -1, 0.0)
    for f in feature_order:
        vals = X[idx, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        sy = y[idx][order]
        cut = np.nonzero(sv[:-1] < sv[1:])[0]
        if cut.size == 0:
            continue
        onehot = np.zeros((n, k))
        onehot[np.arange(n), sy] = 1.0
        left = np.cumsum(onehot, axis=0)[cut]
        right = total - left
        ln = left.sum(axis=1)
        rn = right.sum(axis=1)
        gl = 1.0 - np.sum((left / ln[:, None]) ** 2, axis=1)
        gr = 1.0 - np.sum((right / rn[:, None]) ** 2, axis=1)
        weighted = (ln * gl + rn * gr) / n
        j = int(np.argmin(weighted))
        if weighted[j] < best[0]:
            best = (float(weighted[j]), int(f), float((sv[cut[j]] + sv[cut[j] + 1]) / 2))
    if best[1] < 0:
        return None
    return best[1], best[2]


def _grow(X, y, idx, k, rng, depth, max_depth, m_features):
    counts = np.bincount(y[idx], minlength=k).astype(float)
    dist = counts / counts.sum()
    if counts.max() == counts.sum() or (max_depth is not None and depth >= max_depth) \
            or idx.size < 2:
        return {"leaf": dist.tolist()}
    d = X.shape[1]
    feature_order = rng.permutation(d)[:m_features]
    split = _best_split(X, y, idx, k, feature_order)
    if split is None:
        return {"leaf": dist.tolist()}
    f, thr = split
    mask = X[idx, f] <= thr
    left = _grow(X, y, idx[mask], k, rng, depth + 1, max_depth, m_features)
    right = _grow(X, y, idx[~mask], k, rng, depth + 1, max_depth, m_features)
    return {"f": f, "t": thr, "l": left, "r": right}


def _walk(node: dict, x: np.ndarray) -> np.ndarray:
    while "leaf" not in node:
        node = node["l"] if x[node["f"]] <= node["t"] else node["r"]
    return np.asarray(node["leaf"])


def _resolve_m(features_per_split, d: int) -> int:
    if features_per_split == "all":
        return d
    if features_per_split in (None, "sqrt"):
        return max(1, int(np.sqrt(d)))
    return max(1, min(d, int(features_per_split)))


@dataclass(frozen=True)
class DecisionTree:
    """Single Gini tree; exposed so the one-tree forest property can be
    checked against it directly."""

    columns: tuple[int, ...]
    n_labels: int
    root: dict

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "DecisionTree":
        X, y, columns = dense_matrix(data)
        # Same seed derivation as the forest's first tree, so a one-tree
        # forest without bootstrap replays this exact construction.
        rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
        m = _resolve_m(hyper.get("features_per_split", "all"), X.shape[1])
        root = _grow(X, y, np.arange(X.shape[0]), len(data.label_set), rng,
                     0, hyper.get("max_depth"), m)
        return cls(columns=columns, n_labels=len(data.label_set), root=root)

    def scores(self, vector: SparseVector) -> np.ndarray:
        return _walk(self.root, dense_vector(vector, self.columns))


@dataclass(frozen=True)
class RandomForest:
    columns: tuple[int, ...]
    n_labels: int
    trees: tuple[dict, ...]

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "RandomForest":
        n_trees = int(hyper.get("trees", 100))
        max_depth = hyper.get("max_depth")
        bootstrap = bool(hyper.get("bootstrap", True))
        X, y, columns = dense_matrix(data)
        n, d = X.shape
        k = len(data.label_set)
        m = _resolve_m(hyper.get("features_per_split", "sqrt"), d)
        trees = []
        for child_seq in np.random.SeedSequence(seed).spawn(n_trees):
            rng = np.random.default_rng(child_seq)
            idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
            trees.append(_grow(X, y, idx, k, rng, 0, max_depth, m))
        return cls(columns=columns, n_labels=k, trees=tuple(trees))

    def scores(self, vector: SparseVector) -> np.ndarray:
        x = dense_vector(vector, self.columns)
        votes = np.zeros(self.n_labels)
        for tree in self.trees:
            votes[int(np.argmax(_walk(tree, x)))] += 1.0
        return votes / votes.sum()

    def to_params(self) -> dict:
        return {"columns": list(self.columns), "n_labels": self.n_labels,
                "trees": list(self.trees)}

    @classmethod
    def from_params(cls, params: dict) -> "RandomForest":
        return cls(columns=tuple(params["columns"]),
                   n_labels=int(params["n_labels"]),
                   trees=tuple(params["trees"]))
