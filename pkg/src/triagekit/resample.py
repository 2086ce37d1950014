"""Class-imbalance treatments. Applied to training splits only; the
evaluation harness never resamples test data.

undersample: every class down to the minority count, without replacement.
oversample: sample with replacement toward a uniform class distribution at
a configurable output size (default: twice the majority-class fraction of
the original size).
smote: interpolate synthetic minority points between same-class cosine
neighbours until every class matches the majority count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .vectorize import LabeledDataset, SparseVector

METHODS = ("none", "undersample", "oversample", "smote")


class ResampleError(ValueError):
    pass


@dataclass(frozen=True)
class ResampleSpec:
    method: str = "none"
    size_factor: Optional[float] = None   # oversample; None = 2 * majority fraction
    k_neighbors: int = 5                  # smote
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ResampleError(f"unknown resample method {self.method!r}")
        if self.size_factor is not None and self.size_factor <= 0:
            raise ResampleError("size_factor must be positive")
        if self.k_neighbors < 1:
            raise ResampleError("k_neighbors must be >= 1")

    def to_dict(self) -> dict:
        return {"method": self.method, "size_factor": self.size_factor,
                "k_neighbors": self.k_neighbors, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict) -> "ResampleSpec":
        return cls(
            method=data.get("method", "none"),
            size_factor=data.get("size_factor"),
            k_neighbors=int(data.get("k_neighbors", 5)),
            seed=int(data.get("seed", 0)),
        )


def apply(data: LabeledDataset, spec: ResampleSpec) -> LabeledDataset:
    if spec.method == "none":
        return data
    if spec.method == "undersample":
        return undersample(data, spec.seed)
    if spec.method == "oversample":
        return oversample(data, spec.size_factor, spec.seed)
    return smote(data, spec.k_neighbors, spec.seed)


def _by_class(data: LabeledDataset) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = {lab: [] for lab in data.label_set}
    for i, lab in enumerate(data.labels):
        groups[lab].append(i)
    return {lab: idxs for lab, idxs in groups.items() if idxs}


def undersample(data: LabeledDataset, seed: int) -> LabeledDataset:
    """Every class at exactly the minority-class count."""
    groups = _by_class(data)
    if len(groups) < 2:
        raise ResampleError("undersample needs at least two classes")
    rng = random.Random(seed)
    target = min(len(v) for v in groups.values())
    chosen: list[int] = []
    for lab in data.label_set:
        if lab in groups:
            chosen.extend(rng.sample(groups[lab], target))
    rng.shuffle(chosen)
    return data.subset(chosen)


def oversample(data: LabeledDataset, size_factor: Optional[float], seed: int) -> LabeledDataset:
    """Replacement sampling biased to a uniform class distribution.

    Output size is floor(size_factor * len(data)); the default factor is
    twice the majority-class fraction.
    """
    groups = _by_class(data)
    rng = random.Random(seed)
    if size_factor is None:
        majority = max(len(v) for v in groups.values())
        size_factor = 2.0 * majority / len(data)
    total = int(size_factor * len(data))
    classes = [lab for lab in data.label_set if lab in groups]
    base, extra = divmod(total, len(classes))
    # The remainder goes to a seeded draw of classes, keeping counts within 1.
    bonus = set(rng.sample(range(len(classes)), extra))
    chosen: list[int] = []
    for ci, lab in enumerate(classes):
        quota = base + (1 if ci in bonus else 0)
        chosen.extend(rng.choice(groups[lab]) for _ in range(quota))
    rng.shuffle(chosen)
    return data.subset(chosen)


def interpolate(a: SparseVector, b: SparseVector, delta: float) -> SparseVector:
    """Point on the segment a + delta * (b - a), over the union of
    coordinates; exact zeros are dropped from storage."""
    aw = dict(a.entries)
    bw = dict(b.entries)
    out = {}
    for idx in set(aw) | set(bw):
        va = aw.get(idx, 0.0)
        vb = bw.get(idx, 0.0)
        w = va + delta * (vb - va)
        if w > 0:
            out[idx] = w
    return SparseVector(tuple(sorted(out.items())))


def _cosine(a: SparseVector, b: SparseVector) -> float:
    na, nb = a.norm(), b.norm()
    if na == 0 or nb == 0:
        return 0.0
    bw = dict(b.entries)
    dot = sum(w * bw.get(i, 0.0) for i, w in a.entries)
    return dot / (na * nb)


def smote(data: LabeledDataset, k_neighbors: int, seed: int) -> LabeledDataset:
    """Grow every minority class to the majority count with synthetic
    points interpolated toward same-class nearest neighbours (cosine)."""
    groups = _by_class(data)
    if len(groups) < 2:
        raise ResampleError("smote needs at least two classes")
    majority = max(len(v) for v in groups.values())
    rng = random.Random(seed)
    new_vectors = list(data.vectors)
    new_labels = list(data.labels)
    for lab in data.label_set:
        idxs = groups.get(lab)
        if not idxs or len(idxs) == majority:
            continue
        if len(idxs) < 2:
            raise ResampleError(
                f"insufficient instances for interpolation: class {lab!r} has 1")
        members = [data.vectors[i] for i in idxs]
        k = min(k_neighbors, len(members) - 1)
        neighbour_lists = []
        for i, vec in enumerate(members):
            sims = [(-_cosine(vec, other), j)
                    for j, other in enumerate(members) if j != i]
            sims.sort()
            neighbour_lists.append([j for _, j in sims[:k]])
        needed = majority - len(members)
        for _ in range(needed):
            i = rng.randrange(len(members))
            z = rng.choice(neighbour_lists[i])
            delta = rng.random()
            new_vectors.append(interpolate(members[i], members[z], delta))
            new_labels.append(lab)
    return LabeledDataset(vectors=tuple(new_vectors), labels=tuple(new_labels),
                          space=data.space, label_set=data.label_set)
