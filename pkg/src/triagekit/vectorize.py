"""Term vocabulary, TF-IDF weighting, and information-gain feature selection.

Weighting is raw term frequency times ln(n_docs / document_frequency), with
the document frequencies of the training set that built the space.
Information gain is computed on binarized term occurrence, in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .textprep import TokenizedDocument


class VectorizeError(ValueError):
    pass


@dataclass(frozen=True)
class FeatureSpace:
    """Ordered vocabulary with per-term document frequencies.

    `selected` is the set of term indices surviving feature selection; a
    freshly built space selects everything.
    """

    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    n_docs: int
    selected: frozenset[int]

    def __post_init__(self):
        if len(self.terms) != len(self.doc_freq):
            raise VectorizeError("terms and doc_freq length mismatch")
        for t, df in zip(self.terms, self.doc_freq):
            if not 1 <= df <= self.n_docs:
                raise VectorizeError(f"doc_freq out of range for {t!r}")
        if not all(0 <= i < len(self.terms) for i in self.selected):
            raise VectorizeError("selected indices out of range")

    def index_of(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.terms)}

    @property
    def n_selected(self) -> int:
        return len(self.selected)

    def columns(self) -> tuple[int, ...]:
        """Selected term indices in ascending order (dense column map)."""
        return tuple(sorted(self.selected))

    def to_dict(self) -> dict:
        return {
            "terms": list(self.terms),
            "doc_freq": list(self.doc_freq),
            "n_docs": self.n_docs,
            "selected": sorted(self.selected),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSpace":
        return cls(
            terms=tuple(data["terms"]),
            doc_freq=tuple(int(x) for x in data["doc_freq"]),
            n_docs=int(data["n_docs"]),
            selected=frozenset(int(i) for i in data["selected"]),
        )


@dataclass(frozen=True)
class SparseVector:
    """Sorted (term index, weight) pairs; zero weights are never stored."""

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        prev = -1
        for idx, w in self.entries:
            if idx <= prev:
                raise VectorizeError("entries must have strictly increasing indices")
            if w <= 0:
                raise VectorizeError("zero or negative weight stored")
            prev = idx

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for _, w in self.entries))


EMPTY_VECTOR = SparseVector(())


@dataclass(frozen=True)
class LabeledDataset:
    vectors: tuple[SparseVector, ...]
    labels: tuple[str, ...]
    space: FeatureSpace
    label_set: tuple[str, ...]

    def __post_init__(self):
        if len(self.vectors) != len(self.labels):
            raise VectorizeError("vectors and labels length mismatch")
        known = set(self.label_set)
        for lab in self.labels:
            if lab not in known:
                raise VectorizeError(f"label {lab!r} not in label_set")

    def __len__(self) -> int:
        return len(self.vectors)

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        return LabeledDataset(
            vectors=tuple(self.vectors[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
            space=self.space,
            label_set=self.label_set,
        )

    def class_counts(self) -> dict[str, int]:
        counts = {lab: 0 for lab in self.label_set}
        for lab in self.labels:
            counts[lab] += 1
        return counts


def build_space(docs: Sequence[TokenizedDocument]) -> FeatureSpace:
    """Collect the vocabulary of `docs` with document frequencies.

    Term order is lexicographic, so the space does not depend on document
    order.
    """
    if not docs:
        raise VectorizeError("cannot build a feature space from no documents")
    df: dict[str, int] = {}
    for doc in docs:
        for term in set(doc.tokens):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise VectorizeError("empty vocabulary: all documents are empty")
    terms = tuple(sorted(df))
    return FeatureSpace(
        terms=terms,
        doc_freq=tuple(df[t] for t in terms),
        n_docs=len(docs),
        selected=frozenset(range(len(terms))),
    )


def tfidf(doc: TokenizedDocument, space: FeatureSpace) -> SparseVector:
    """Weight one document against the space.

    weight(t) = count(t in doc) * ln(n_docs / doc_freq(t)). Terms outside
    the space or outside its selected subset contribute nothing; a term
    occurring in every training document gets weight zero and is dropped.
    """
    index = space.index_of()
    counts: dict[int, int] = {}
    for token in doc.tokens:
        idx = index.get(token)
        if idx is not None and idx in space.selected:
            counts[idx] = counts.get(idx, 0) + 1
    entries = []
    for idx in sorted(counts):
        weight = counts[idx] * math.log(space.n_docs / space.doc_freq[idx])
        if weight > 0:
            entries.append((idx, weight))
    return SparseVector(tuple(entries))


def build_dataset(
    docs: Sequence[TokenizedDocument],
    space: FeatureSpace,
    label_set: Optional[Sequence[str]] = None,
) -> LabeledDataset:
    """Vectorize labeled documents. Unlabeled documents are rejected."""
    labels = []
    for doc in docs:
        if doc.label is None:
            raise VectorizeError(f"document {doc.issue_key!r} has no label")
        labels.append(doc.label)
    if label_set is None:
        label_set = tuple(sorted(set(labels)))
    return LabeledDataset(
        vectors=tuple(tfidf(doc, space) for doc in docs),
        labels=tuple(labels),
        space=space,
        label_set=tuple(label_set),
    )


def _entropy(counts: Iterable[int]) -> float:
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def label_entropy(dataset: LabeledDataset) -> float:
    return _entropy(dataset.class_counts().values())


def information_gain(dataset: LabeledDataset) -> dict[int, float]:
    """IG of each selected term on binarized presence/absence, in bits."""
    n = len(dataset)
    if n == 0:
        raise VectorizeError("empty dataset")
    label_index = {lab: i for i, lab in enumerate(dataset.label_set)}
    k = len(dataset.label_set)
    total_per_class = [0] * k
    present: dict[int, list[int]] = {i: [0] * k for i in dataset.space.selected}
    for vec, lab in zip(dataset.vectors, dataset.labels):
        li = label_index[lab]
        total_per_class[li] += 1
        for idx, _ in vec.entries:
            if idx in present:
                present[idx][li] += 1
    h_labels = _entropy(total_per_class)
    gains: dict[int, float] = {}
    for idx, pres_counts in present.items():
        n_pres = sum(pres_counts)
        abs_counts = [t - p for t, p in zip(total_per_class, pres_counts)]
        n_abs = n - n_pres
        h_cond = (n_pres / n) * _entropy(pres_counts) + (n_abs / n) * _entropy(abs_counts)
        gains[idx] = max(0.0, h_labels - h_cond)
    return gains


def info_gain_select(dataset: LabeledDataset, threshold: float = 0.0) -> FeatureSpace:
    """New space keeping only terms whose information gain exceeds threshold."""
    gains = information_gain(dataset)
    keep = frozenset(idx for idx, g in gains.items() if g > threshold)
    if not keep:
        raise VectorizeError("no features selected: every gain at or below threshold")
    return replace(dataset.space, selected=keep)


def apply_space(dataset: LabeledDataset, space: FeatureSpace) -> LabeledDataset:
    """Re-filter existing vectors to a narrower selection of the same space.

    Weights were computed from the same term/doc-freq tables, so filtering
    entries is equivalent to re-vectorizing.
    """
    if space.terms != dataset.space.terms:
        raise VectorizeError("spaces disagree on the underlying vocabulary")
    vectors = tuple(
        SparseVector(tuple((i, w) for i, w in vec.entries if i in space.selected))
        for vec in dataset.vectors
    )
    return LabeledDataset(vectors=vectors, labels=dataset.labels,
                          space=space, label_set=dataset.label_set)
