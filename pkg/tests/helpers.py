"""Shared test helpers."""

from triagekit.vectorize import FeatureSpace, LabeledDataset, SparseVector


def make_dataset(rows, labels, n_features=None, label_set=None):
    """Dataset straight from dense non-negative rows."""
    d = n_features or max((len(r) for r in rows), default=1)
    space = FeatureSpace(terms=tuple(f"f{i}" for i in range(d)),
                         doc_freq=(1,) * d, n_docs=1,
                         selected=frozenset(range(d)))
    vectors = []
    for row in rows:
        entries = tuple((i, float(w)) for i, w in enumerate(row) if w > 0)
        vectors.append(SparseVector(entries))
    return LabeledDataset(vectors=tuple(vectors), labels=tuple(labels),
                          space=space,
                          label_set=label_set or tuple(sorted(set(labels))))


def dataset_with_counts(counts, n_features=4, spread=True):
    rows, labels = [], []
    for c, (lab, n) in enumerate(sorted(counts.items())):
        for i in range(n):
            row = [0.0] * n_features
            row[c % n_features] = 1.0 + i * 0.01
            if spread:
                row[(c + 1) % n_features] = 0.5 + (i % 3) * 0.1
            rows.append(tuple(row))
            labels.append(lab)
    return make_dataset(rows, labels, n_features=n_features)
