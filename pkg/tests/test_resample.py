"""Imbalance treatments: exact count targets, determinism, and the SMOTE
segment property."""

import pytest
from hypothesis import given, settings, strategies as st

from triagekit.resample import (ResampleError, ResampleSpec, interpolate,
                                oversample, smote, undersample)
from triagekit.vectorize import SparseVector

from helpers import dataset_with_counts


TABLE_COUNTS = {"ST1": 1160, "ST2": 752, "ST3": 310,
                "ST4": 1691, "ST5": 1363, "ST6": 408}


class TestUndersample:
    def test_balanced_unchanged_sizes(self):
        data = dataset_with_counts({"A": 10, "B": 10})
        out = undersample(data, seed=1)
        assert out.class_counts() == {"A": 10, "B": 10}

    def test_reference_distribution_to_minority(self):
        data = dataset_with_counts(TABLE_COUNTS, n_features=6, spread=False)
        out = undersample(data, seed=3)
        counts = out.class_counts()
        assert set(counts.values()) == {310}
        assert len(out) == 1860

    def test_deterministic(self):
        data = dataset_with_counts({"A": 30, "B": 8, "C": 15})
        a = undersample(data, seed=9)
        b = undersample(data, seed=9)
        assert a.vectors == b.vectors and a.labels == b.labels

    def test_needs_two_classes(self):
        data = dataset_with_counts({"A": 5})
        with pytest.raises(ResampleError):
            undersample(data, seed=0)

    def test_exactly_equal_counts_property(self):
        data = dataset_with_counts({"A": 17, "B": 5, "C": 11})
        counts = undersample(data, seed=2).class_counts()
        assert len(set(counts.values())) == 1


class TestOversample:
    def test_reference_distribution_default_factor(self):
        data = dataset_with_counts(TABLE_COUNTS, n_features=6, spread=False)
        out = oversample(data, size_factor=None, seed=5)
        # Exact rule: floor(2 * (1691/5684) * 5684) = 2 * 1691 = 3382.
        # (Rounding the majority fraction to 0.2975 first would give 3381;
        # the implementation keeps the exact fraction.)
        assert len(out) == 3382
        counts = out.class_counts()
        assert max(counts.values()) - min(counts.values()) <= 1

    def test_factor_one_balanced_within_one(self):
        data = dataset_with_counts({"A": 10, "B": 10})
        counts = oversample(data, size_factor=1.0, seed=4).class_counts()
        assert abs(counts["A"] - 10) <= 1
        assert abs(counts["B"] - 10) <= 1

    def test_deterministic(self):
        data = dataset_with_counts({"A": 12, "B": 3})
        a = oversample(data, None, seed=8)
        b = oversample(data, None, seed=8)
        assert a.vectors == b.vectors and a.labels == b.labels

    def test_draws_only_existing_vectors(self):
        data = dataset_with_counts({"A": 6, "B": 2})
        out = oversample(data, 2.0, seed=1)
        originals = set(data.vectors)
        assert all(v in originals for v in out.vectors)


class TestInterpolate:
    def test_delta_zero_is_source(self):
        a = SparseVector(((0, 1.0), (2, 3.0)))
        b = SparseVector(((1, 5.0),))
        assert interpolate(a, b, 0.0) == a

    def test_delta_one_is_neighbour(self):
        a = SparseVector(((0, 1.0),))
        b = SparseVector(((1, 5.0), (3, 0.5)))
        assert interpolate(a, b, 1.0) == b

    def test_midpoint(self):
        a = SparseVector(((0, 2.0),))
        b = SparseVector(((0, 4.0), (1, 6.0)))
        mid = dict(interpolate(a, b, 0.5).entries)
        assert mid == {0: 3.0, 1: 3.0}


class TestSmote:
    def test_counts_4_2(self):
        data = dataset_with_counts({"A": 4, "B": 2})
        out = smote(data, k_neighbors=1, seed=7)
        assert out.class_counts() == {"A": 4, "B": 4}

    def test_originals_retained(self):
        data = dataset_with_counts({"A": 5, "B": 3})
        out = smote(data, k_neighbors=2, seed=3)
        for v in data.vectors:
            assert v in out.vectors

    def test_single_instance_class_rejected(self):
        data = dataset_with_counts({"A": 4, "B": 1})
        with pytest.raises(ResampleError, match="insufficient instances"):
            smote(data, k_neighbors=1, seed=0)

    def test_deterministic(self):
        data = dataset_with_counts({"A": 9, "B": 4, "C": 3})
        a = smote(data, 2, seed=6)
        b = smote(data, 2, seed=6)
        assert a.vectors == b.vectors and a.labels == b.labels

    def test_segment_property(self):
        data = dataset_with_counts({"A": 12, "B": 5})
        out = smote(data, 3, seed=1)
        originals = {lab: [dict(v.entries) for v, l2 in
                           zip(data.vectors, data.labels) if l2 == lab]
                     for lab in ("A", "B")}
        synthetic = list(zip(out.vectors, out.labels))[len(data):]
        for v, lab in synthetic:
            coords = dict(v.entries)
            # Some pair of same-class training points must bracket it.
            assert any(
                all(min(p1.get(i, 0), p2.get(i, 0)) - 1e-9 <= w <=
                    max(p1.get(i, 0), p2.get(i, 0)) + 1e-9
                    for i, w in coords.items())
                for p1 in originals[lab] for p2 in originals[lab])

    @settings(max_examples=60, deadline=None)
    @given(n_a=st.integers(2, 10), n_b=st.integers(2, 10),
           k=st.integers(1, 4), seed=st.integers(0, 999))
    def test_fuzz_reaches_majority_count(self, n_a, n_b, k, seed):
        data = dataset_with_counts({"A": n_a, "B": n_b})
        out = smote(data, k, seed=seed)
        majority = max(n_a, n_b)
        assert out.class_counts() == {"A": majority, "B": majority}


class TestSpec:
    def test_unknown_method(self):
        with pytest.raises(ResampleError):
            ResampleSpec(method="downsample")

    def test_bad_factor(self):
        with pytest.raises(ResampleError):
            ResampleSpec(method="oversample", size_factor=0)

    def test_round_trip(self):
        spec = ResampleSpec(method="smote", k_neighbors=3, seed=4)
        assert ResampleSpec.from_dict(spec.to_dict()) == spec
