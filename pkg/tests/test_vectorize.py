"""Vocabulary building, TF-IDF weighting, and information gain, checked
against brute-force oracles."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from triagekit.textprep import TokenizedDocument
from triagekit.vectorize import (FeatureSpace, LabeledDataset, SparseVector,
                                 VectorizeError, apply_space, build_dataset,
                                 build_space, info_gain_select,
                                 information_gain, label_entropy, tfidf)


def doc(key, tokens, label=None):
    return TokenizedDocument(issue_key=key, tokens=tuple(tokens), label=label)


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------

def entropy_oracle(counts):
    total = sum(counts)
    return -sum((c / total) * math.log2(c / total) for c in counts if c)


def ig_oracle(presence, labels):
    """Brute-force information gain for one feature.

    presence: list of bools per document; labels: parallel list.
    """
    classes = sorted(set(labels))
    n = len(labels)
    h = entropy_oracle([labels.count(c) for c in classes])
    for value in (True, False):
        split = [lab for p, lab in zip(presence, labels) if p is value]
        if split:
            h -= (len(split) / n) * entropy_oracle(
                [split.count(c) for c in classes])
    return h


def tfidf_oracle(tokens, docs_tokens):
    """Recompute one document's weights from scratch."""
    n = len(docs_tokens)
    weights = {}
    for term in set(tokens):
        df = sum(1 for d in docs_tokens if term in d)
        if df == 0:
            continue
        w = tokens.count(term) * math.log(n / df)
        if w > 0:
            weights[term] = w
    return weights


def dataset_from_presence(presence_matrix, labels):
    """Build a LabeledDataset whose term j occurs in doc i iff matrix[i][j]."""
    docs = []
    for i, row in enumerate(presence_matrix):
        tokens = [f"t{j}" for j, present in enumerate(row) if present]
        docs.append(doc(f"d{i}", tokens, labels[i]))
    space = build_space(docs)
    return build_dataset(docs, space)


# --------------------------------------------------------------------------
# build_space
# --------------------------------------------------------------------------

class TestBuildSpace:
    def test_doc_frequencies(self):
        space = build_space([doc("a", ["abc"]), doc("b", ["abc", "def"])])
        assert space.terms == ("abc", "def")
        assert space.doc_freq == (2, 1)
        assert space.n_docs == 2

    def test_single_doc(self):
        space = build_space([doc("a", ["x", "y", "x"])])
        assert space.doc_freq == (1, 1)

    def test_order_independent(self):
        d1, d2, d3 = (doc("a", ["m", "n"]), doc("b", ["n"]), doc("c", ["z"]))
        assert build_space([d1, d2, d3]) == build_space([d3, d1, d2])

    def test_all_empty_is_error(self):
        with pytest.raises(VectorizeError, match="empty vocabulary"):
            build_space([doc("a", []), doc("b", [])])

    def test_no_docs_is_error(self):
        with pytest.raises(VectorizeError):
            build_space([])


# --------------------------------------------------------------------------
# tfidf
# --------------------------------------------------------------------------

class TestTfidf:
    def test_ubiquitous_term_weight_zero(self):
        docs = [doc(str(i), ["common", f"rare{i}"]) for i in range(3)]
        space = build_space(docs)
        vec = tfidf(doc("q", ["common", "common", "rare1"]), space)
        terms = {space.terms[i]: w for i, w in vec.entries}
        assert "common" not in terms  # ln(3/3) = 0, dropped
        assert terms["rare1"] == pytest.approx(math.log(3))

    def test_empty_doc(self):
        space = build_space([doc("a", ["x"])])
        assert tfidf(doc("q", []), space).entries == ()

    def test_hand_value(self):
        # 4 training docs, term df 1, tf 3 in the query.
        docs = [doc("0", ["solo"]), doc("1", ["a"]), doc("2", ["b"]),
                doc("3", ["c"])]
        space = build_space(docs)
        vec = tfidf(doc("q", ["solo"] * 3), space)
        (idx, weight), = vec.entries
        assert space.terms[idx] == "solo"
        assert weight == pytest.approx(3 * math.log(4), abs=1e-10)
        assert weight == pytest.approx(4.1589, abs=1e-4)

    def test_unknown_terms_ignored(self):
        space = build_space([doc("a", ["x"])])
        assert tfidf(doc("q", ["nope", "nada"]), space).entries == ()

    @given(st.lists(st.lists(st.sampled_from("abcde"), min_size=1, max_size=6),
                    min_size=1, max_size=8),
           st.lists(st.sampled_from("abcde"), max_size=6))
    def test_matches_oracle(self, corpus_tokens, query_tokens):
        docs = [doc(str(i), toks) for i, toks in enumerate(corpus_tokens)]
        space = build_space(docs)
        vec = tfidf(doc("q", query_tokens), space)
        got = {space.terms[i]: w for i, w in vec.entries}
        expected = tfidf_oracle(list(query_tokens),
                                [set(t) for t in corpus_tokens])
        assert set(got) == set(expected)
        for term, w in expected.items():
            assert got[term] == pytest.approx(w, rel=1e-12)

    def test_duplicating_document_shifts_df(self):
        base = [doc("0", ["x", "y"]), doc("1", ["y"])]
        doubled = base + [doc("2", ["x", "y"])]
        w1 = dict(tfidf(doc("q", ["x"]), build_space(base)).entries)
        w2 = dict(tfidf(doc("q", ["x"]), build_space(doubled)).entries)
        # df(x) goes 1->2 while n 2->3: weight drops from ln2 to ln(3/2).
        assert list(w1.values())[0] == pytest.approx(math.log(2))
        assert list(w2.values())[0] == pytest.approx(math.log(3 / 2))


class TestSparseVector:
    def test_rejects_unsorted(self):
        with pytest.raises(VectorizeError):
            SparseVector(((2, 1.0), (1, 1.0)))

    def test_rejects_zero_weight(self):
        with pytest.raises(VectorizeError):
            SparseVector(((0, 0.0),))


# --------------------------------------------------------------------------
# information gain
# --------------------------------------------------------------------------

class TestInformationGain:
    def test_perfect_feature(self):
        presence = [[True], [True], [False], [False]]
        ds = dataset_from_presence(presence, ["A", "A", "B", "B"])
        # Feature occurs in every A and no B: IG = H(labels) = 1 bit.
        gains = information_gain(ds)
        idx = ds.space.terms.index("t0")
        assert gains[idx] == pytest.approx(1.0)
        assert label_entropy(ds) == pytest.approx(1.0)

    def test_everywhere_feature_zero_gain(self):
        presence = [[True], [True], [True], [True]]
        ds = dataset_from_presence(presence, ["A", "A", "B", "B"])
        gains = information_gain(ds)
        assert gains[ds.space.terms.index("t0")] == pytest.approx(0.0)

    def test_fixture_8_docs(self):
        # 4 A + 4 B; feature present in 3 A docs and 1 B doc.
        presence = [[True], [True], [True], [False],
                    [True], [False], [False], [False]]
        labels = ["A"] * 4 + ["B"] * 4
        ds = dataset_from_presence(presence, labels)
        gains = information_gain(ds)
        idx = ds.space.terms.index("t0")
        oracle = ig_oracle([row[0] for row in presence], labels)
        assert gains[idx] == pytest.approx(oracle, abs=1e-12)
        assert gains[idx] == pytest.approx(0.1887, abs=1e-4)

    def test_exhaustive_small_datasets(self):
        """Every 4-doc, 2-feature presence matrix with every binary
        labeling agrees with the brute-force oracle."""
        checked = 0
        for labels in itertools.product("AB", repeat=4):
            if len(set(labels)) < 2:
                continue
            for bits in range(256):
                matrix = [[bool(bits >> (2 * i) & 1), bool(bits >> (2 * i + 1) & 1)]
                          for i in range(4)]
                if not any(any(row) for row in matrix):
                    continue
                ds = dataset_from_presence(matrix, list(labels))
                gains = information_gain(ds)
                for j in range(2):
                    term = f"t{j}"
                    if term not in ds.space.terms:
                        continue
                    idx = ds.space.terms.index(term)
                    oracle = ig_oracle([row[j] for row in matrix], list(labels))
                    assert gains[idx] == pytest.approx(oracle, abs=1e-12)
                    checked += 1
        assert checked > 1000

    @settings(max_examples=300)
    @given(st.integers(2, 8).flatmap(
        lambda n: st.tuples(
            st.lists(st.lists(st.booleans(), min_size=4, max_size=4),
                     min_size=n, max_size=n),
            st.lists(st.sampled_from("ABC"), min_size=n, max_size=n))))
    def test_fuzzed_against_oracle_and_bounds(self, case):
        matrix, labels = case
        if len(set(labels)) < 1 or not any(any(r) for r in matrix):
            return
        ds = dataset_from_presence(matrix, labels)
        gains = information_gain(ds)
        h = label_entropy(ds)
        for j in range(4):
            term = f"t{j}"
            if term not in ds.space.terms:
                continue
            idx = ds.space.terms.index(term)
            oracle = ig_oracle([row[j] for row in matrix], labels)
            assert gains[idx] == pytest.approx(oracle, abs=1e-9)
            assert -1e-12 <= gains[idx] <= h + 1e-12


class TestSelection:
    def test_single_class_all_zero_then_error(self):
        ds = dataset_from_presence([[True], [False]], ["A", "A"])
        gains = information_gain(ds)
        assert all(g == 0 for g in gains.values())
        with pytest.raises(VectorizeError, match="no features selected"):
            info_gain_select(ds, 0.0)

    def test_keeps_strictly_positive(self):
        presence = [[True, True], [True, True], [False, True], [False, True]]
        ds = dataset_from_presence(presence, ["A", "A", "B", "B"])
        space = info_gain_select(ds, 0.0)
        kept = {space.terms[i] for i in space.selected}
        assert kept == {"t0"}

    def test_monotone_in_threshold(self):
        presence = [[True, True, False], [True, False, False],
                    [False, True, True], [False, False, True]]
        ds = dataset_from_presence(presence, ["A", "A", "B", "B"])
        prev = None
        for threshold in (0.0, 0.2, 0.5, 0.9):
            try:
                selected = info_gain_select(ds, threshold).selected
            except VectorizeError:
                selected = frozenset()
            if prev is not None:
                assert selected <= prev
            prev = selected

    def test_apply_space_filters_vectors(self):
        presence = [[True, True], [True, True], [False, True], [False, True]]
        ds = dataset_from_presence(presence, ["A", "A", "B", "B"])
        narrowed = info_gain_select(ds, 0.0)
        filtered = apply_space(ds, narrowed)
        for vec in filtered.vectors:
            for idx, _ in vec.entries:
                assert idx in narrowed.selected

    def test_selection_affects_tfidf(self):
        docs = [doc("0", ["keep", "drop"]), doc("1", ["keep"])]
        space = build_space(docs)
        keep_idx = space.terms.index("keep")
        narrowed = FeatureSpace(space.terms, space.doc_freq, space.n_docs,
                                frozenset({space.terms.index("drop")}))
        vec = tfidf(doc("q", ["keep", "drop"]), narrowed)
        assert keep_idx not in [i for i, _ in vec.entries]


class TestLabeledDataset:
    def test_length_mismatch(self):
        space = build_space([doc("a", ["x"])])
        with pytest.raises(VectorizeError):
            LabeledDataset(vectors=(SparseVector(()),), labels=("A", "B"),
                           space=space, label_set=("A", "B"))

    def test_unknown_label(self):
        space = build_space([doc("a", ["x"])])
        with pytest.raises(VectorizeError):
            LabeledDataset(vectors=(SparseVector(()),), labels=("C",),
                           space=space, label_set=("A", "B"))

    def test_unlabeled_doc_rejected(self):
        space = build_space([doc("a", ["x"])])
        with pytest.raises(VectorizeError):
            build_dataset([doc("a", ["x"])], space)
