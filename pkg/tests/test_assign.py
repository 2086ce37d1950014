"""Assignment strategies and the chained-accuracy estimators."""

from datetime import datetime

import pytest
from hypothesis import given, strategies as st

from triagekit.assign import (AssignError, AssignmentPipeline, S1, S2, assign,
                              chained_accuracy, chained_accuracy_weighted,
                              measured_chain_accuracy)
from triagekit.corpus import (DEFAULT_TAXONOMY, IssueRecord, SyntheticSpec,
                              generate_synthetic)
from triagekit.learners import ClassifierSpec, train
from triagekit.pipeline import stage_dataset


def make_issue(key, summary, description="", subteam=None):
    now = datetime(2020, 6, 1)
    return IssueRecord(key=key, summary=summary, description=description,
                       reporter="qa", created=now, updated=now,
                       assignee="lead", status="closed", subteam=subteam)


@pytest.fixture(scope="module")
def clean_corpus():
    spec = SyntheticSpec(
        counts={"ST1": 25, "ST2": 20, "ST3": 15, "ST4": 30, "ST5": 20,
                "ST6": 15},
        noise_rate=0.0,
    )
    return generate_synthetic(spec, seed=303)


def train_stage(corpus, stage, stopwords, kind="logistic_regression",
                hyper=None, seed=1):
    data = stage_dataset(corpus, stage, stopwords)
    return train(ClassifierSpec(kind=kind,
                                hyperparameters=hyper or {"epochs": 60},
                                seed=seed), data)


@pytest.fixture(scope="module")
def s2_pipeline(clean_corpus, stopwords):
    models = {
        "team": train_stage(clean_corpus, "team", stopwords, kind="sgd_text",
                            hyper={"epochs": 80}),
        "T_A": train_stage(clean_corpus, "T_A", stopwords),
        "T_B": train_stage(clean_corpus, "T_B", stopwords),
    }
    return AssignmentPipeline(strategy=S2, models=models, stopwords=stopwords)


@pytest.fixture(scope="module")
def s1_pipeline(clean_corpus, stopwords):
    models = {"flat": train_stage(clean_corpus, "flat", stopwords)}
    return AssignmentPipeline(strategy=S1, models=models, stopwords=stopwords)


class TestChainedAccuracy:
    def test_reference_values(self):
        assert chained_accuracy(0.9713, 0.9395, 0.7413) == pytest.approx(
            0.8163, abs=1e-4)

    def test_perfect_chain(self):
        assert chained_accuracy(1, 1, 1) == 1.0

    def test_halves(self):
        assert chained_accuracy(0.5, 0.5, 0.5) == pytest.approx(0.25)

    def test_validation(self):
        with pytest.raises(AssignError):
            chained_accuracy(1.2, 0.5, 0.5)
        with pytest.raises(AssignError):
            chained_accuracy(0.5, -0.1, 0.5)

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
           st.floats(0, 0.2))
    def test_monotone(self, a, b, c, bump):
        base = chained_accuracy(a, b, c)
        assert chained_accuracy(min(1, a + bump), b, c) >= base - 1e-12
        assert chained_accuracy(a, min(1, b + bump), c) >= base - 1e-12
        assert chained_accuracy(a, b, min(1, c + bump)) >= base - 1e-12

    def test_weighted_variant(self):
        equal = chained_accuracy(0.9, 0.8, 0.6)
        weighted = chained_accuracy_weighted(0.9, 0.8, 0.6, 0.5, 0.5)
        assert equal == pytest.approx(weighted)
        skewed = chained_accuracy_weighted(0.9, 0.8, 0.6, 0.609, 0.391)
        assert skewed == pytest.approx(0.9 * (0.609 * 0.8 + 0.391 * 0.6))

    def test_weighted_priors_must_sum_to_one(self):
        with pytest.raises(AssignError):
            chained_accuracy_weighted(0.9, 0.8, 0.6, 0.7, 0.7)


class TestPipelineValidation:
    def test_s2_requires_all_stage_models(self, clean_corpus, stopwords):
        team = train_stage(clean_corpus, "team", stopwords)
        with pytest.raises(AssignError, match="missing sub-team model"):
            AssignmentPipeline(strategy=S2, models={"team": team},
                               stopwords=stopwords)

    def test_s1_label_set_checked(self, clean_corpus, stopwords):
        team = train_stage(clean_corpus, "team", stopwords)
        with pytest.raises(AssignError):
            AssignmentPipeline(strategy=S1, models={"flat": team},
                               stopwords=stopwords)

    def test_s2_subteam_labels_checked(self, clean_corpus, stopwords):
        team = train_stage(clean_corpus, "team", stopwords)
        sub_a = train_stage(clean_corpus, "T_A", stopwords)
        with pytest.raises(AssignError):
            AssignmentPipeline(
                strategy=S2,
                models={"team": team, "T_A": sub_a, "T_B": sub_a},
                stopwords=stopwords)


class TestAssign:
    def test_s2_composition_consistent_with_taxonomy(self, s2_pipeline,
                                                     clean_corpus):
        for issue in list(clean_corpus)[:40]:
            result = assign(s2_pipeline, issue)
            assert result.subteam in DEFAULT_TAXONOMY.subteams_of(result.team)
            assert 0 <= result.team_confidence <= 1
            assert 0 <= result.subteam_confidence <= 1
            assert result.latency_ms >= 0

    def test_noise_free_st5_issue_routed(self, s2_pipeline):
        issue = make_issue("Q-1", "camera zoom flash",
                           "gallery shutter exposure focus lens")
        result = assign(s2_pipeline, issue)
        assert (result.team, result.subteam) == ("T_B", "ST5")

    def test_s1_flat(self, s1_pipeline):
        issue = make_issue("Q-2", "bluetooth pairing wifi",
                           "hotspot tethering wireless")
        result = assign(s1_pipeline, issue)
        assert (result.team, result.subteam) == ("T_A", "ST3")

    def test_s1_zero_r_always_majority(self, clean_corpus, stopwords):
        flat = train_stage(clean_corpus, "flat", stopwords, kind="zero_r")
        pipeline = AssignmentPipeline(strategy=S1, models={"flat": flat},
                                      stopwords=stopwords)
        for summary in ("battery drain", "camera flash", "network signal"):
            result = assign(pipeline, make_issue("Q", summary))
            assert (result.team, result.subteam) == ("T_B", "ST4")

    def test_empty_text_flagged_low_evidence(self, s2_pipeline):
        result = assign(s2_pipeline, make_issue("Q-3", "", ""))
        assert result.low_evidence
        assert result.subteam in DEFAULT_TAXONOMY.subteams_of(result.team)

    def test_team_confidence_is_subteam_mass_for_s1(self, s1_pipeline):
        issue = make_issue("Q-4", "display touch gesture")
        result = assign(s1_pipeline, issue)
        assert result.team_confidence >= result.subteam_confidence - 1e-9


class TestMeasuredChainAccuracy:
    def test_all_correct(self, s2_pipeline, clean_corpus):
        acc = measured_chain_accuracy(s2_pipeline, list(clean_corpus))
        assert acc == 1.0  # noise-free corpus is fully separable

    def test_empty_test_set_rejected(self, s2_pipeline):
        with pytest.raises(AssignError):
            measured_chain_accuracy(s2_pipeline, [])

    def test_zero_r_chain_on_reference_distribution(self, stopwords):
        spec = SyntheticSpec(noise_rate=0.0)
        corpus = generate_synthetic(spec, seed=17)
        models = {
            "team": train_stage(corpus, "team", stopwords, kind="zero_r"),
            "T_A": train_stage(corpus, "T_A", stopwords, kind="zero_r"),
            "T_B": train_stage(corpus, "T_B", stopwords, kind="zero_r"),
        }
        pipeline = AssignmentPipeline(strategy=S2, models=models,
                                      stopwords=stopwords)
        sample = list(corpus)[::8]
        acc = measured_chain_accuracy(pipeline, sample)
        expected = sum(1 for i in sample if i.subteam == "ST4") / len(sample)
        assert acc == pytest.approx(expected, abs=1e-9)

    def test_matches_enumeration_oracle(self, s2_pipeline, clean_corpus):
        sample = list(clean_corpus)[:60]
        # Oracle: walk the chain by hand for every issue.
        hits = 0
        for issue in sample:
            result = assign(s2_pipeline, issue)
            team_ok = DEFAULT_TAXONOMY.team_of(issue.subteam) == result.team
            sub_ok = result.subteam == issue.subteam
            assert not (sub_ok and not team_ok), "sub-team hit implies team hit"
            hits += 1 if sub_ok else 0
        assert measured_chain_accuracy(s2_pipeline, sample) == hits / len(sample)

    def test_never_beats_team_stage(self, s2_pipeline, clean_corpus):
        sample = list(clean_corpus)[:80]
        chain = measured_chain_accuracy(s2_pipeline, sample)
        team_hits = sum(
            1 for issue in sample
            if assign(s2_pipeline, issue).team
            == DEFAULT_TAXONOMY.team_of(issue.subteam))
        assert chain <= team_hits / len(sample) + 1e-9
