"""Assignment strategies.

S1 classifies an issue straight into one of the six sub-teams; the team
falls out of the taxonomy. S2 first picks the team with a binary model,
then runs that team's sub-team model. The chained-accuracy estimator
combines per-stage accuracies into an expected end-to-end rate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import DEFAULT_TAXONOMY, IssueRecord, Taxonomy
from .learners import Distribution, TrainedModel, predict
from .textprep import StopwordList, TokenizedDocument, preprocess
from .vectorize import tfidf

S1 = "S1"
S2 = "S2"
STRATEGIES = (S1, S2)


class AssignError(ValueError):
    pass


@dataclass(frozen=True)
class AssignmentResult:
    issue_key: str
    team: str
    subteam: str
    team_confidence: float
    subteam_confidence: float
    model_ids: dict[str, str] = field(default_factory=dict)
    latency_ms: float = 0.0
    low_evidence: bool = False

    def to_dict(self) -> dict:
        return {
            "issue_key": self.issue_key,
            "team": self.team,
            "subteam": self.subteam,
            "team_confidence": self.team_confidence,
            "subteam_confidence": self.subteam_confidence,
            "model_ids": dict(self.model_ids),
            "latency_ms": self.latency_ms,
            "low_evidence": self.low_evidence,
        }


@dataclass(frozen=True)
class AssignmentPipeline:
    """A deployable strategy binding trained models to the taxonomy.

    S1 models: {"flat": six-label model}. S2 models: {"team": binary team
    model, "<team>": sub-team model per team}. `model_ids` carries registry
    identifiers when the pipeline came from the model store.
    """

    strategy: str
    models: dict[str, TrainedModel]
    stopwords: StopwordList
    taxonomy: Taxonomy = DEFAULT_TAXONOMY
    model_ids: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise AssignError(f"unknown strategy {self.strategy!r}")
        if self.strategy == S1:
            flat = self.models.get("flat")
            if flat is None:
                raise AssignError("S1 pipeline needs a 'flat' model")
            expected = tuple(sorted(
                st for subs in self.taxonomy.teams.values() for st in subs))
            if tuple(flat.label_set) != expected:
                raise AssignError(
                    f"flat model labels {flat.label_set} != sub-teams {expected}")
        else:
            team_model = self.models.get("team")
            if team_model is None:
                raise AssignError("S2 pipeline needs a 'team' model")
            if tuple(team_model.label_set) != tuple(sorted(self.taxonomy.team_names)):
                raise AssignError(
                    f"team model labels {team_model.label_set} do not match taxonomy")
            for team in self.taxonomy.team_names:
                sub = self.models.get(team)
                if sub is None:
                    raise AssignError(f"S2 pipeline missing sub-team model for {team}")
                if tuple(sub.label_set) != tuple(sorted(self.taxonomy.subteams_of(team))):
                    raise AssignError(
                        f"{team} model labels {sub.label_set} do not match its sub-teams")

    def _score(self, stage: str, doc: TokenizedDocument) -> Distribution:
        model = self.models[stage]
        return predict(model, tfidf(doc, model.space))


def assign(pipeline: AssignmentPipeline, issue: IssueRecord) -> AssignmentResult:
    """Route one issue. Empty text still produces a result (from the
    learners' priors) flagged low_evidence."""
    started = time.perf_counter()
    doc = preprocess(issue, pipeline.stopwords)
    low_evidence = len(doc.tokens) == 0
    if pipeline.strategy == S1:
        dist = pipeline._score("flat", doc)
        subteam, sub_conf = dist.top()
        team = pipeline.taxonomy.team_of(subteam)
        team_conf = sum(
            dist.score_of(st) for st in pipeline.taxonomy.subteams_of(team))
        team_conf = min(1.0, team_conf)
    else:
        team_dist = pipeline._score("team", doc)
        team, team_conf = team_dist.top()
        sub_dist = pipeline._score(team, doc)
        subteam, sub_conf = sub_dist.top()
    latency_ms = (time.perf_counter() - started) * 1000.0
    return AssignmentResult(
        issue_key=issue.key,
        team=team,
        subteam=subteam,
        team_confidence=team_conf,
        subteam_confidence=sub_conf,
        model_ids=dict(pipeline.model_ids),
        latency_ms=latency_ms,
        low_evidence=low_evidence,
    )


def _check_fraction(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise AssignError(f"{name} must be within [0, 1], got {value}")
    return value


def chained_accuracy(acc_team: float, acc_sub_a: float, acc_sub_b: float) -> float:
    """Expected two-stage accuracy assuming equal team priors:
    (team accuracy * 0.5) * (sub-team A accuracy + sub-team B accuracy)."""
    _check_fraction("acc_team", acc_team)
    _check_fraction("acc_sub_a", acc_sub_a)
    _check_fraction("acc_sub_b", acc_sub_b)
    return (acc_team * 0.5) * (acc_sub_a + acc_sub_b)


def chained_accuracy_weighted(
    acc_team: float, acc_sub_a: float, acc_sub_b: float,
    prior_a: float, prior_b: float,
) -> float:
    """Chained accuracy weighted by observed team priors instead of 0.5."""
    _check_fraction("acc_team", acc_team)
    _check_fraction("acc_sub_a", acc_sub_a)
    _check_fraction("acc_sub_b", acc_sub_b)
    if abs(prior_a + prior_b - 1.0) > 1e-9:
        raise AssignError("team priors must sum to 1")
    return acc_team * (prior_a * acc_sub_a + prior_b * acc_sub_b)


def measured_chain_accuracy(
    pipeline: AssignmentPipeline, test: Sequence[IssueRecord]
) -> float:
    """Fraction of labeled issues routed to the correct sub-team
    end-to-end. A wrong team counts as a miss even if the true team's
    model would have chosen correctly."""
    if not test:
        raise AssignError("cannot measure accuracy on an empty test set")
    hits = 0
    for issue in test:
        if issue.subteam is None:
            raise AssignError(f"issue {issue.key} has no ground-truth sub-team")
        if assign(pipeline, issue).subteam == issue.subteam:
            hits += 1
    return hits / len(test)
