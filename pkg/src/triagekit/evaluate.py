"""Experiment harness: repeated stratified cross-validation, metrics,
corrected resampled t-test, sliding-window backtests, effort savings, and
misassignment cost.

Experiments name the labeling task:
  E1 - six sub-teams on the full corpus
  E2 - two teams on the full corpus
  E3 - sub-teams within team T_A only
  E4 - sub-teams within team T_B only
"""

from __future__ import annotations

import hashlib
import json
import math
import random
import statistics
from dataclasses import dataclass, field, replace
from datetime import timedelta
from typing import Callable, Optional, Sequence

from scipy import stats as sstats

from . import resample as resample_mod
from .corpus import DEFAULT_TAXONOMY, IssueCorpus, IssueRecord, Taxonomy
from .learners import ClassifierSpec, train, predict
from .resample import ResampleSpec
from .textprep import StopwordList, TokenizedDocument, preprocess
from .vectorize import (LabeledDataset, apply_space, build_dataset,
                        build_space, info_gain_select, tfidf)

EXPERIMENTS = ("E1", "E2", "E3", "E4")


class EvaluateError(ValueError):
    pass


# --------------------------------------------------------------------------
# Experiment labelings
# --------------------------------------------------------------------------

def experiment_issues(
    corpus: IssueCorpus, experiment: str, taxonomy: Taxonomy = DEFAULT_TAXONOMY
) -> tuple[list[IssueRecord], Callable[[IssueRecord], str]]:
    """Select the issues and the labeling function for one experiment."""
    if experiment not in EXPERIMENTS:
        raise EvaluateError(f"unknown experiment {experiment!r}")
    labeled = [i for i in corpus if i.subteam is not None]
    if experiment == "E1":
        return labeled, lambda i: i.subteam
    if experiment == "E2":
        return labeled, lambda i: taxonomy.team_of(i.subteam)
    # E3 is the first team in sorted order, E4 the second.
    team = sorted(taxonomy.team_names)[0 if experiment == "E3" else 1]
    subset = [i for i in labeled if taxonomy.team_of(i.subteam) == team]
    return subset, lambda i: i.subteam


def prepare_dataset(
    corpus: IssueCorpus,
    experiment: str,
    stopwords: StopwordList,
    taxonomy: Taxonomy = DEFAULT_TAXONOMY,
) -> LabeledDataset:
    """Preprocess, build the space, and vectorize one experiment's slice."""
    issues, label_fn = experiment_issues(corpus, experiment, taxonomy)
    if not issues:
        raise EvaluateError(f"no labeled issues for experiment {experiment}")
    docs = []
    for issue in issues:
        doc = preprocess(issue, stopwords)
        docs.append(replace_label(doc, label_fn(issue)))
    space = build_space(docs)
    return build_dataset(docs, space)


def replace_label(doc: TokenizedDocument, label: str) -> TokenizedDocument:
    return TokenizedDocument(issue_key=doc.issue_key, tokens=doc.tokens, label=label)


# --------------------------------------------------------------------------
# Confusion matrix and metrics
# --------------------------------------------------------------------------

@dataclass
class ConfusionMatrix:
    """Rows are truth, columns are prediction."""

    label_set: tuple[str, ...]
    counts: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        k = len(self.label_set)
        if not self.counts:
            self.counts = [[0] * k for _ in range(k)]
        if len(self.counts) != k or any(len(r) != k for r in self.counts):
            raise EvaluateError("confusion matrix shape does not match label_set")

    def add(self, truth: str, predicted: str, n: int = 1) -> None:
        self.counts[self.label_set.index(truth)][self.label_set.index(predicted)] += n

    def merge(self, other: "ConfusionMatrix") -> None:
        if other.label_set != self.label_set:
            raise EvaluateError("cannot merge matrices over different labels")
        for i, row in enumerate(other.counts):
            for j, c in enumerate(row):
                self.counts[i][j] += c

    @property
    def total(self) -> int:
        return sum(sum(r) for r in self.counts)

    def to_dict(self) -> dict:
        return {"label_set": list(self.label_set), "counts": [list(r) for r in self.counts]}

    @classmethod
    def from_dict(cls, data: dict) -> "ConfusionMatrix":
        return cls(label_set=tuple(data["label_set"]),
                   counts=[list(r) for r in data["counts"]])


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


def metrics(cm: ConfusionMatrix) -> tuple[float, float, dict[str, ClassMetrics]]:
    """(accuracy, support-weighted F, per-class precision/recall/F).

    A class with precision + recall = 0 gets F = 0.
    """
    total = cm.total
    if total == 0:
        raise EvaluateError("empty confusion matrix")
    k = len(cm.label_set)
    correct = sum(cm.counts[i][i] for i in range(k))
    per_class: dict[str, ClassMetrics] = {}
    weighted_f = 0.0
    for i, label in enumerate(cm.label_set):
        tp = cm.counts[i][i]
        support = sum(cm.counts[i])
        predicted = sum(cm.counts[r][i] for r in range(k))
        precision = tp / predicted if predicted else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassMetrics(precision, recall, f1, support)
        weighted_f += support * f1
    return correct / total, weighted_f / total, per_class


def macro_f(per_class: dict[str, ClassMetrics]) -> float:
    return sum(m.f1 for m in per_class.values()) / len(per_class)


# --------------------------------------------------------------------------
# Cross-validation
# --------------------------------------------------------------------------

@dataclass
class EvaluationReport:
    label_set: tuple[str, ...]
    accuracies: list[float]
    weighted_fs: list[float]
    confusion: ConfusionMatrix
    folds: int
    repeats: int
    config_fingerprint: str

    @property
    def mean_accuracy(self) -> float:
        return statistics.fmean(self.accuracies)

    @property
    def std_accuracy(self) -> float:
        return statistics.stdev(self.accuracies) if len(self.accuracies) > 1 else 0.0

    @property
    def mean_weighted_f(self) -> float:
        return statistics.fmean(self.weighted_fs)

    @property
    def std_weighted_f(self) -> float:
        return statistics.stdev(self.weighted_fs) if len(self.weighted_fs) > 1 else 0.0

    def per_class(self) -> dict[str, ClassMetrics]:
        return metrics(self.confusion)[2]

    def to_dict(self) -> dict:
        per_class = self.per_class()
        return {
            "label_set": list(self.label_set),
            "accuracies": self.accuracies,
            "weighted_fs": self.weighted_fs,
            "confusion": self.confusion.to_dict(),
            "folds": self.folds,
            "repeats": self.repeats,
            "config_fingerprint": self.config_fingerprint,
            "summary": {
                "mean_accuracy": self.mean_accuracy,
                "std_accuracy": self.std_accuracy,
                "mean_weighted_f": self.mean_weighted_f,
                "std_weighted_f": self.std_weighted_f,
                "pooled_macro_f": macro_f(per_class),
            },
            "per_class": {
                label: {"precision": m.precision, "recall": m.recall,
                        "f1": m.f1, "support": m.support}
                for label, m in per_class.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvaluationReport":
        return cls(
            label_set=tuple(data["label_set"]),
            accuracies=list(data["accuracies"]),
            weighted_fs=list(data["weighted_fs"]),
            confusion=ConfusionMatrix.from_dict(data["confusion"]),
            folds=int(data["folds"]),
            repeats=int(data["repeats"]),
            config_fingerprint=data["config_fingerprint"],
        )


def config_fingerprint(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def stratified_folds(
    labels: Sequence[str], folds: int, rng: random.Random
) -> list[list[int]]:
    """Shuffle within each class, then deal indices round-robin to folds."""
    by_class: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    for lab, idxs in by_class.items():
        if len(idxs) < folds:
            raise EvaluateError(
                f"class {lab!r} has {len(idxs)} instances, fewer than {folds} folds")
        rng.shuffle(idxs)
    assignments: list[list[int]] = [[] for _ in range(folds)]
    for lab in sorted(by_class):
        for pos, idx in enumerate(by_class[lab]):
            assignments[pos % folds].append(idx)
    return assignments


def cross_validate(
    spec: ClassifierSpec,
    resample_spec: ResampleSpec,
    data: LabeledDataset,
    folds: int = 10,
    repeats: int = 10,
    seed: int = 0,
    select_threshold: Optional[float] = None,
) -> EvaluationReport:
    """Repeated stratified k-fold evaluation.

    Resampling and (optional) information-gain selection are fit on each
    training split only; test folds are never resampled.
    """
    if len(data) == 0:
        raise EvaluateError("empty dataset")
    fingerprint = config_fingerprint({
        "classifier": spec.to_dict(),
        "resample": resample_spec.to_dict(),
        "folds": folds, "repeats": repeats, "seed": seed,
        "select_threshold": select_threshold,
        "n": len(data), "labels": list(data.label_set),
    })
    pooled = ConfusionMatrix(data.label_set)
    accuracies: list[float] = []
    weighted_fs: list[float] = []
    run = 0
    for repeat in range(repeats):
        rng = random.Random(seed + repeat)
        fold_sets = stratified_folds(data.labels, folds, rng)
        for fold in fold_sets:
            test_idx = sorted(fold)
            in_test = set(test_idx)
            train_idx = [i for i in range(len(data)) if i not in in_test]
            train_ds = data.subset(train_idx)
            test_ds = data.subset(test_idx)
            if select_threshold is not None:
                narrowed = info_gain_select(train_ds, select_threshold)
                train_ds = apply_space(train_ds, narrowed)
                test_ds = apply_space(test_ds, narrowed)
            train_ds = resample_mod.apply(
                train_ds, replace(resample_spec, seed=resample_spec.seed + run))
            model = train(spec, train_ds)
            run_cm = ConfusionMatrix(data.label_set)
            for vec, truth in zip(test_ds.vectors, test_ds.labels):
                run_cm.add(truth, predict(model, vec).top()[0])
            acc, wf, _ = metrics(run_cm)
            accuracies.append(acc)
            weighted_fs.append(wf)
            pooled.merge(run_cm)
            run += 1
    return EvaluationReport(
        label_set=data.label_set,
        accuracies=accuracies,
        weighted_fs=weighted_fs,
        confusion=pooled,
        folds=folds,
        repeats=repeats,
        config_fingerprint=fingerprint,
    )


# --------------------------------------------------------------------------
# Corrected resampled t-test
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    significant: bool
    df: int
    unbounded: bool = False   # zero variance with nonzero mean


def corrected_t_test(
    diffs: Sequence[float], test_train_ratio: float, alpha: float = 0.05
) -> TTestResult:
    """Resampled t-test with variance correction for overlapping training
    sets: t = mean(d) / sqrt((1/k + ratio) * var(d)).

    With ratio = 0 this is the standard paired t statistic.
    """
    k = len(diffs)
    if k < 2:
        raise EvaluateError("need at least two paired differences")
    mean = statistics.fmean(diffs)
    var = statistics.variance(diffs)
    df = k - 1
    if var == 0.0:
        if mean == 0.0:
            return TTestResult(t=0.0, p=1.0, significant=False, df=df)
        t = math.inf if mean > 0 else -math.inf
        return TTestResult(t=t, p=0.0, significant=True, df=df, unbounded=True)
    t = mean / math.sqrt((1.0 / k + test_train_ratio) * var)
    p = 2.0 * float(sstats.t.sf(abs(t), df))
    return TTestResult(t=t, p=p, significant=p < alpha, df=df)


# --------------------------------------------------------------------------
# Sliding windows
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowConfig:
    training_weeks: int
    testing_weeks: int
    step_weeks: Optional[int] = None

    def __post_init__(self):
        if self.training_weeks <= 0 or self.testing_weeks <= 0:
            raise EvaluateError("window durations must be positive")
        if self.step_weeks is not None and self.step_weeks <= 0:
            raise EvaluateError("step must be positive")

    @property
    def step(self) -> int:
        return self.step_weeks if self.step_weeks is not None else self.testing_weeks

    def to_dict(self) -> dict:
        return {"training_weeks": self.training_weeks,
                "testing_weeks": self.testing_weeks,
                "step_weeks": self.step_weeks}

    @classmethod
    def from_dict(cls, data: dict) -> "WindowConfig":
        return cls(training_weeks=int(data["training_weeks"]),
                   testing_weeks=int(data["testing_weeks"]),
                   step_weeks=(int(data["step_weeks"])
                               if data.get("step_weeks") is not None else None))


def expected_window_count(span_weeks: float, config: WindowConfig) -> int:
    """floor((span - train - test) / step) + 1, or 0 when nothing fits."""
    free = span_weeks - config.training_weeks - config.testing_weeks
    if free < 0:
        return 0
    return int(free // config.step) + 1


@dataclass
class WindowResult:
    index: int
    train_start: object
    train_end: object
    test_start: object
    test_end: object
    n_train: int
    n_test: int
    skipped: Optional[str] = None
    accuracy: Optional[float] = None
    weighted_f: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "train_start": str(self.train_start),
            "train_end": str(self.train_end),
            "test_start": str(self.test_start),
            "test_end": str(self.test_end),
            "n_train": self.n_train,
            "n_test": self.n_test,
            "skipped": self.skipped,
            "accuracy": self.accuracy,
            "weighted_f": self.weighted_f,
        }


@dataclass
class SlidingWindowReport:
    windows: list[WindowResult]
    mean_accuracy: Optional[float]
    std_accuracy: Optional[float]
    evaluated: int
    skipped: int

    def to_dict(self) -> dict:
        return {
            "windows": [w.to_dict() for w in self.windows],
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "evaluated": self.evaluated,
            "skipped": self.skipped,
        }


def sliding_window_eval(
    spec: ClassifierSpec,
    corpus: IssueCorpus,
    config: WindowConfig,
    stopwords: StopwordList,
    experiment: str = "E1",
    taxonomy: Taxonomy = DEFAULT_TAXONOMY,
) -> SlidingWindowReport:
    """Chronological backtest: train on a trailing window, test on the
    window that follows, advance by the step.

    Windows whose training slice holds fewer than two classes (or whose
    test slice is empty) are skipped and reported as such.
    """
    issues, label_fn = experiment_issues(corpus, experiment, taxonomy)
    if not issues:
        raise EvaluateError("no labeled issues to backtest")
    span_start = issues[0].created
    span_end = issues[-1].created
    span_weeks = (span_end - span_start).total_seconds() / (7 * 24 * 3600)
    count = expected_window_count(span_weeks, config)
    if count == 0:
        raise EvaluateError(
            "corpus span is shorter than one training+testing window pair")
    label_set = tuple(sorted({label_fn(i) for i in issues}))
    docs = {i.key: preprocess(i, stopwords) for i in issues}
    results: list[WindowResult] = []
    accuracies: list[float] = []
    w_tr = timedelta(weeks=config.training_weeks)
    w_te = timedelta(weeks=config.testing_weeks)
    step = timedelta(weeks=config.step)
    for w in range(count):
        train_start = span_start + w * step
        train_end = train_start + w_tr
        test_end = train_end + w_te
        train_issues = [i for i in issues if train_start <= i.created < train_end]
        test_issues = [i for i in issues if train_end <= i.created < test_end]
        window = WindowResult(
            index=w, train_start=train_start, train_end=train_end,
            test_start=train_end, test_end=test_end,
            n_train=len(train_issues), n_test=len(test_issues),
        )
        train_labels = {label_fn(i) for i in train_issues}
        if len(train_labels) < 2:
            window.skipped = "training window has fewer than two classes"
            results.append(window)
            continue
        if not test_issues:
            window.skipped = "empty testing window"
            results.append(window)
            continue
        train_docs = [replace_label(docs[i.key], label_fn(i)) for i in train_issues]
        space = build_space(train_docs)
        train_ds = build_dataset(train_docs, space)
        model = train(spec, train_ds, training_window=(train_start, train_end))
        cm = ConfusionMatrix(label_set)
        for issue in test_issues:
            doc = docs[issue.key]
            cm.add(label_fn(issue), predict(model, tfidf(doc, space)).top()[0])
        acc, wf, _ = metrics(cm)
        window.accuracy = acc
        window.weighted_f = wf
        accuracies.append(acc)
        results.append(window)
    evaluated = len(accuracies)
    return SlidingWindowReport(
        windows=results,
        mean_accuracy=statistics.fmean(accuracies) if accuracies else None,
        std_accuracy=(statistics.stdev(accuracies) if len(accuracies) > 1 else
                      (0.0 if accuracies else None)),
        evaluated=evaluated,
        skipped=len(results) - evaluated,
    )


# --------------------------------------------------------------------------
# Effort savings and misassignment cost
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SavingsParams:
    issues_per_day: float
    manual_seconds_per_issue: float
    auto_ms_per_issue: float
    accuracy: float
    correct_count_rule: str = "floor_paper"   # or "exact"
    working_days_per_month: float = 21.75

    def __post_init__(self):
        if min(self.issues_per_day, self.manual_seconds_per_issue,
               self.auto_ms_per_issue) < 0:
            raise EvaluateError("savings parameters must be non-negative")
        if not 0.0 <= self.accuracy <= 1.0:
            raise EvaluateError("accuracy must be within [0, 1]")
        if self.correct_count_rule not in ("floor_paper", "exact"):
            raise EvaluateError(f"unknown rule {self.correct_count_rule!r}")


@dataclass(frozen=True)
class SavingsReport:
    auto_seconds_per_day: float
    manual_seconds_per_day: float
    reduction_fraction: float
    monthly_hours_saved: float
    correct_per_day: float
    wrong_per_day: float
    # Reduction figures quoted alongside the original workload estimates;
    # they do not follow from the inputs' arithmetic and are kept only for
    # comparison, never asserted.
    quoted_reductions: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "auto_seconds_per_day": self.auto_seconds_per_day,
            "manual_seconds_per_day": self.manual_seconds_per_day,
            "reduction_fraction": self.reduction_fraction,
            "monthly_hours_saved": self.monthly_hours_saved,
            "correct_per_day": self.correct_per_day,
            "wrong_per_day": self.wrong_per_day,
            "quoted_reductions": list(self.quoted_reductions),
        }


SAVINGS_PROFILES = {
    "paper-rq5": SavingsParams(
        issues_per_day=12,
        manual_seconds_per_issue=780,
        auto_ms_per_issue=161.55,
        accuracy=0.8163,
        correct_count_rule="floor_paper",
    ),
}

QUOTED_REDUCTIONS = {"paper-rq5": (0.7562, 0.7998)}


def effort_savings(p: SavingsParams, quoted: tuple[float, ...] = ()) -> SavingsReport:
    """Daily time cost of auto-assignment versus all-manual assignment.

    Correctly routed issues cost the automatic per-issue time; the rest
    cost a full manual correction. The floor_paper rule rounds the correct
    count down to a whole issue; exact keeps the fractional split.
    """
    manual_per_day = p.issues_per_day * p.manual_seconds_per_issue
    correct = p.issues_per_day * p.accuracy
    if p.correct_count_rule == "floor_paper":
        correct = float(math.floor(correct))
    wrong = p.issues_per_day - correct
    auto_per_day = (correct * p.auto_ms_per_issue / 1000.0
                    + wrong * p.manual_seconds_per_issue)
    reduction = 1.0 - auto_per_day / manual_per_day if manual_per_day > 0 else 0.0
    saved_hours = ((manual_per_day - auto_per_day) / 3600.0) * p.working_days_per_month
    return SavingsReport(
        auto_seconds_per_day=auto_per_day,
        manual_seconds_per_day=manual_per_day,
        reduction_fraction=reduction,
        monthly_hours_saved=saved_hours,
        correct_per_day=correct,
        wrong_per_day=wrong,
        quoted_reductions=quoted,
    )


def savings_for_profile(name: str) -> SavingsReport:
    if name not in SAVINGS_PROFILES:
        raise EvaluateError(f"unknown savings profile {name!r}")
    return effort_savings(SAVINGS_PROFILES[name], QUOTED_REDUCTIONS.get(name, ()))


def misassignment_cost(
    predicted: Sequence, truth: Sequence[str],
    cost_fn: Optional[Callable[[str, str], float]] = None,
) -> float:
    """Total cost over parallel (predicted, truth) lists.

    `predicted` may hold labels or AssignmentResults. The default cost
    charges 1 per misassignment.
    """
    if len(predicted) != len(truth):
        raise EvaluateError(
            f"length mismatch: {len(predicted)} predictions, {len(truth)} truths")
    if cost_fn is None:
        cost_fn = lambda pred, true: 0.0 if pred == true else 1.0
    total = 0.0
    for pred, true in zip(predicted, truth):
        label = getattr(pred, "subteam", pred)
        total += cost_fn(label, true)
    return total
