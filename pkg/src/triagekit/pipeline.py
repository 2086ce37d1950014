"""Build deployable pipelines from a training config.

Each pipeline stage maps to a labeling task: the flat stage learns all six
sub-teams, the team stage learns the two teams, and each per-team stage
learns its own sub-teams on that team's issues only.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import resample as resample_mod
from .assign import AssignmentPipeline
from .config import TrainingConfig
from .corpus import DEFAULT_TAXONOMY, IssueCorpus, Taxonomy
from .evaluate import EvaluationReport, cross_validate, prepare_dataset
from .learners import TrainedModel, train
from .textprep import StopwordList, rainbow_stopwords
from .vectorize import LabeledDataset, apply_space, info_gain_select

_STAGE_EXPERIMENT = {"flat": "E1", "team": "E2"}


def stage_experiment(stage: str, taxonomy: Taxonomy = DEFAULT_TAXONOMY) -> str:
    if stage in _STAGE_EXPERIMENT:
        return _STAGE_EXPERIMENT[stage]
    teams = sorted(taxonomy.team_names)
    if stage not in teams:
        raise ValueError(f"unknown pipeline stage {stage!r}")
    return "E3" if stage == teams[0] else "E4"


def stage_dataset(
    corpus: IssueCorpus, stage: str, stopwords: StopwordList,
    taxonomy: Taxonomy = DEFAULT_TAXONOMY,
) -> LabeledDataset:
    return prepare_dataset(corpus, stage_experiment(stage, taxonomy), stopwords,
                           taxonomy)


@dataclass
class TrainedPipeline:
    pipeline: AssignmentPipeline
    models: dict[str, TrainedModel]
    reports: dict[str, EvaluationReport]


def train_pipeline(
    config: TrainingConfig,
    corpus: IssueCorpus | None = None,
    stopwords: StopwordList | None = None,
    taxonomy: Taxonomy = DEFAULT_TAXONOMY,
    evaluate: bool = True,
) -> TrainedPipeline:
    """Fit one model per stage and cross-validate each for its report.

    Feature selection and resampling apply to the deployed fit as a whole;
    inside cross-validation they are re-fit per training split.
    """
    if corpus is None:
        corpus = config.dataset.resolve()
    if stopwords is None:
        stopwords = rainbow_stopwords()
    span = corpus.span
    models: dict[str, TrainedModel] = {}
    reports: dict[str, EvaluationReport] = {}
    for stage in config.stages:
        data = stage_dataset(corpus, stage, stopwords, taxonomy)
        if evaluate:
            reports[stage] = cross_validate(
                config.classifiers[stage], config.resample, data,
                folds=config.evaluation.folds, repeats=config.evaluation.repeats,
                seed=config.evaluation.seed,
                select_threshold=config.select_threshold,
            )
        fit_data = data
        if config.select_threshold is not None:
            narrowed = info_gain_select(fit_data, config.select_threshold)
            fit_data = apply_space(fit_data, narrowed)
        fit_data = resample_mod.apply(fit_data, config.resample)
        models[stage] = train(config.classifiers[stage], fit_data,
                              training_window=span)
    pipeline = AssignmentPipeline(
        strategy=config.strategy,
        models=models,
        stopwords=stopwords,
        taxonomy=taxonomy,
    )
    return TrainedPipeline(pipeline=pipeline, models=models, reports=reports)
