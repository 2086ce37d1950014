"""Config schema shared by the bench CLI and the training service.

A training config names a dataset source, a strategy, one classifier per
pipeline stage, a resample treatment, and evaluation settings. A bench
config instead sweeps a classifier grid over experiments. Validation
collects field-level messages rather than failing on the first problem.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .corpus import (DEFAULT_TAXONOMY, IssueCorpus, SyntheticSpec,
                     default_spec, generate_synthetic, load_csv,
                     noise_free_spec, read_csv)
from .evaluate import EXPERIMENTS, SAVINGS_PROFILES, WindowConfig
from .learners import ClassifierSpec, LearnerError
from .resample import METHODS as RESAMPLE_METHODS
from .resample import ResampleError, ResampleSpec

BUNDLED_SPECS = {
    "default": default_spec,
    "noise-free": noise_free_spec,
}


class ConfigError(ValueError):
    """Carries one message per offending field."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass(frozen=True)
class DatasetSource:
    synthetic: Optional[SyntheticSpec] = None
    synthetic_seed: int = 42
    csv_path: Optional[str] = None
    csv_text: Optional[str] = None   # uploaded file contents, inline

    def resolve(self) -> IssueCorpus:
        if self.csv_text is not None:
            corpus, _ = read_csv(io.StringIO(self.csv_text))
            return corpus
        if self.csv_path is not None:
            corpus, _ = load_csv(self.csv_path)
            return corpus
        assert self.synthetic is not None
        return generate_synthetic(self.synthetic, self.synthetic_seed)

    def to_dict(self) -> dict:
        if self.csv_text is not None:
            return {"csv": {"text": self.csv_text}}
        if self.csv_path is not None:
            return {"csv": {"path": self.csv_path}}
        return {"synthetic": {"spec": self.synthetic.to_dict(),
                              "seed": self.synthetic_seed}}


def _parse_dataset(data: dict, errors: list[str]) -> Optional[DatasetSource]:
    if not isinstance(data, dict):
        errors.append("dataset: must be a mapping")
        return None
    if "csv" in data:
        csv_cfg = data["csv"] if isinstance(data["csv"], dict) else {}
        text = csv_cfg.get("text")
        path = csv_cfg.get("path")
        if text is not None:
            if not str(text).strip():
                errors.append("dataset.csv.text: uploaded file is empty")
                return None
            return DatasetSource(csv_text=str(text))
        if not path:
            errors.append("dataset.csv: needs 'path' or inline 'text'")
            return None
        if not Path(path).exists():
            errors.append(f"dataset.csv.path: no such file {path!r}")
            return None
        return DatasetSource(csv_path=str(path))
    if "synthetic" in data:
        syn = data["synthetic"] if isinstance(data["synthetic"], dict) else {}
        spec_entry = syn.get("spec", "default")
        seed = syn.get("seed", 42)
        try:
            if isinstance(spec_entry, str):
                if spec_entry not in BUNDLED_SPECS:
                    errors.append(
                        f"dataset.synthetic.spec: unknown bundled spec {spec_entry!r} "
                        f"(have {sorted(BUNDLED_SPECS)})")
                    return None
                spec = BUNDLED_SPECS[spec_entry]()
            else:
                spec = SyntheticSpec.from_dict(spec_entry)
        except (ValueError, KeyError, TypeError) as exc:
            errors.append(f"dataset.synthetic.spec: {exc}")
            return None
        return DatasetSource(synthetic=spec, synthetic_seed=int(seed))
    errors.append("dataset: needs either 'synthetic' or 'csv'")
    return None


def _parse_classifier(data, prefix: str, errors: list[str]) -> Optional[ClassifierSpec]:
    if not isinstance(data, dict):
        errors.append(f"{prefix}: must be a mapping with a 'kind'")
        return None
    try:
        return ClassifierSpec.from_dict(data)
    except (LearnerError, KeyError, TypeError, ValueError) as exc:
        detail = str(exc) if str(exc) else repr(exc)
        errors.append(f"{prefix}: {detail}")
        return None


def _parse_resample(data, errors: list[str]) -> ResampleSpec:
    if data is None:
        return ResampleSpec()
    try:
        return ResampleSpec.from_dict(data)
    except (ResampleError, TypeError, ValueError) as exc:
        errors.append(f"resample: {exc}")
        return ResampleSpec()


@dataclass(frozen=True)
class EvaluationSettings:
    folds: int = 10
    repeats: int = 10
    seed: int = 0

    def to_dict(self) -> dict:
        return {"folds": self.folds, "repeats": self.repeats, "seed": self.seed}


def _parse_evaluation(data, errors: list[str]) -> EvaluationSettings:
    if data is None:
        return EvaluationSettings()
    try:
        settings = EvaluationSettings(
            folds=int(data.get("folds", 10)),
            repeats=int(data.get("repeats", 10)),
            seed=int(data.get("seed", 0)),
        )
    except (TypeError, ValueError, AttributeError) as exc:
        errors.append(f"evaluation: {exc}")
        return EvaluationSettings()
    if settings.folds < 2:
        errors.append("evaluation.folds: must be >= 2")
    if settings.repeats < 1:
        errors.append("evaluation.repeats: must be >= 1")
    return settings


@dataclass(frozen=True)
class TrainingConfig:
    """One training run: fit the pipeline's models and evaluate them."""

    dataset: DatasetSource
    strategy: str
    classifiers: dict[str, ClassifierSpec]
    resample: ResampleSpec = field(default_factory=ResampleSpec)
    evaluation: EvaluationSettings = field(default_factory=EvaluationSettings)
    select_threshold: Optional[float] = None

    @property
    def stages(self) -> tuple[str, ...]:
        if self.strategy == "S1":
            return ("flat",)
        return ("team",) + tuple(sorted(DEFAULT_TAXONOMY.team_names))

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset.to_dict(),
            "strategy": self.strategy,
            "classifiers": {k: v.to_dict() for k, v in self.classifiers.items()},
            "resample": self.resample.to_dict(),
            "evaluation": self.evaluation.to_dict(),
            "select_threshold": self.select_threshold,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrainingConfig":
        errors: list[str] = []
        if not isinstance(data, dict):
            raise ConfigError(["config: must be a mapping"])
        dataset = _parse_dataset(data.get("dataset", {}), errors)
        strategy = data.get("strategy", "S2")
        if strategy not in ("S1", "S2"):
            errors.append(f"strategy: must be S1 or S2, got {strategy!r}")
            strategy = "S2"
        expected = ("flat",) if strategy == "S1" else (
            ("team",) + tuple(sorted(DEFAULT_TAXONOMY.team_names)))
        classifiers: dict[str, ClassifierSpec] = {}
        raw_classifiers = data.get("classifiers", {})
        if not isinstance(raw_classifiers, dict):
            errors.append("classifiers: must map stage name to classifier spec")
            raw_classifiers = {}
        for stage in expected:
            if stage not in raw_classifiers:
                errors.append(f"classifiers.{stage}: required for strategy {strategy}")
                continue
            spec = _parse_classifier(raw_classifiers[stage],
                                     f"classifiers.{stage}", errors)
            if spec is not None:
                classifiers[stage] = spec
        for stage in raw_classifiers:
            if stage not in expected:
                errors.append(f"classifiers.{stage}: unknown stage for {strategy} "
                              f"(expected {list(expected)})")
        resample = _parse_resample(data.get("resample"), errors)
        evaluation = _parse_evaluation(data.get("evaluation"), errors)
        threshold = data.get("select_threshold")
        if threshold is not None:
            try:
                threshold = float(threshold)
            except (TypeError, ValueError):
                errors.append("select_threshold: must be a number")
                threshold = None
        if errors:
            raise ConfigError(errors)
        assert dataset is not None
        return cls(dataset=dataset, strategy=strategy, classifiers=classifiers,
                   resample=resample, evaluation=evaluation,
                   select_threshold=threshold)


@dataclass(frozen=True)
class ResampleSweep:
    """Compare resample methods on chosen (classifier, experiment) cells."""

    methods: tuple[str, ...]
    cells: tuple[tuple[str, str], ...]   # (classifier display name, experiment)


@dataclass(frozen=True)
class BenchConfig:
    """A classifier-grid sweep over experiments, plus optional resample,
    window, and savings sections."""

    dataset: DatasetSource
    experiments: tuple[str, ...]
    grid: dict[str, ClassifierSpec]
    resample: ResampleSpec = field(default_factory=ResampleSpec)
    evaluation: EvaluationSettings = field(default_factory=EvaluationSettings)
    select_threshold: Optional[float] = None
    windows: Optional[WindowConfig] = None
    window_experiment: str = "E2"
    savings_profile: Optional[str] = None
    resample_sweep: Optional[ResampleSweep] = None

    @classmethod
    def from_dict(cls, data: dict) -> "BenchConfig":
        errors: list[str] = []
        dataset = _parse_dataset(data.get("dataset", {}), errors)
        experiments = tuple(data.get("experiments", list(EXPERIMENTS)))
        for e in experiments:
            if e not in EXPERIMENTS:
                errors.append(f"experiments: unknown experiment {e!r}")
        raw_grid = data.get("classifiers", {})
        grid: dict[str, ClassifierSpec] = {}
        if not isinstance(raw_grid, dict) or not raw_grid:
            errors.append("classifiers: must map display name to classifier spec")
        else:
            for name, raw in raw_grid.items():
                spec = _parse_classifier(raw, f"classifiers.{name}", errors)
                if spec is not None:
                    grid[name] = spec
        resample = _parse_resample(data.get("resample"), errors)
        evaluation = _parse_evaluation(data.get("evaluation"), errors)
        threshold = data.get("select_threshold")
        windows = None
        if data.get("windows") is not None:
            try:
                windows = WindowConfig.from_dict(data["windows"])
            except (ValueError, KeyError, TypeError) as exc:
                errors.append(f"windows: {exc}")
        window_experiment = data.get("window_experiment", "E2")
        if window_experiment not in EXPERIMENTS:
            errors.append(f"window_experiment: unknown experiment {window_experiment!r}")
        savings_profile = data.get("savings_profile")
        if savings_profile is not None and savings_profile not in SAVINGS_PROFILES:
            errors.append(f"savings_profile: unknown profile {savings_profile!r} "
                          f"(have {sorted(SAVINGS_PROFILES)})")
        sweep = None
        if data.get("resample_sweep") is not None:
            raw_sweep = data["resample_sweep"]
            methods = tuple(raw_sweep.get("methods",
                                          ["none", "undersample",
                                           "oversample", "smote"]))
            for m in methods:
                if m not in RESAMPLE_METHODS:
                    errors.append(f"resample_sweep.methods: unknown method {m!r}")
            cells = []
            for cell in raw_sweep.get("cells", []):
                name = cell.get("classifier") if isinstance(cell, dict) else None
                experiment = cell.get("experiment") if isinstance(cell, dict) else None
                if name not in grid:
                    errors.append(
                        f"resample_sweep.cells: classifier {name!r} not in grid")
                elif experiment not in EXPERIMENTS:
                    errors.append(
                        f"resample_sweep.cells: unknown experiment {experiment!r}")
                else:
                    cells.append((name, experiment))
            if not cells:
                errors.append("resample_sweep.cells: at least one "
                              "{classifier, experiment} pair required")
            sweep = ResampleSweep(methods=methods, cells=tuple(cells))
        if errors:
            raise ConfigError(errors)
        assert dataset is not None
        return cls(dataset=dataset, experiments=experiments, grid=grid,
                   resample=resample, evaluation=evaluation,
                   select_threshold=threshold, windows=windows,
                   window_experiment=window_experiment,
                   savings_profile=savings_profile, resample_sweep=sweep)


def load_config_file(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        return json.loads(text)
    return yaml.safe_load(text)
