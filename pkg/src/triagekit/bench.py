"""Bench CLI: sweep a classifier grid over the assignment experiments and
render the result tables.

    bench run --config bench.yaml --out results/ [--seed N] [--table csv|txt]
    bench gen --spec default --seed 42 --out corpus.csv

Cells show "mean(std)" percentages. The best cell per column is bracketed;
an asterisk marks cells with no significant difference from the best under
the corrected paired t-test at alpha 0.05.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import traceback
from pathlib import Path

from .assign import chained_accuracy, chained_accuracy_weighted
from .config import BUNDLED_SPECS, BenchConfig, ConfigError, load_config_file
from .corpus import corpus_to_csv, generate_synthetic
from .evaluate import (EvaluationReport, corrected_t_test, cross_validate,
                       prepare_dataset, savings_for_profile,
                       sliding_window_eval)
from .resample import ResampleSpec
from .textprep import rainbow_stopwords


@dataclasses.dataclass
class Cell:
    classifier: str
    experiment: str
    report: EvaluationReport | None = None
    error: str | None = None
    best: bool = False
    similar_to_best: bool = False


def _fmt_cell(cell: Cell) -> str:
    if cell.error:
        return "FAILED"
    r = cell.report
    text = f"{100 * r.mean_accuracy:.2f}({100 * r.std_accuracy:.2f})"
    if cell.best:
        text = f"[{text}]"
    elif cell.similar_to_best:
        text = f"{text}*"
    return text


def _fmt_f(cell: Cell) -> str:
    if cell.error:
        return "-"
    r = cell.report
    return f"{r.mean_weighted_f:.2f}({r.std_weighted_f:.2f})"


def _mark_significance(cells: list[Cell], folds: int) -> None:
    """Within one column, bracket the best mean accuracy and star the cells
    the corrected t-test cannot distinguish from it."""
    scored = [c for c in cells if c.report is not None]
    if not scored:
        return
    best = max(scored, key=lambda c: c.report.mean_accuracy)
    best.best = True
    ratio = 1.0 / (folds - 1)
    for cell in scored:
        if cell is best:
            continue
        a, b = cell.report.accuracies, best.report.accuracies
        if len(a) != len(b):
            continue
        diffs = [x - y for x, y in zip(a, b)]
        result = corrected_t_test(diffs, ratio)
        cell.similar_to_best = not result.significant


def _aligned_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, val in enumerate(row):
            widths[i] = max(widths[i], len(val))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(v.ljust(widths[i]) for i, v in enumerate(row)))
    return "\n".join(lines) + "\n"


def _csv_rows(table: str, cells: list[Cell]) -> list[dict]:
    rows = []
    for c in cells:
        rows.append({
            "table": table,
            "classifier": c.classifier,
            "experiment": c.experiment,
            "mean_accuracy": f"{c.report.mean_accuracy:.6f}" if c.report else "",
            "std_accuracy": f"{c.report.std_accuracy:.6f}" if c.report else "",
            "mean_weighted_f": f"{c.report.mean_weighted_f:.6f}" if c.report else "",
            "std_weighted_f": f"{c.report.std_weighted_f:.6f}" if c.report else "",
            "best": "1" if c.best else "0",
            "similar_to_best": "1" if c.similar_to_best else "0",
            "error": c.error or "",
        })
    return rows


def _write_csv(path: Path, rows: list[dict]) -> None:
    import csv

    if not rows:
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def run_bench(config: BenchConfig, out_dir: Path, table_format: str = "txt") -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    stopwords = rainbow_stopwords()
    corpus = config.dataset.resolve()
    print(f"corpus: {len(corpus)} issues, labels {corpus.label_counts()}")
    datasets = {}
    failures = 0

    grid_cells: dict[str, list[Cell]] = {e: [] for e in config.experiments}
    for experiment in config.experiments:
        datasets[experiment] = prepare_dataset(corpus, experiment, stopwords)
        for name, spec in config.grid.items():
            if spec.kind == "sgd_text" and len(datasets[experiment].label_set) != 2:
                continue  # binary-only: skip multi-class experiments
            cell = Cell(classifier=name, experiment=experiment)
            try:
                cell.report = cross_validate(
                    spec, config.resample, datasets[experiment],
                    folds=config.evaluation.folds,
                    repeats=config.evaluation.repeats,
                    seed=config.evaluation.seed,
                    select_threshold=config.select_threshold,
                )
            except Exception as exc:
                cell.error = f"{type(exc).__name__}: {exc}"
                failures += 1
            grid_cells[experiment].append(cell)
        _mark_significance(grid_cells[experiment], config.evaluation.folds)

    headers = ["classifier"] + [f"{e} acc" for e in config.experiments] \
        + [f"{e} F" for e in config.experiments]
    rows = []
    for name in config.grid:
        row = [name]
        by_exp = {e: next((c for c in grid_cells[e] if c.classifier == name), None)
                  for e in config.experiments}
        for e in config.experiments:
            row.append(_fmt_cell(by_exp[e]) if by_exp[e] else "-")
        for e in config.experiments:
            row.append(_fmt_f(by_exp[e]) if by_exp[e] else "-")
        rows.append(row)
    grid_txt = _aligned_table(headers, rows)
    (out_dir / "results_grid.txt").write_text(grid_txt)
    all_cells = [c for cells in grid_cells.values() for c in cells]
    _write_csv(out_dir / "results_grid.csv", _csv_rows("grid", all_cells))

    summary: dict = {"grid": {e: {c.classifier: (c.report.to_dict() if c.report
                                                 else {"error": c.error})
                                  for c in cells}
                              for e, cells in grid_cells.items()}}

    # Chained-accuracy estimate from the best of E2/E3/E4, if all present.
    if all(e in grid_cells for e in ("E2", "E3", "E4")):
        best = {}
        for e in ("E2", "E3", "E4"):
            scored = [c for c in grid_cells[e] if c.report]
            if scored:
                best[e] = max(scored, key=lambda c: c.report.mean_accuracy)
        if len(best) == 3:
            acc2 = best["E2"].report.mean_accuracy
            acc3 = best["E3"].report.mean_accuracy
            acc4 = best["E4"].report.mean_accuracy
            n3 = len(datasets["E3"]) if "E3" in datasets else 0
            n4 = len(datasets["E4"]) if "E4" in datasets else 0
            prior_a = n3 / (n3 + n4) if n3 + n4 else 0.5
            chained = {
                "inputs": {e: best[e].report.mean_accuracy for e in best},
                "equal_priors": chained_accuracy(acc2, acc3, acc4),
                "observed_priors": chained_accuracy_weighted(
                    acc2, acc3, acc4, prior_a, 1 - prior_a),
                "team_priors": [prior_a, 1 - prior_a],
            }
            summary["chained_accuracy"] = chained
            print(f"chained accuracy (equal team priors): "
                  f"{chained['equal_priors']:.4f}; "
                  f"observed priors {prior_a:.3f}/{1 - prior_a:.3f}: "
                  f"{chained['observed_priors']:.4f}")

    if config.resample_sweep is not None:
        sweep = config.resample_sweep
        columns = [f"{name} ({exp})" for name, exp in sweep.cells]
        sweep_cells: dict[str, list[Cell]] = {c: [] for c in columns}
        for column, (name, experiment) in zip(columns, sweep.cells):
            if experiment not in datasets:
                datasets[experiment] = prepare_dataset(corpus, experiment,
                                                       stopwords)
            for method in sweep.methods:
                cell = Cell(classifier=method, experiment=column)
                try:
                    cell.report = cross_validate(
                        config.grid[name],
                        ResampleSpec(method=method,
                                     seed=config.resample.seed),
                        datasets[experiment],
                        folds=config.evaluation.folds,
                        repeats=config.evaluation.repeats,
                        seed=config.evaluation.seed,
                        select_threshold=config.select_threshold,
                    )
                except Exception as exc:
                    cell.error = f"{type(exc).__name__}: {exc}"
                    failures += 1
                sweep_cells[column].append(cell)
            _mark_significance(sweep_cells[column], config.evaluation.folds)
        sweep_rows = []
        for method in sweep.methods:
            row = [method]
            for column in columns:
                cell = next(c for c in sweep_cells[column]
                            if c.classifier == method)
                row.append(_fmt_cell(cell))
            for column in columns:
                cell = next(c for c in sweep_cells[column]
                            if c.classifier == method)
                row.append(_fmt_f(cell))
            sweep_rows.append(row)
        sweep_txt = _aligned_table(
            ["resample"] + [f"{c} acc" for c in columns]
            + [f"{c} F" for c in columns], sweep_rows)
        (out_dir / "resample_sweep.txt").write_text(sweep_txt)
        _write_csv(out_dir / "resample_sweep.csv",
                   _csv_rows("resample_sweep",
                             [c for cells in sweep_cells.values()
                              for c in cells]))
        summary["resample_sweep"] = {
            column: {c.classifier: (c.report.to_dict() if c.report
                                    else {"error": c.error})
                     for c in cells}
            for column, cells in sweep_cells.items()}

    if config.windows is not None:
        window_rows = []
        for name, spec in config.grid.items():
            try:
                report = sliding_window_eval(
                    spec, corpus, config.windows, stopwords,
                    experiment=config.window_experiment)
                window_rows.append([
                    name,
                    f"{config.windows.training_weeks}w/{config.windows.testing_weeks}w",
                    str(report.evaluated),
                    str(report.skipped),
                    f"{100 * report.mean_accuracy:.2f}" if report.mean_accuracy
                    is not None else "-",
                    f"{100 * report.std_accuracy:.2f}" if report.std_accuracy
                    is not None else "-",
                ])
                summary.setdefault("windows", {})[name] = report.to_dict()
            except Exception as exc:
                failures += 1
                window_rows.append([name, "-", "-", "-", "FAILED",
                                    f"{type(exc).__name__}: {exc}"])
        windows_txt = _aligned_table(
            ["classifier", "train/test", "windows", "skipped", "mean acc %",
             "std"], window_rows)
        (out_dir / "windows.txt").write_text(windows_txt)

    if config.savings_profile:
        report = savings_for_profile(config.savings_profile)
        summary["savings"] = {"profile": config.savings_profile,
                              **report.to_dict()}
        print(f"savings[{config.savings_profile}]: "
              f"auto {report.auto_seconds_per_day:.2f} s/day vs manual "
              f"{report.manual_seconds_per_day:.0f} s/day -> reduction "
              f"{100 * report.reduction_fraction:.2f}%"
              + (f" (quoted elsewhere: "
                 f"{', '.join(f'{100 * q:.2f}%' for q in report.quoted_reductions)})"
                 if report.quoted_reductions else ""))

    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    if table_format == "csv":
        sys.stdout.write(
            Path(out_dir / "results_grid.csv").read_text(encoding="utf-8"))
    else:
        sys.stdout.write(grid_txt)
    if failures:
        print(f"{failures} run(s) failed", file=sys.stderr)
    return 1 if failures else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a bench config")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", required=True)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--table", choices=("csv", "txt"), default="txt")

    gen_p = sub.add_parser("gen", help="write a synthetic corpus as CSV")
    gen_p.add_argument("--spec", default="default", choices=sorted(BUNDLED_SPECS))
    gen_p.add_argument("--seed", type=int, default=42)
    gen_p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    if args.command == "gen":
        corpus = generate_synthetic(BUNDLED_SPECS[args.spec](), args.seed)
        Path(args.out).write_text(corpus_to_csv(corpus), encoding="utf-8")
        print(f"wrote {len(corpus)} issues to {args.out}")
        return 0

    try:
        raw = load_config_file(args.config)
        config = BenchConfig.from_dict(raw)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"cannot load config: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config = dataclasses.replace(
            config,
            evaluation=dataclasses.replace(config.evaluation, seed=args.seed))
    try:
        return run_bench(config, Path(args.out), args.table)
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
