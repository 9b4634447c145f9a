"""momentbench CLI: accuracy tables and moment-count sweeps from feature CSVs."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .experiment import (
    ExperimentConfig,
    accuracy_table_csv,
    accuracy_table_markdown,
    run_cv,
    sweep_curve_csv,
    sweep_moments,
)


def _parse_sources(raw: tuple[str, ...]) -> tuple[tuple[str, str], ...]:
    out = []
    for item in raw:
        path, sep, label = item.rpartition(":")
        if not sep or not path:
            raise click.UsageError(f"--source must be PATH:LABEL, got {item!r}")
        out.append((path, label))
    return tuple(out)


@click.group()
def cli():
    """Classification bench over moment-feature CSVs."""


@cli.command()
@click.option("--source", "sources", multiple=True, required=True,
              help="Feature CSV and its class label as PATH:LABEL (repeatable).")
@click.option("--task", default="task", show_default=True)
@click.option("--folds", type=int, default=10, show_default=True)
@click.option("--repeats", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--classifier", default="hist_gbdt", show_default=True,
              type=click.Choice(["hist_gbdt", "gbdt"]))
@click.option("--max-moments", type=int, default=None,
              help="Use only the first q moments per (r, s) pair.")
@click.option("--out-csv", type=click.Path(), default=None)
@click.option("--out-md", type=click.Path(), default=None)
def cv(sources, task, folds, repeats, seed, classifier, max_moments, out_csv, out_md):
    """10-fold (by default) cross-validated accuracy, repeated with fresh splits."""
    config = ExperimentConfig(
        task=task,
        sources=_parse_sources(sources),
        folds=folds,
        repeats=repeats,
        seed=seed,
        classifier=classifier,
        max_moments=max_moments,
    )
    result = run_cv(config)
    if out_csv:
        Path(out_csv).write_text(accuracy_table_csv([result]))
    if out_md:
        Path(out_md).write_text(accuracy_table_markdown([result]))
    click.echo(f"{result.task}: {result.table_row()} "
               f"[n={result.n_samples}, features={result.n_features}]")


@cli.command()
@click.option("--source", "sources", multiple=True, required=True)
@click.option("--task", default="sweep", show_default=True)
@click.option("--folds", type=int, default=10, show_default=True)
@click.option("--repeats", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--classifier", default="hist_gbdt", show_default=True,
              type=click.Choice(["hist_gbdt", "gbdt"]))
@click.option("--qmax", type=int, default=14, show_default=True)
@click.option("--out", type=click.Path(), required=True, help="Curve CSV path.")
def sweep(sources, task, folds, repeats, seed, classifier, qmax, out):
    """Accuracy-vs-moment-count curve (q = 1..qmax moments per pair)."""
    config = ExperimentConfig(
        task=task,
        sources=_parse_sources(sources),
        folds=folds,
        repeats=repeats,
        seed=seed,
        classifier=classifier,
    )
    points = sweep_moments(config, q_max=qmax)
    Path(out).write_text(sweep_curve_csv(points))
    best = max(p.mean for p in points)
    click.echo(f"best={best:.4f} at q={max(points, key=lambda p: p.mean).q}; "
               f"curve written to {out}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
