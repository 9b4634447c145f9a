"""Cross-validated classification experiments over feature tables.

Protocol: stratified k-fold, repeated with distinct random splits;
accuracies are pooled over folds within a repeat, and the table reports
mean(std) across repeats. Fold assignment is a pure function of
(graph ids, labels, seed) and never touches the feature matrix, so there
is no leakage by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier, HistGradientBoostingClassifier

from .data import FeatureTable, load_sources

DEFAULT_SIZE_BUCKETS = ((5, 50), (51, 100), (101, 200), (201, 400), (401, 800))
MIN_CLASS_SAMPLES = 20


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    sources: tuple[tuple[str, str], ...]
    folds: int = 10
    repeats: int = 10
    seed: int = 0
    classifier: str = "hist_gbdt"
    max_moments: int | None = None   # first q moment columns per (r, s)
    size_buckets: tuple[tuple[int, int], ...] = DEFAULT_SIZE_BUCKETS

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


@dataclass(frozen=True)
class CvResult:
    task: str
    mean: float
    std: float
    per_repeat: tuple[float, ...]
    n_samples: int
    n_features: int
    classes: tuple[str, ...]

    def table_row(self) -> str:
        """Accuracy formatted the way comparison tables print it: 97.5(0.3)."""
        return f"{100 * self.mean:.1f}({100 * self.std:.1f})"


@dataclass(frozen=True)
class SweepPoint:
    q: int
    mean: float
    std: float
    n_features: int


def make_classifier(name: str, seed: int):
    """Gradient-boosted trees with library defaults; choice is a config field."""
    if name == "hist_gbdt":
        return HistGradientBoostingClassifier(random_state=seed)
    if name == "gbdt":
        return GradientBoostingClassifier(random_state=seed)
    raise ValueError(f"unknown classifier {name!r} (use 'hist_gbdt' or 'gbdt')")


def fold_assignments(ids, labels, folds: int, seed: int) -> np.ndarray:
    """Stratified fold index per row, computed from ids and labels alone.

    Rows are ordered by id, shuffled within each class, and dealt
    round-robin so every fold sees every class.
    """
    ids = list(ids)
    labels = list(labels)
    rng = np.random.default_rng(np.random.SeedSequence([seed, len(ids)]))
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    assignment = np.empty(len(ids), dtype=int)
    by_class: dict[str, list[int]] = {}
    for i in order:
        by_class.setdefault(labels[i], []).append(i)
    for label in sorted(by_class):
        rows = np.array(by_class[label])
        rng.shuffle(rows)
        for pos, row in enumerate(rows):
            assignment[row] = pos % folds
    return assignment


def _validate(table: FeatureTable, config: ExperimentConfig) -> None:
    counts = table.class_counts()
    if len(counts) < 2:
        raise ValueError(f"need >= 2 classes, got {sorted(counts)}")
    for label, count in counts.items():
        if count < config.folds:
            raise ValueError(
                f"class {label!r} has {count} samples, fewer than {config.folds} folds"
            )
        if count < MIN_CLASS_SAMPLES:
            raise ValueError(
                f"class {label!r} has {count} samples; need >= {MIN_CLASS_SAMPLES} "
                f"for CV stability"
            )


def run_cv(config: ExperimentConfig, table: FeatureTable | None = None) -> CvResult:
    """Repeated stratified k-fold accuracy, mean(std) across repeats."""
    if table is None:
        table = load_sources(list(config.sources))
    _validate(table, config)
    columns = table.moment_column_names(config.max_moments)
    matrix = table.select(columns)
    y = np.array(table.labels)
    per_repeat = []
    for rep in range(config.repeats):
        assignment = fold_assignments(
            table.ids, table.labels, config.folds, seed=config.seed * 1000 + rep
        )
        correct = 0
        for k in range(config.folds):
            test = assignment == k
            train = ~test
            clf = make_classifier(config.classifier, seed=config.seed * 1000 + rep)
            clf.fit(matrix[train], y[train])
            correct += int((clf.predict(matrix[test]) == y[test]).sum())
        per_repeat.append(correct / len(y))
    accs = np.array(per_repeat)
    return CvResult(
        task=config.task,
        mean=float(accs.mean()),
        std=float(accs.std(ddof=1)) if len(accs) > 1 else 0.0,
        per_repeat=tuple(per_repeat),
        n_samples=len(y),
        n_features=matrix.shape[1],
        classes=tuple(sorted(set(y))),
    )


def sweep_moments(config: ExperimentConfig, q_max: int = 14) -> list[SweepPoint]:
    """Accuracy as the number of moments per (r, s) grows from 1 to q_max."""
    table = load_sources(list(config.sources))
    if q_max > len(table.moment_orders):
        raise ValueError(
            f"sweep needs features with >= {q_max} moment orders per pair, "
            f"CSV has {len(table.moment_orders)}"
        )
    points = []
    for q in range(1, q_max + 1):
        result = run_cv(replace(config, max_moments=q), table)
        points.append(
            SweepPoint(q=q, mean=result.mean, std=result.std, n_features=result.n_features)
        )
    return points


def sweep_sizes(configs: dict[str, ExperimentConfig]) -> list[tuple[str, CvResult]]:
    """Run one experiment per size bucket; caller supplies per-bucket sources."""
    return [(bucket, run_cv(cfg)) for bucket, cfg in sorted(configs.items())]


def accuracy_table_csv(results: list[CvResult]) -> str:
    lines = ["task,mean,std,n_samples,n_features,classes"]
    for r in results:
        lines.append(
            f"{r.task},{r.mean:.6f},{r.std:.6f},{r.n_samples},{r.n_features},"
            f"{'|'.join(r.classes)}"
        )
    return "\n".join(lines) + "\n"


def accuracy_table_markdown(results: list[CvResult]) -> str:
    lines = ["| task | accuracy | n | classes |", "| --- | --- | --- | --- |"]
    for r in results:
        lines.append(
            f"| {r.task} | {r.table_row()} | {r.n_samples} | {', '.join(r.classes)} |"
        )
    return "\n".join(lines) + "\n"


def sweep_curve_csv(points: list[SweepPoint]) -> str:
    lines = ["n_moments,mean,std,n_features"]
    for p in points:
        lines.append(f"{p.q},{p.mean:.6f},{p.std:.6f},{p.n_features}")
    return "\n".join(lines) + "\n"
