"""Loading and validating moment-feature CSVs.

The expected format is the one the feature extractor emits:
``graph_id,label,r{r}s{s}m{l}...,has_r{r}s{s}...``. All sources of an
experiment must share one schema (identical header); each source carries
its class label, which overrides whatever sits in the CSV's label column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

MOMENT_RE = re.compile(r"^r(\d+)s(\d+)m(\d+)$")
FLAG_RE = re.compile(r"^has_r(\d+)s(\d+)$")


class SchemaMismatch(ValueError):
    """Feature CSVs do not share one column layout."""


@dataclass(frozen=True)
class FeatureTable:
    """Stacked feature matrix with per-row ids and class labels."""

    ids: tuple[str, ...]
    labels: tuple[str, ...]
    columns: tuple[str, ...]           # feature columns, schema order
    matrix: np.ndarray                 # shape (n_rows, n_columns)
    moment_orders: tuple[int, ...]     # distinct l values, ascending
    pair_keys: tuple[tuple[int, int], ...] = field(default=())

    @property
    def n_rows(self) -> int:
        return len(self.ids)

    def class_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for label in self.labels:
            out[label] = out.get(label, 0) + 1
        return out

    def moment_column_names(self, max_moments: int | None = None) -> list[str]:
        """Moment columns, optionally truncated to the first q orders per
        (r, s) pair; flag columns always ride along."""
        if max_moments is None:
            keep_orders = set(self.moment_orders)
        else:
            if max_moments > len(self.moment_orders):
                raise ValueError(
                    f"asked for {max_moments} moments per pair but the CSV "
                    f"carries only {len(self.moment_orders)}"
                )
            keep_orders = set(self.moment_orders[:max_moments])
        cols = []
        for name in self.columns:
            m = MOMENT_RE.match(name)
            if m and int(m.group(3)) in keep_orders:
                cols.append(name)
            elif FLAG_RE.match(name):
                cols.append(name)
        return cols

    def select(self, column_names: list[str]) -> np.ndarray:
        index = {name: i for i, name in enumerate(self.columns)}
        return self.matrix[:, [index[c] for c in column_names]]


def _parse_header(columns: list[str]) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    orders: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for name in columns:
        m = MOMENT_RE.match(name)
        if m:
            orders.add(int(m.group(3)))
        f = FLAG_RE.match(name)
        if f:
            pairs.append((int(f.group(1)), int(f.group(2))))
    if not orders:
        raise SchemaMismatch("no moment columns (r{r}s{s}m{l}) in header")
    return tuple(sorted(orders)), tuple(pairs)


def load_sources(sources: list[tuple[str, str]]) -> FeatureTable:
    """Stack feature CSVs, one class label per source.

    Row ids are prefixed with the source label so samples from different
    corpora cannot collide.
    """
    if not sources:
        raise ValueError("no feature sources given")
    frames = []
    header: list[str] | None = None
    for path, label in sources:
        df = pd.read_csv(path, dtype={"graph_id": str, "label": str})
        cols = list(df.columns)
        if cols[:2] != ["graph_id", "label"]:
            raise SchemaMismatch(f"{path}: expected graph_id,label leading columns")
        if header is None:
            header = cols
        elif cols != header:
            raise SchemaMismatch(
                f"{path}: column layout differs from {sources[0][0]}"
            )
        df = df.assign(label=label, graph_id=[f"{label}/{g}" for g in df["graph_id"]])
        frames.append(df)
    stacked = pd.concat(frames, ignore_index=True)
    feature_cols = [c for c in header if c not in ("graph_id", "label")]
    orders, pairs = _parse_header(feature_cols)
    return FeatureTable(
        ids=tuple(stacked["graph_id"]),
        labels=tuple(stacked["label"]),
        columns=tuple(feature_cols),
        matrix=stacked[feature_cols].to_numpy(dtype=float),
        moment_orders=orders,
        pair_keys=pairs,
    )
