"""Fixed-length moment feature vectors, dyadic downgrade, and CSV export.

The schema enumerates (r, s, l) keys with names ``r{r}s{s}m{l}``, ordered
by r, then s (1..r-1), then l. Absent layers contribute zeros, and a flag
column ``has_r{r}s{s}`` per pair makes the missingness explicit in the CSV
so downstream classifiers can see it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .hypercore import Hypergraph, split_layers
from .spectra import moments_trace
from .swalk import ExpansionMode, expand

__all__ = [
    "FeatureSchema",
    "FeatureVector",
    "extract_features",
    "extract_features_many",
    "downgrade",
    "write_features",
]

MODE_POLICIES = ("auto", "ordered", "set_quotient")


@dataclass(frozen=True)
class FeatureSchema:
    r_max: int = 5
    moment_orders: tuple[int, ...] = (2, 3, 4)

    def __post_init__(self):
        if self.r_max < 2:
            raise ValueError("r_max must be >= 2")
        if not self.moment_orders or any(l < 1 for l in self.moment_orders):
            raise ValueError("moment orders must be positive")
        ordered = tuple(sorted(self.moment_orders))
        object.__setattr__(self, "moment_orders", ordered)

    def pairs(self) -> list[tuple[int, int]]:
        return [(r, s) for r in range(2, self.r_max + 1) for s in range(1, r)]

    def keys(self) -> list[tuple[int, int, int]]:
        return [(r, s, l) for r, s in self.pairs() for l in self.moment_orders]

    def names(self) -> list[str]:
        return [f"r{r}s{s}m{l}" for r, s, l in self.keys()]

    def flag_names(self) -> list[str]:
        return [f"has_r{r}s{s}" for r, s in self.pairs()]

    @property
    def dimension(self) -> int:
        return len(self.pairs()) * len(self.moment_orders)


@dataclass(frozen=True)
class FeatureVector:
    graph_id: str
    label: str | None
    schema: FeatureSchema
    values: tuple[float, ...]
    present: tuple[bool, ...]  # one flag per (r, s) pair, schema order

    def __post_init__(self):
        if len(self.values) != self.schema.dimension:
            raise ValueError("value count does not match schema dimension")
        if len(self.present) != len(self.schema.pairs()):
            raise ValueError("flag count does not match schema pairs")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.schema.names(), self.values))


def _pair_mode(r: int, s: int, policy: str) -> ExpansionMode:
    if policy == "ordered":
        return ExpansionMode.ORDERED
    # auto and set_quotient: quotient wherever valid, ordered otherwise
    if 2 * s <= r:
        return ExpansionMode.SET_QUOTIENT
    return ExpansionMode.ORDERED


def extract_features(
    hg: Hypergraph,
    schema: FeatureSchema | None = None,
    graph_id: str = "",
    label: str | None = None,
    mode: str = "auto",
) -> FeatureVector:
    """Moment features for one hypergraph across all (r, s, l) schema keys."""
    if schema is None:
        schema = FeatureSchema()
    if mode not in MODE_POLICIES:
        raise ValueError(f"mode must be one of {MODE_POLICIES}")
    split = split_layers(hg, schema.r_max)
    l_top = max(schema.moment_orders)
    values: list[float] = []
    present: list[bool] = []
    for r, s in schema.pairs():
        layer = split.layer(r)
        if layer.n_edges == 0:
            present.append(False)
            values.extend(0.0 for _ in schema.moment_orders)
            continue
        graph = expand(layer, s, _pair_mode(r, s, mode))
        moments = moments_trace(graph, l_top)
        if moments.absent:
            present.append(False)
            values.extend(0.0 for _ in schema.moment_orders)
            continue
        present.append(True)
        values.extend(moments[l] for l in schema.moment_orders)
    return FeatureVector(
        graph_id=graph_id,
        label=label,
        schema=schema,
        values=tuple(values),
        present=tuple(present),
    )


def _extract_one(args) -> FeatureVector:
    graph_id, hg, label, schema, mode = args
    return extract_features(hg, schema, graph_id=graph_id, label=label, mode=mode)


def extract_features_many(
    items: list[tuple[str, Hypergraph, str | None]],
    schema: FeatureSchema | None = None,
    mode: str = "auto",
    workers: int = 1,
) -> list[FeatureVector]:
    """Feature vectors for many graphs; output sorted by graph id regardless
    of worker scheduling."""
    if schema is None:
        schema = FeatureSchema()
    tasks = [(gid, hg, label, schema, mode) for gid, hg, label in items]
    if workers <= 1 or len(tasks) <= 1:
        results = [_extract_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_extract_one, tasks, chunksize=8))
    return sorted(results, key=lambda fv: fv.graph_id)


def downgrade(hg: Hypergraph) -> tuple[tuple[int, int], ...]:
    """All 2-subsets of all hyperedges, deduplicated, over the same vertices."""
    pairs: set[tuple[int, int]] = set()
    for e in hg.edges:
        pairs.update(combinations(e, 2))
    return tuple(sorted(pairs))


def write_features(features: list[FeatureVector], path) -> None:
    """Deterministic CSV export: header, then one row per graph sorted by id.

    Columns: graph_id, label, schema names, then has_r{r}s{s} flags.
    Values use 12 significant digits; identical inputs give identical bytes.
    """
    if not features:
        raise ValueError("write_features needs at least one feature vector")
    schema = features[0].schema
    for fv in features[1:]:
        if fv.schema != schema:
            raise ValueError("mixed feature schemas cannot share one CSV")
    header = ["graph_id", "label"] + schema.names() + schema.flag_names()
    lines = [",".join(header)]
    for fv in sorted(features, key=lambda f: f.graph_id):
        row = [fv.graph_id, fv.label if fv.label is not None else ""]
        row.extend(format(v, ".12g") for v in fv.values)
        row.extend("1" if p else "0" for p in fv.present)
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(text)
