"""Higher-order network core: parsing, dedup, uniform layers, degree queries.

Vertices are relabeled to dense 0-based ids at ingest (first-appearance
order); the original labels are kept in a side map for reporting. Edges are
stored as sorted tuples of distinct vertex ids and deduplicated as sets,
so multiplicities and timestamps present in raw corpora are discarded.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import FormatError, ParseError

__all__ = [
    "Hypergraph",
    "UniformLayer",
    "LayerSplit",
    "IngestReport",
    "parse_hyperedges",
    "parse_benson",
    "split_layers",
    "hyperdegree",
    "canonical_text",
]


@dataclass(frozen=True)
class Hypergraph:
    """Deduplicated higher-order network over dense vertex ids [0, n).

    ``edges`` holds one sorted tuple per unique hyperedge (any order >= 1).
    ``labels[i]`` is the original label of dense vertex i. Instances are
    immutable after construction and safe to share across workers.
    """

    n_vertices: int
    edges: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    _incidence: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def __post_init__(self):
        if not self._incidence:
            inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
            for idx, e in enumerate(self.edges):
                for v in e:
                    inc[v].append(idx)
            object.__setattr__(
                self, "_incidence", tuple(tuple(x) for x in inc)
            )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incident_edges(self, v: int) -> tuple[int, ...]:
        """Indices of edges containing vertex v."""
        return self._incidence[v]

    def max_order(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def mean_order(self) -> float:
        if not self.edges:
            return 0.0
        return sum(len(e) for e in self.edges) / len(self.edges)

    def edge_sets(self) -> set[frozenset[int]]:
        return {frozenset(e) for e in self.edges}

    def labeled_edges(self) -> set[frozenset[int]]:
        """Edges expressed over original labels (relabeling-independent)."""
        return {frozenset(self.labels[v] for v in e) for e in self.edges}


@dataclass(frozen=True)
class UniformLayer:
    """All order-r edges of a parent hypergraph, sharing its vertex space."""

    r: int
    n_vertices: int
    edges: tuple[tuple[int, ...], ...]
    _incidence: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def __post_init__(self):
        for e in self.edges:
            if len(e) != self.r:
                raise ValueError(f"edge {e} does not have order {self.r}")
        if not self._incidence:
            inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
            for idx, e in enumerate(self.edges):
                for v in e:
                    inc[v].append(idx)
            object.__setattr__(
                self, "_incidence", tuple(tuple(x) for x in inc)
            )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._incidence[v]


@dataclass(frozen=True)
class LayerSplit:
    """Result of splitting a hypergraph into uniform layers r = 2..r_max."""

    layers: tuple[UniformLayer, ...]
    excluded_low: int    # edges of order 1
    excluded_high: int   # edges of order > r_max

    def layer(self, r: int) -> UniformLayer:
        for lay in self.layers:
            if lay.r == r:
                return lay
        raise KeyError(f"no layer of order {r}")

    @property
    def excluded(self) -> int:
        return self.excluded_low + self.excluded_high


@dataclass(frozen=True)
class IngestReport:
    """Summary statistics of an ingested corpus."""

    n_vertices: int
    n_unique_edges: int
    max_order: int
    mean_order: float
    n_raw_edges: int

    def as_dict(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "unique_edges": self.n_unique_edges,
            "max_order": self.max_order,
            "mean_order": round(self.mean_order, 4),
            "raw_edges": self.n_raw_edges,
        }


def _build(raw_edges: Iterable[Sequence[int]]) -> Hypergraph:
    """Relabel to dense ids in first-appearance order and dedup edges as sets."""
    relabel: dict[int, int] = {}
    seen: set[frozenset[int]] = set()
    edges: list[tuple[int, ...]] = []
    for verts in raw_edges:
        ids = []
        for v in verts:
            if v not in relabel:
                relabel[v] = len(relabel)
            ids.append(relabel[v])
        key = frozenset(ids)
        if key in seen:
            continue
        seen.add(key)
        edges.append(tuple(sorted(ids)))
    labels = tuple(sorted(relabel, key=relabel.get))
    return Hypergraph(n_vertices=len(relabel), edges=tuple(edges), labels=labels)


def parse_hyperedges(stream) -> Hypergraph:
    """Parse hyperedge-list text: one edge per line, '#' starts a comment.

    Tokens are integer vertex labels separated by whitespace or commas.
    Repeated vertices within a line are rejected; duplicate edges (as sets)
    are collapsed.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    raw: list[list[int]] = []
    for lineno, line in enumerate(stream, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.replace(",", " ").split()
        verts = []
        for tok in tokens:
            try:
                verts.append(int(tok))
            except ValueError:
                raise ParseError(f"malformed vertex token {tok!r}", lineno) from None
        if len(set(verts)) != len(verts):
            raise ParseError(f"repeated vertex in edge {verts}", lineno)
        raw.append(verts)
    return _build(raw)


def _read_ints(stream, name: str) -> list[int]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    out = []
    for lineno, line in enumerate(stream, start=1):
        for tok in line.split():
            try:
                out.append(int(tok))
            except ValueError:
                raise FormatError(
                    f"{name}: malformed integer {tok!r} on line {lineno}"
                ) from None
    return out


def parse_benson(nverts_stream, simplices_stream, times_stream=None):
    """Parse the three-file simplex format: sizes, concatenated vertices, times.

    ``nverts`` gives one size k_i per simplex; ``simplices`` the concatenated
    vertex labels (total length sum k_i). The optional times file is accepted
    and ignored, as are multiplicities: edges are deduplicated as sets.

    Returns (Hypergraph, IngestReport).
    """
    sizes = _read_ints(nverts_stream, "nverts")
    verts = _read_ints(simplices_stream, "simplices")
    if times_stream is not None:
        _read_ints(times_stream, "times")  # validated as integers, then dropped
    for i, k in enumerate(sizes):
        if k <= 0:
            raise FormatError(f"nverts: simplex {i} has non-positive size {k}")
    total = sum(sizes)
    if total != len(verts):
        raise FormatError(
            f"length mismatch: sum(nverts) = {total} but simplices has {len(verts)} entries"
        )
    raw: list[list[int]] = []
    pos = 0
    for i, k in enumerate(sizes):
        chunk = verts[pos : pos + k]
        pos += k
        if len(set(chunk)) != len(chunk):
            # some corpora carry degenerate simplices; treat the vertex set
            chunk = sorted(set(chunk))
        raw.append(list(chunk))
    hg = _build(raw)
    report = IngestReport(
        n_vertices=hg.n_vertices,
        n_unique_edges=hg.n_edges,
        max_order=hg.max_order(),
        mean_order=hg.mean_order(),
        n_raw_edges=len(sizes),
    )
    return hg, report


def split_layers(hg: Hypergraph, r_max: int) -> LayerSplit:
    """Group edges by order into uniform layers r = 2..r_max.

    Order-1 edges and edges above r_max are excluded and counted; empty
    layers are valid.
    """
    if r_max < 2:
        raise ValueError(f"r_max must be >= 2, got {r_max}")
    by_order: dict[int, list[tuple[int, ...]]] = {r: [] for r in range(2, r_max + 1)}
    low = high = 0
    for e in hg.edges:
        r = len(e)
        if r < 2:
            low += 1
        elif r > r_max:
            high += 1
        else:
            by_order[r].append(e)
    layers = tuple(
        UniformLayer(r=r, n_vertices=hg.n_vertices, edges=tuple(by_order[r]))
        for r in range(2, r_max + 1)
    )
    return LayerSplit(layers=layers, excluded_low=low, excluded_high=high)


def hyperdegree(layer: UniformLayer, node_set: Iterable[int]) -> int:
    """Number of layer edges containing all vertices of ``node_set``."""
    nodes = sorted(set(node_set))
    if not nodes:
        raise ValueError("node_set must be nonempty")
    if len(nodes) > layer.r:
        raise ValueError(
            f"node_set of size {len(nodes)} cannot sit inside order-{layer.r} edges"
        )
    # intersect incidence lists, starting from the rarest vertex
    lists = sorted((layer.incident_edges(v) for v in nodes), key=len)
    candidates = set(lists[0])
    for lst in lists[1:]:
        candidates.intersection_update(lst)
        if not candidates:
            return 0
    return len(candidates)


def canonical_text(hg: Hypergraph) -> str:
    """Canonical hyperedge-list serialization over original labels.

    Vertices sorted within each line, lines sorted as integer sequences;
    byte-exact round trip through parse_hyperedges. Isolated vertices are
    not representable in this format.
    """
    lines = sorted(tuple(sorted(edge)) for edge in hg.labeled_edges())
    return "".join(" ".join(str(v) for v in line) + "\n" for line in lines)


def all_subsets_of_order(layer: UniformLayer, s: int) -> set[tuple[int, ...]]:
    """All s-subsets (as sorted tuples) contained in at least one layer edge."""
    out: set[tuple[int, ...]] = set()
    for e in layer.edges:
        out.update(combinations(e, s))
    return out
