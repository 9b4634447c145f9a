"""Moment/structure diagnostics: degree and triad bounds on m2 and m3.

Every expectation over edges or triangles is weight-proportional: an edge
of weight k is treated as k unit edges, and a triangle is weighted by the
minimum of its three edge weights. Ground-truth moments always come from
the spectral route, never from the closed-form candidates; right-hand
sides and signed slacks of the bound set are reported without clipping.

Bound-set nomenclature used throughout reports (the library's own):

* EQ5  -- m2 >= edge_pair_mean / (2 * C(r-s, s))
* EQ8  -- m3 >= 2 * E(Delta) * triad_degree_mean / C(r-s, s)^3
* EQ9  -- m3 >= 6 * C(r-s, 2) * (|E_r| / |V|) * triad_degree_mean / C(r-s, s)^3
* THM2 -- identity candidate for m2 with two prefactor conventions
          ("half" keeps the 1/2, "full" drops it); which one (if any) is
          an identity is decided empirically by ``calibrate_thm2``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial

import numpy as np

from .hypercore import UniformLayer, all_subsets_of_order, hyperdegree
from .spectra import moments_trace
from .swalk import WeightedGraph, expand_set_quotient

__all__ = [
    "JointDegreeStats",
    "TriadStats",
    "BoundReport",
    "Thm2Calibration",
    "joint_degree_stats",
    "triangle_stats",
    "m2_report",
    "m3_report",
    "bound_report",
    "calibrate_thm2",
]

EXPECTATION_CONVENTION = "unit_edge_weight_proportional"


@dataclass(frozen=True)
class JointDegreeStats:
    """Edge-averaged inverse hyperdegree products, plus mean dyadic strength."""

    edge_pair_mean: float
    mean_strength: float
    total_weight: float
    defined: bool = True
    convention: str = EXPECTATION_CONVENTION
    graph_mode: str = "set_quotient"


@dataclass(frozen=True)
class TriadStats:
    """Triangle and hyper-triad statistics of an expanded layer."""

    triangle_count_weighted: float      # sum over triangles of min edge weight
    per_node_mean: float                # E(delta_i) over graph nodes
    triad_degree_mean: float            # E(1/(D_h D_i D_j)), min-weight averaged
    dyadic_triad_mean: float            # E(1/(d_h d_i d_j)), min-weight averaged
    hyper_triad_count: int              # triples of hyperedges, see module doc
    hyper_triad_mean: float             # E(Delta_[i]) over realizable s-sets
    n_realizable_sets: int
    has_triangles: bool
    graph_mode: str = "set_quotient"


@dataclass
class BoundReport:
    """Signed bound evaluations for one (layer, s) pair. None = not computed."""

    graph_id: str | None
    r: int
    s: int
    n_vertices: int
    n_edges: int
    n_set: int
    v_g: int
    empty_layer: bool
    convention: str = EXPECTATION_CONVENTION
    node_universe: str = "realizable"
    # m2 section
    m2: float | None = None
    rhs_eq5: float | None = None
    slack_eq5: float | None = None
    thm2_rhs_half: float | None = None
    thm2_rhs_full: float | None = None
    edge_pair_mean: float | None = None
    mean_strength: float | None = None
    # m3 section
    m3: float | None = None
    rhs_eq8: float | None = None
    slack_eq8: float | None = None
    rhs_eq9: float | None = None
    slack_eq9: float | None = None
    triangle_count_weighted: float | None = None
    hyper_triad_mean: float | None = None
    triad_degree_mean: float | None = None
    m3_identity_rhs: float | None = None
    m3_identity_ratio: float | None = None
    no_triangles: bool | None = None

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        return out


def _node_hyperdegrees(layer: UniformLayer, graph: WeightedGraph) -> np.ndarray:
    cache: dict[frozenset[int], int] = {}
    out = np.empty(graph.n_nodes)
    for i, key in enumerate(graph.node_keys):
        fs = frozenset(key)
        if fs not in cache:
            cache[fs] = hyperdegree(layer, key)
        out[i] = cache[fs]
    return out


def joint_degree_stats(layer: UniformLayer, s: int, graph: WeightedGraph) -> JointDegreeStats:
    """Average 1/(D_[i] D_[j]) over unit-edge instances of the expanded graph."""
    if graph.is_empty():
        return JointDegreeStats(
            edge_pair_mean=0.0, mean_strength=0.0, total_weight=0.0,
            defined=False, graph_mode=graph.mode,
        )
    deg = _node_hyperdegrees(layer, graph)
    num = 0.0
    total = 0.0
    for (i, j), w in graph.weights.items():
        num += w / (deg[i] * deg[j])
        total += w
    mean_strength = float(graph.strengths().mean())
    return JointDegreeStats(
        edge_pair_mean=num / total,
        mean_strength=mean_strength,
        total_weight=total,
        graph_mode=graph.mode,
    )


def _dyadic_triangles(graph: WeightedGraph):
    """Yield (i, j, k, min_weight) with i < j < k over all triangles."""
    nbr = graph.neighbor_sets()
    for (i, j), w_ij in graph.weights.items():
        # i < j by storage; close with k > j to count each triangle once
        common = nbr[i].keys() & nbr[j].keys()
        for k in common:
            if k > j:
                yield i, j, k, min(w_ij, nbr[i][k], nbr[j][k])


def _edge_overlap_partners(layer: UniformLayer, s: int):
    """edge index -> list of (other index, shared vertex set) with |shared| = s."""
    edges = [frozenset(e) for e in layer.edges]
    partners: list[list[tuple[int, frozenset]]] = [[] for _ in edges]
    seen: set[tuple[int, int]] = set()
    for a, e in enumerate(layer.edges):
        for v in e:
            for b in layer.incident_edges(v):
                if b <= a:
                    continue
                key = (a, b)
                if key in seen:
                    continue
                seen.add(key)
                inter = edges[a] & edges[b]
                if len(inter) == s:
                    partners[a].append((b, inter))
                    partners[b].append((a, inter))
    return edges, partners


def _hyper_triads(layer: UniformLayer, s: int) -> tuple[int, Counter]:
    """Count hyperedge triples whose three pairwise intersections are
    distinct, pairwise disjoint s-sets; also tally per-set membership."""
    if layer.r == 2 and s == 1:
        # a triad of order-2 edges is exactly a triangle of the layer itself
        quotient = expand_set_quotient(layer, 1)
        count = 0
        per_set: Counter = Counter()
        for i, j, k, _w in _dyadic_triangles(quotient):
            count += 1
            for node in (i, j, k):
                per_set[frozenset(quotient.node_keys[node])] += 1
        return count, per_set

    edges, partners = _edge_overlap_partners(layer, s)
    triple_count = 0
    per_set: Counter = Counter()
    for b, plist in enumerate(partners):
        for (a, i_ab), (c, i_bc) in combinations(plist, 2):
            if i_ab & i_bc:
                continue
            i_ac = edges[a] & edges[c]
            if len(i_ac) != s or (i_ac & i_ab) or (i_ac & i_bc):
                continue
            # found once per middle edge; every triad has three middles
            triple_count += 1
            per_set[i_ab] += 1
            per_set[i_bc] += 1
            per_set[i_ac] += 1
    assert triple_count % 3 == 0
    return triple_count // 3, Counter({k: v // 3 for k, v in per_set.items()})


def triangle_stats(graph: WeightedGraph, layer: UniformLayer, s: int) -> TriadStats:
    """Weighted triangle statistics of the expanded graph plus hyper-triad
    statistics of the layer itself."""
    deg = _node_hyperdegrees(layer, graph) if graph.n_nodes else np.empty(0)
    strengths = graph.strengths() if graph.n_nodes else np.empty(0)
    t_weight = 0.0
    inv_hyper = 0.0
    inv_dyadic = 0.0
    for i, j, k, w in _dyadic_triangles(graph):
        t_weight += w
        inv_hyper += w / (deg[i] * deg[j] * deg[k])
        inv_dyadic += w / (strengths[i] * strengths[j] * strengths[k])
    has_triangles = t_weight > 0
    n_triads, per_set = _hyper_triads(layer, s)
    realizable = all_subsets_of_order(layer, s)
    n_set = len(realizable)
    hyper_triad_mean = (3.0 * n_triads / n_set) if n_set else 0.0
    n_nodes = graph.n_nodes
    return TriadStats(
        triangle_count_weighted=t_weight,
        per_node_mean=(3.0 * t_weight / n_nodes) if n_nodes else 0.0,
        triad_degree_mean=(inv_hyper / t_weight) if has_triangles else 0.0,
        dyadic_triad_mean=(inv_dyadic / t_weight) if has_triangles else 0.0,
        hyper_triad_count=n_triads,
        hyper_triad_mean=hyper_triad_mean,
        n_realizable_sets=n_set,
        has_triangles=has_triangles,
        graph_mode=graph.mode,
    )


def _base_report(layer: UniformLayer, s: int, graph_id: str | None):
    r = layer.r
    if not 1 <= s <= r // 2:
        raise ValueError(f"bound reports are defined for 1 <= s <= r/2, got s={s}, r={r}")
    quotient = expand_set_quotient(layer, s)
    n_set = quotient.n_nodes
    report = BoundReport(
        graph_id=graph_id,
        r=r,
        s=s,
        n_vertices=layer.n_vertices,
        n_edges=layer.n_edges,
        n_set=n_set,
        v_g=n_set * factorial(s),
        empty_layer=layer.n_edges == 0,
    )
    return quotient, report


def m2_report(layer: UniformLayer, s: int, graph_id: str | None = None) -> BoundReport:
    """EQ5 and both THM2 identity candidates; nothing is asserted here."""
    quotient, report = _base_report(layer, s, graph_id)
    if report.empty_layer:
        return report
    r = layer.r
    report.m2 = moments_trace(quotient, 2)[2]
    stats = joint_degree_stats(layer, s, quotient)
    report.edge_pair_mean = stats.edge_pair_mean
    report.mean_strength = stats.mean_strength
    report.rhs_eq5 = stats.edge_pair_mean / (2.0 * comb(r - s, s))
    report.slack_eq5 = report.m2 - report.rhs_eq5
    half = (
        comb(r, s) * layer.n_edges
        / (2.0 * comb(r - s, s) * report.v_g)
        * stats.edge_pair_mean
    )
    report.thm2_rhs_half = half
    report.thm2_rhs_full = 2.0 * half
    return report


def m3_report(layer: UniformLayer, s: int, graph_id: str | None = None) -> BoundReport:
    """EQ8/EQ9 bounds plus the weighted triad identity as a diagnostic ratio."""
    quotient, report = _base_report(layer, s, graph_id)
    if report.empty_layer:
        return report
    r = layer.r
    report.m3 = moments_trace(quotient, 3)[3]
    tri = triangle_stats(quotient, layer, s)
    report.triangle_count_weighted = tri.triangle_count_weighted
    report.hyper_triad_mean = tri.hyper_triad_mean
    report.triad_degree_mean = tri.triad_degree_mean
    report.no_triangles = not tri.has_triangles
    c3 = comb(r - s, s) ** 3
    report.rhs_eq8 = 2.0 * tri.hyper_triad_mean * tri.triad_degree_mean / c3
    report.slack_eq8 = report.m3 - report.rhs_eq8
    report.rhs_eq9 = (
        6.0 * comb(r - s, 2) * layer.n_edges / layer.n_vertices
        * tri.triad_degree_mean / c3
    )
    report.slack_eq9 = report.m3 - report.rhs_eq9
    # weighted identity diagnostic, converted to ordered-graph scale
    identity = 2.0 * tri.per_node_mean * tri.dyadic_triad_mean / factorial(s)
    report.m3_identity_rhs = identity
    report.m3_identity_ratio = (report.m3 / identity) if identity > 0 else None
    return report


def bound_report(layer: UniformLayer, s: int, graph_id: str | None = None) -> BoundReport:
    """Both sections in one pass (single expansion, single moment run)."""
    quotient, report = _base_report(layer, s, graph_id)
    if report.empty_layer:
        return report
    r = layer.r
    moments = moments_trace(quotient, 3)
    report.m2, report.m3 = moments[2], moments[3]
    stats = joint_degree_stats(layer, s, quotient)
    report.edge_pair_mean = stats.edge_pair_mean
    report.mean_strength = stats.mean_strength
    report.rhs_eq5 = stats.edge_pair_mean / (2.0 * comb(r - s, s))
    report.slack_eq5 = report.m2 - report.rhs_eq5
    half = (
        comb(r, s) * layer.n_edges
        / (2.0 * comb(r - s, s) * report.v_g)
        * stats.edge_pair_mean
    )
    report.thm2_rhs_half = half
    report.thm2_rhs_full = 2.0 * half
    tri = triangle_stats(quotient, layer, s)
    report.triangle_count_weighted = tri.triangle_count_weighted
    report.hyper_triad_mean = tri.hyper_triad_mean
    report.triad_degree_mean = tri.triad_degree_mean
    report.no_triangles = not tri.has_triangles
    c3 = comb(r - s, s) ** 3
    report.rhs_eq8 = 2.0 * tri.hyper_triad_mean * tri.triad_degree_mean / c3
    report.slack_eq8 = report.m3 - report.rhs_eq8
    report.rhs_eq9 = (
        6.0 * comb(r - s, 2) * layer.n_edges / layer.n_vertices
        * tri.triad_degree_mean / c3
    )
    report.slack_eq9 = report.m3 - report.rhs_eq9
    identity = 2.0 * tri.per_node_mean * tri.dyadic_triad_mean / factorial(s)
    report.m3_identity_rhs = identity
    report.m3_identity_ratio = (report.m3 / identity) if identity > 0 else None
    return report


# ---------------------------------------------------------------------------
# THM2 prefactor calibration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Thm2Calibration:
    """Outcome of the empirical identity check over random layers.

    ``winner`` is "half" or "full" when exactly one convention keeps the
    ratio m2/rhs inside ``band`` on every instance, else "bound_only"
    (the candidates are then treated as lower bounds, not identities).
    """

    winner: str
    n_instances: int
    seed: int
    band: tuple[float, float]
    half_in_band: int
    full_in_band: int
    ratio_range_half: tuple[float, float]
    ratio_range_full: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "winner": self.winner,
            "n_instances": self.n_instances,
            "seed": self.seed,
            "band": list(self.band),
            "half_in_band": self.half_in_band,
            "full_in_band": self.full_in_band,
            "ratio_range_half": list(self.ratio_range_half),
            "ratio_range_full": list(self.ratio_range_full),
        }


def _random_layer(rng: np.random.Generator, n: int, r: int, n_edges: int) -> UniformLayer:
    pool = list(combinations(range(n), r))
    n_edges = min(n_edges, len(pool))
    idx = rng.choice(len(pool), size=n_edges, replace=False)
    edges = tuple(sorted(pool[i] for i in idx))
    return UniformLayer(r=r, n_vertices=n, edges=edges)


def calibrate_thm2(
    n_instances: int = 100,
    seed: int = 20240810,
    band: tuple[float, float] = (0.99, 1.01),
) -> Thm2Calibration:
    """Decide which THM2 prefactor convention (if any) is an identity.

    Runs seeded random layers across r in 2..5 and 1 <= s <= r/2, computes
    the ratio m2/rhs for both conventions, and reports the convention whose
    ratios all fall inside ``band``. Deterministic given the seed.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    ratios_half: list[float] = []
    ratios_full: list[float] = []
    produced = 0
    while produced < n_instances:
        r = int(rng.integers(2, 6))
        s = int(rng.integers(1, r // 2 + 1))
        n = int(rng.integers(r + 2, 13))
        m = int(rng.integers(2, max(3, 2 * n)))
        layer = _random_layer(rng, n, r, m)
        report = m2_report(layer, s)
        if report.empty_layer or not report.thm2_rhs_full:
            continue
        produced += 1
        ratios_half.append(report.m2 / report.thm2_rhs_half)
        ratios_full.append(report.m2 / report.thm2_rhs_full)
    lo, hi = band
    half_ok = sum(1 for x in ratios_half if lo <= x <= hi)
    full_ok = sum(1 for x in ratios_full if lo <= x <= hi)
    if half_ok == n_instances and full_ok < n_instances:
        winner = "half"
    elif full_ok == n_instances and half_ok < n_instances:
        winner = "full"
    else:
        winner = "bound_only"
    return Thm2Calibration(
        winner=winner,
        n_instances=n_instances,
        seed=seed,
        band=band,
        half_in_band=half_ok,
        full_in_band=full_ok,
        ratio_range_half=(min(ratios_half), max(ratios_half)),
        ratio_range_full=(min(ratios_full), max(ratios_full)),
    )
