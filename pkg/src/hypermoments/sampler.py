"""Random-walk node sampling over hyperedges and induced sub-hypergraphs.

The walk starts at a uniformly random node, repeatedly picks a uniformly
random incident edge and then a uniformly random *other* node on it.
Unique visited nodes accumulate toward the target size; dead ends (and an
optional restart probability) jump to a uniformly random node. Everything
is deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedInputError
from .hypercore import Hypergraph

__all__ = ["SampleSpec", "SampleResult", "rw_sample", "induced_subgraph", "derive_seed"]


@dataclass(frozen=True)
class SampleSpec:
    target_size: int
    seed: int
    restart_probability: float = 0.0
    max_steps: int | None = None  # defaults to 100 * target_size

    def __post_init__(self):
        if self.target_size < 1:
            raise ValueError("target_size must be >= 1")
        if not 0.0 <= self.restart_probability < 1.0:
            raise ValueError("restart_probability must be in [0, 1)")
        steps = self.max_steps if self.max_steps is not None else 100 * self.target_size
        if steps < self.target_size:
            raise ValueError("max_steps must be >= target_size")

    @property
    def step_cap(self) -> int:
        return self.max_steps if self.max_steps is not None else 100 * self.target_size


@dataclass(frozen=True)
class SampleResult:
    nodes: frozenset[int]
    complete: bool   # False when max_steps ran out first
    steps: int


def derive_seed(base_seed: int, index: int) -> np.random.SeedSequence:
    """Deterministic per-sample seed, independent of scheduling."""
    return np.random.SeedSequence([int(base_seed), int(index)])


def rw_sample(hg: Hypergraph, spec: SampleSpec) -> SampleResult:
    """Collect ``spec.target_size`` distinct nodes by random walk over hyperedges."""
    if hg.n_edges == 0:
        raise UnsupportedInputError("cannot random-walk an edgeless hypergraph")
    if spec.target_size > hg.n_vertices:
        raise ValueError(
            f"target_size {spec.target_size} exceeds vertex count {hg.n_vertices}"
        )
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    n = hg.n_vertices
    current = int(rng.integers(n))
    visited: set[int] = {current}
    steps = 0
    cap = spec.step_cap
    while len(visited) < spec.target_size and steps < cap:
        steps += 1
        incident = hg.incident_edges(current)
        restart = not incident or (
            spec.restart_probability > 0.0 and rng.random() < spec.restart_probability
        )
        if restart:
            current = int(rng.integers(n))
        else:
            edge = hg.edges[incident[int(rng.integers(len(incident)))]]
            others = [v for v in edge if v != current]
            if others:
                current = others[int(rng.integers(len(others)))]
            else:  # singleton edge: dead end, jump to a random node
                current = int(rng.integers(n))
        visited.add(current)
    return SampleResult(
        nodes=frozenset(visited),
        complete=len(visited) >= spec.target_size,
        steps=steps,
    )


def induced_subgraph(hg: Hypergraph, nodes) -> tuple[Hypergraph, tuple[int, ...]]:
    """Sub-hypergraph on ``nodes``: keeps exactly the edges fully inside the set.

    Vertices are relabeled densely (sorted parent-id order). Returns the
    subgraph and the relabel map, ``parent_of[new_id] -> parent_id``. The
    result may be edgeless; callers must handle that.
    """
    node_list = sorted(set(nodes))
    for v in node_list:
        if not 0 <= v < hg.n_vertices:
            raise ValueError(f"node {v} outside vertex range [0, {hg.n_vertices})")
    node_set = set(node_list)
    to_new = {v: i for i, v in enumerate(node_list)}
    kept: list[tuple[int, ...]] = []
    # scan only edges incident to sampled nodes
    seen_edges: set[int] = set()
    for v in node_list:
        for idx in hg.incident_edges(v):
            if idx in seen_edges:
                continue
            seen_edges.add(idx)
            e = hg.edges[idx]
            if all(u in node_set for u in e):
                kept.append(tuple(sorted(to_new[u] for u in e)))
    kept.sort()
    sub = Hypergraph(
        n_vertices=len(node_list),
        edges=tuple(kept),
        labels=tuple(hg.labels[v] for v in node_list),
    )
    return sub, tuple(node_list)
