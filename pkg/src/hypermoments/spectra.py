"""Transition-matrix spectra and spectral moments of weighted graphs.

Three independent routes compute the moments m_l (the mean l-th power of
the transition eigenvalues, equivalently the expected l-step return
probability from a uniformly random node):

* full symmetric eigendecomposition of D^(-1/2) W D^(-1/2),
* diagonal sums of successive sparse transition powers, and
* Monte-Carlo walk simulation.

Zero-strength nodes are removed before building the transition matrix and
excluded from n; their count is reported. Graphs carrying set-quotient
provenance have their moments rescaled by ``moment_scale``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import InvariantViolation
from .swalk import WeightedGraph

__all__ = [
    "TransitionSpectrum",
    "MomentVector",
    "DENSE_EIG_LIMIT",
    "moments_eig",
    "moments_trace",
    "mc_return",
]

DENSE_EIG_LIMIT = 4000
SPECTRUM_TOL = 1e-9


@dataclass(frozen=True)
class TransitionSpectrum:
    """Eigenvalues of the random-walk transition matrix, descending."""

    eigenvalues: np.ndarray
    n: int
    dropped_nodes: int = 0

    def validate(self) -> None:
        if self.n == 0:
            return
        lam = self.eigenvalues
        if abs(lam[0] - 1.0) > SPECTRUM_TOL:
            raise InvariantViolation(f"top eigenvalue {lam[0]} != 1")
        if np.any(np.abs(lam) > 1.0 + SPECTRUM_TOL):
            raise InvariantViolation("eigenvalue outside [-1, 1]")

    def laplacian_eigenvalues(self) -> np.ndarray:
        """Normalized-Laplacian spectrum (1 - lambda, ascending in [0, 2])."""
        return 1.0 - self.eigenvalues


@dataclass(frozen=True)
class MomentVector:
    """Moments m_l for l = l_min..l_max (canonical ordered-graph values)."""

    l_min: int
    l_max: int
    values: tuple[float, ...]
    absent: bool = False

    def __getitem__(self, l: int) -> float:
        if not self.l_min <= l <= self.l_max:
            raise KeyError(f"moment order {l} outside [{self.l_min}, {self.l_max}]")
        return self.values[l - self.l_min]

    def as_dict(self) -> dict[int, float]:
        return {l: self[l] for l in range(self.l_min, self.l_max + 1)}


def _walkable(graph: WeightedGraph) -> tuple[sp.csr_matrix, np.ndarray, int]:
    """Adjacency restricted to positive-strength nodes; returns dropped count."""
    adj = graph.adjacency()
    d = np.asarray(adj.sum(axis=1)).ravel()
    keep = np.flatnonzero(d > 0)
    dropped = graph.n_nodes - keep.size
    if dropped:
        adj = adj[keep][:, keep]
        d = d[keep]
    return adj.tocsr(), d, dropped


def _empty_moments(l_max: int, dropped: int):
    spectrum = TransitionSpectrum(eigenvalues=np.empty(0), n=0, dropped_nodes=dropped)
    moments = MomentVector(
        l_min=1, l_max=l_max, values=tuple(0.0 for _ in range(l_max)), absent=True
    )
    return spectrum, moments


def moments_eig(graph: WeightedGraph, l_max: int) -> tuple[TransitionSpectrum, MomentVector]:
    """Spectrum plus moments via full symmetric eigendecomposition."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    adj, d, dropped = _walkable(graph)
    n = d.size
    if n == 0:
        return _empty_moments(l_max, dropped)
    if n > DENSE_EIG_LIMIT:
        raise ValueError(
            f"dense eigendecomposition capped at {DENSE_EIG_LIMIT} nodes "
            f"(got {n}); use moments_trace"
        )
    inv_sqrt = 1.0 / np.sqrt(d)
    sym = adj.toarray() * inv_sqrt[:, None] * inv_sqrt[None, :]
    lam = scipy.linalg.eigvalsh(sym)[::-1]
    spectrum = TransitionSpectrum(eigenvalues=lam, n=n, dropped_nodes=dropped)
    lam_ext = lam.astype(np.longdouble)
    values = []
    powered = lam_ext.copy()
    for _ in range(1, l_max + 1):
        values.append(float(powered.sum() / n * graph.moment_scale))
        powered = powered * lam_ext
    return spectrum, MomentVector(l_min=1, l_max=l_max, values=tuple(values))


def moments_trace(graph: WeightedGraph, l_max: int) -> MomentVector:
    """Moments via diagonal sums of successive sparse transition powers."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    adj, d, dropped = _walkable(graph)
    n = d.size
    if n == 0:
        return _empty_moments(l_max, dropped)[1]
    trans = sp.diags(1.0 / d) @ adj
    trans = trans.tocsr()
    values = []
    power = trans
    for l in range(1, l_max + 1):
        if l > 1:
            power = power @ trans
        diag = power.diagonal().astype(np.longdouble)
        values.append(float(diag.sum() / n * graph.moment_scale))
    return MomentVector(l_min=1, l_max=l_max, values=tuple(values))


def mc_return(graph: WeightedGraph, l: int, n_walks: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of the l-step return probability, with its
    binomial standard error. Deterministic given the seed.

    Estimates the raw return probability of the given graph; no
    ``moment_scale`` is applied (the walker sees the graph as-is).
    """
    if l < 1:
        raise ValueError("walk length must be >= 1")
    if n_walks < 1:
        raise ValueError("n_walks must be >= 1")
    adj, d, _dropped = _walkable(graph)
    n = d.size
    if n == 0:
        raise ValueError("cannot walk an empty graph")
    indptr, indices, data = adj.indptr, adj.indices, adj.data
    cumprob: list[np.ndarray] = []
    neighbors: list[np.ndarray] = []
    for u in range(n):
        lo, hi = indptr[u], indptr[u + 1]
        w = data[lo:hi]
        cumprob.append(np.cumsum(w / w.sum()))
        neighbors.append(indices[lo:hi])
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    start = rng.integers(n, size=n_walks)
    current = start.copy()
    for _ in range(l):
        # group walks by node so each group draws in one vector op
        nxt = np.empty_like(current)
        for u in np.unique(current):
            mask = current == u
            draws = rng.random(int(mask.sum()))
            hops = np.searchsorted(cumprob[u], draws, side="right")
            hops = np.minimum(hops, len(neighbors[u]) - 1)
            nxt[mask] = neighbors[u][hops]
        current = nxt
    returned = current == start
    estimate = float(returned.mean())
    stderr = float(np.sqrt(estimate * (1.0 - estimate) / n_walks))
    return estimate, stderr
