"""Exact Ollivier-Ricci edge curvature with lazy random-walk measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DisconnectedGraph, InfeasibleTransport, IsolatedNode, ValidationError
from .graph import is_connected
from .parallel import ordered_map

DEFAULT_ALPHA = 0.5
MAX_PIVOTS = 100_000


@dataclass(frozen=True)
class DiscreteDistribution:
    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        mass = np.asarray(self.mass, dtype=np.float64)
        if support.shape != mass.shape or support.ndim != 1:
            raise ValidationError("support and mass must be matching 1-d arrays")
        if len(np.unique(support)) != len(support):
            raise ValidationError("support ids must be unique")
        if np.any(mass < 0) or abs(mass.sum() - 1.0) > 1e-12:
            raise ValidationError("masses must be non-negative and sum to 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)

    def as_dict(self):
        return dict(zip(self.support.tolist(), self.mass.tolist()))


@dataclass(frozen=True)
class OrCurvature:
    kappa: np.ndarray
    w1: np.ndarray
    distance: np.ndarray
    alpha: float
    metric: str

    def to_dict(self, g):
        return {
            "alpha": self.alpha,
            "metric": self.metric,
            "edges": [
                {"u": int(a), "v": int(b), "w": float(c), "distance": float(d), "w1": float(t), "kappa": float(k)}
                for a, b, c, d, t, k in zip(g.u, g.v, g.w, self.distance, self.w1, self.kappa)
            ],
        }


def _check_alpha(alpha):
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")


def neighbor_distribution(g, x, alpha=DEFAULT_ALPHA):
    """Lazy walk measure: ``alpha`` stays at ``x``, the rest spreads over
    neighbors in proportion to edge weight."""
    _check_alpha(alpha)
    nbrs, wts = g.neighbors(x)
    if len(nbrs) == 0:
        raise IsolatedNode(f"node {x} has no neighbors")
    share = (1.0 - alpha) * wts / wts.sum()
    if alpha > 0.0:
        support = np.concatenate([[x], nbrs])
        mass = np.concatenate([[alpha], share])
    else:
        support, mass = nbrs, share
    # renormalise away the last ulp so the mass check is exact
    mass = mass / mass.sum()
    return DiscreteDistribution(support, mass)


def wasserstein1(mu, nu, ground):
    """Exact W1 between two discrete distributions.

    ``ground[a, b]`` is the distance between ``mu.support[a]`` and
    ``nu.support[b]``.
    """
    a = np.asarray(getattr(mu, "mass", mu), dtype=np.float64)
    b = np.asarray(getattr(nu, "mass", nu), dtype=np.float64)
    C = np.ascontiguousarray(ground, dtype=np.float64)
    if C.shape != (len(a), len(b)):
        raise ValueError(f"ground shape {C.shape} does not match supports {len(a)}x{len(b)}")
    if not np.all(np.isfinite(C)):
        raise InfeasibleTransport("infinite ground distance between supports")
    tol = 1e-12 * max(1.0, float(np.abs(C).max(initial=0.0)))
    cost, _, it = kernels.transport_simplex(a, b, C, tol, MAX_PIVOTS)
    if it < 0:  # pragma: no cover - Bland's rule terminates
        raise RuntimeError("transport simplex exceeded pivot budget")
    return max(cost, 0.0)


def ground_distances(g, sources, targets, metric="unit"):
    indptr, indices, weights, _ = g.csr
    sources = np.asarray(sources, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    if metric == "unit":
        return kernels.multi_source_hops(g.n, indptr, indices, sources, targets)
    if metric == "weight":
        return kernels.multi_source_weighted(g.n, indptr, indices, weights, sources, targets)
    raise ValueError(f"unknown metric {metric!r}")


def edge_or_curvature(g, x, y, alpha=DEFAULT_ALPHA, metric="unit"):
    """``(kappa, W1, d(x, y))`` for one edge."""
    mu = neighbor_distribution(g, x, alpha)
    nu = neighbor_distribution(g, y, alpha)
    # row/column 0 carry x and y so d(x, y) comes from the same distance pass
    src = np.concatenate([[x], mu.support[mu.support != x]])
    dst = np.concatenate([[y], nu.support[nu.support != y]])
    D = ground_distances(g, src, dst, metric)
    src_pos = {int(s): r for r, s in enumerate(src)}
    dst_pos = {int(t): c for c, t in enumerate(dst)}
    rows = [src_pos[int(s)] for s in mu.support]
    cols = [dst_pos[int(t)] for t in nu.support]
    w1 = wasserstein1(mu, nu, D[np.ix_(rows, cols)])
    d_xy = D[0, 0]
    return 1.0 - w1 / d_xy, w1, d_xy


def or_curvature(g, alpha=DEFAULT_ALPHA, metric="unit", threads=None):
    _check_alpha(alpha)
    if not is_connected(g):
        raise DisconnectedGraph()
    rows = ordered_map(
        lambda e: edge_or_curvature(g, e[0], e[1], alpha, metric),
        zip(g.u.tolist(), g.v.tolist()),
        threads=threads,
    )
    arr = np.asarray(rows, dtype=np.float64).reshape(-1, 3)
    return OrCurvature(kappa=arr[:, 0], w1=arr[:, 1], distance=arr[:, 2], alpha=float(alpha), metric=metric)
