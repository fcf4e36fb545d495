"""Learning-free pieces of curvature-aware message passing: the
curvature-scaled aggregation operator and curvature-based reweighting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MisalignedCurvature, ShapeMismatch
from .graph import Graph

WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True)
class GSpec:
    """Elementwise transform applied to edge curvature.

    kind is one of ``identity``, ``linear`` (``a*k + b``), ``exp`` and
    ``clamp-linear`` (``clip(a*k + b, lo, hi)``).
    """

    kind: str = "identity"
    a: float = 1.0
    b: float = 0.0
    lo: float = -np.inf
    hi: float = np.inf

    @classmethod
    def constant(cls, value=1.0):
        return cls("linear", a=0.0, b=value)

    def __call__(self, k):
        k = np.asarray(k, dtype=np.float64)
        if self.kind == "identity":
            out = k.copy()
        elif self.kind == "linear":
            out = self.a * k + self.b
        elif self.kind == "exp":
            with np.errstate(over="ignore"):  # overflow is reported below
                out = np.exp(k)
        elif self.kind == "clamp-linear":
            out = np.clip(self.a * k + self.b, self.lo, self.hi)
        else:
            raise ValueError(f"unknown transform {self.kind!r}")
        if not np.all(np.isfinite(out)):
            raise ValueError("curvature transform produced non-finite values")
        return out


def aggregation_operator(g, k, gspec=GSpec()):
    """Dense ``tau = G * (D^-1 c_hat)`` with ``c_hat = c + I``.

    ``G`` holds ``gspec(k)`` on edge positions and 1 on the diagonal.
    """
    k = np.asarray(k, dtype=np.float64)
    if k.shape != (g.m,):
        raise MisalignedCurvature(f"expected {g.m} curvature values, got shape {k.shape}")
    c_hat = g.adjacency_matrix() + np.eye(g.n)
    base = c_hat / c_hat.sum(axis=1, keepdims=True)
    scale = np.eye(g.n)
    gk = gspec(k)
    scale[g.u, g.v] = gk
    scale[g.v, g.u] = gk
    return scale * base


def propagate(tau, X, steps=1):
    """Apply ``X <- tau @ X`` ``steps`` times (identity weights and activation)."""
    tau = np.asarray(tau, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if tau.ndim != 2 or tau.shape[0] != tau.shape[1] or X.shape[0] != tau.shape[1]:
        raise ShapeMismatch(f"operator {tau.shape} incompatible with features {X.shape}")
    for _ in range(steps):
        X = tau @ X
    return X


def pool_reweight(g, k, eta):
    """``w <- w * (1 - eta * k)`` with the result floored at ``WEIGHT_FLOOR``.

    For ``eta > 0`` positive curvature shrinks a weight and negative
    curvature grows it.
    """
    k = np.asarray(k, dtype=np.float64)
    if k.shape != (g.m,):
        raise MisalignedCurvature(f"expected {g.m} curvature values, got shape {k.shape}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if eta == 0.0:
        return Graph.from_arrays(g.n, g.u, g.v, g.w)
    w = np.maximum(WEIGHT_FLOOR, g.w * (1.0 - eta * k))
    return g.with_weights(w)
