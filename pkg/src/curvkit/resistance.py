"""Effective resistance and resistance curvature.

Resistances come from the shifted Laplacian ``L + eps*I``, which is
positive definite and can be factored directly. The shift blows up the
inverse along the all-ones direction, but ``e_i - e_j`` is orthogonal to
that direction, so pairwise resistances converge as ``eps -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import lapack

from .errors import ConvergenceFailure, DisconnectedGraph, FactorizationError
from .graph import is_connected, laplacian, weighted_degrees
from .parallel import ordered_map, single_threaded_blas

FULL_MATRIX_MAX_N = 4000
EPS_SCALE = 1e-8


@dataclass(frozen=True)
class ResistanceCurvature:
    """Per-edge arrays are aligned with ``graph.u``/``graph.v``."""

    resistance: np.ndarray
    p: np.ndarray
    k: np.ndarray
    k_norm: np.ndarray
    epsilon: float
    w_min: float | None
    solver: str
    omega: np.ndarray | None = None

    def to_dict(self, g):
        return {
            "epsilon": self.epsilon,
            "w_min": self.w_min,
            "solver": self.solver,
            "nodes": [{"id": i, "p": float(x)} for i, x in enumerate(self.p)],
            "edges": [
                {
                    "u": int(a),
                    "v": int(b),
                    "w": float(c),
                    "resistance": float(r),
                    "k": float(kk),
                    "k_norm": float(kn),
                }
                for a, b, c, r, kk, kn in zip(g.u, g.v, g.w, self.resistance, self.k, self.k_norm)
            ],
        }


def default_epsilon(g):
    return EPS_SCALE * float(weighted_degrees(g).mean())


def perturbed_inverse(L, epsilon):
    """``(L + epsilon*I)^-1`` through a Cholesky factorization."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    A = np.array(L, dtype=np.float64, order="F", copy=True)
    A[np.diag_indices_from(A)] += epsilon
    with single_threaded_blas():
        c, info = lapack.dpotrf(A, lower=0, overwrite_a=1)
        if info != 0:
            raise FactorizationError(f"L + eps*I is not positive definite (dpotrf info={info})")
        inv, info = lapack.dpotri(c, lower=0, overwrite_c=1)
    if info != 0:
        raise FactorizationError(f"dpotri failed (info={info})")
    upper = np.triu(inv)
    return upper + np.triu(inv, 1).T


def _omega_from_inverse(M):
    d = np.diag(M)
    return d[:, None] + d[None, :] - 2.0 * M


def conjugate_gradient(A, b, tol=1e-12, max_iter=None):
    """Plain CG for SPD ``A``; stops when ``|r| <= tol * |b|``."""
    n = b.shape[0]
    if max_iter is None:
        max_iter = max(1000, 10 * n)
    x = np.zeros(n)
    r = b.copy()
    d = r.copy()
    rr = r @ r
    stop = (tol * np.sqrt(b @ b)) ** 2
    for _ in range(max_iter):
        if rr <= stop:
            return x
        Ad = A @ d
        alpha = rr / (d @ Ad)
        x += alpha * d
        r -= alpha * Ad
        rr_new = r @ r
        d = r + (rr_new / rr) * d
        rr = rr_new
    if rr <= stop:
        return x
    raise ConvergenceFailure(f"CG did not reach tol={tol} in {max_iter} iterations")


def _shifted_sparse_laplacian(g, epsilon):
    a = weighted_degrees(g) + epsilon
    rows = np.concatenate([g.u, g.v, np.arange(g.n)])
    cols = np.concatenate([g.v, g.u, np.arange(g.n)])
    vals = np.concatenate([-g.w, -g.w, a])
    return sp.csr_matrix((vals, (rows, cols)), shape=(g.n, g.n))


def effective_resistance(g, epsilon=None, mode="auto", threads=None, cg_tol=1e-12):
    """Per-edge effective resistance, plus the all-pairs matrix in full mode.

    Parameters
    ----------
    mode : {"auto", "full-matrix", "per-edge-solve"}
        ``auto`` picks the dense inverse up to ``FULL_MATRIX_MAX_N`` nodes.

    Returns
    -------
    resistance : (m,) ndarray
    omega : (n, n) ndarray or None
    """
    if not is_connected(g):
        raise DisconnectedGraph()
    if epsilon is None:
        epsilon = default_epsilon(g) if g.m else 1.0
    if mode == "auto":
        mode = "full-matrix" if g.n <= FULL_MATRIX_MAX_N else "per-edge-solve"
    if mode == "full-matrix":
        M = perturbed_inverse(laplacian(g), epsilon)
        omega = _omega_from_inverse(M)
        res = M[g.u, g.u] + M[g.v, g.v] - 2.0 * M[g.u, g.v]
        return res, omega
    if mode == "per-edge-solve":
        A = _shifted_sparse_laplacian(g, epsilon)

        def solve(e):
            a, b = e
            rhs = np.zeros(g.n)
            rhs[a] = 1.0
            rhs[b] = -1.0
            x = conjugate_gradient(A, rhs, tol=cg_tol)
            return x[a] - x[b]

        res = ordered_map(solve, zip(g.u.tolist(), g.v.tolist()), threads=threads)
        return np.asarray(res, dtype=np.float64), None
    raise ValueError(f"unknown mode {mode!r}")


def node_curvature(g, resistance):
    """``p_i = 1 - 1/2 * sum_j c_ij w_ij`` over incident edges."""
    rel = g.w * np.asarray(resistance)
    s = np.zeros(g.n)
    np.add.at(s, g.u, rel)
    np.add.at(s, g.v, rel)
    return 1.0 - 0.5 * s


def edge_curvature(g, resistance, p):
    resistance = np.asarray(resistance)
    return 2.0 * (p[g.u] + p[g.v]) / resistance


def normalize_curvature(k, w_min):
    return np.asarray(k) * (w_min / 2.0)


def resistance_curvature(g, epsilon=None, mode="auto", threads=None, keep_omega=False):
    if not is_connected(g):
        raise DisconnectedGraph()
    if g.m == 0:
        empty = np.zeros(0)
        return ResistanceCurvature(empty, np.ones(g.n), empty, empty, float(epsilon or 0.0), None, "none")
    if epsilon is None:
        epsilon = default_epsilon(g)
    res, omega = effective_resistance(g, epsilon, mode=mode, threads=threads)
    p = node_curvature(g, res)
    k = edge_curvature(g, res, p)
    w_min = float(res.min())
    return ResistanceCurvature(
        resistance=res,
        p=p,
        k=k,
        k_norm=normalize_curvature(k, w_min),
        epsilon=float(epsilon),
        w_min=w_min,
        solver="perturbed-inverse",
        omega=omega if keep_omega else None,
    )


def from_resistances(g, resistance, epsilon=0.0, solver="pseudoinverse-oracle"):
    """Assemble curvature fields from externally computed resistances."""
    resistance = np.asarray(resistance, dtype=np.float64)
    p = node_curvature(g, resistance)
    k = edge_curvature(g, resistance, p)
    w_min = float(resistance.min()) if len(resistance) else None
    k_norm = normalize_curvature(k, w_min) if w_min is not None else np.zeros(0)
    return ResistanceCurvature(resistance, p, k, k_norm, float(epsilon), w_min, solver)


def total_resistance(omega):
    """Effective graph resistance ``sum_{i<j} Omega_ij``."""
    return float(np.triu(omega, 1).sum())
