"""Slow reference computations used to validate the fast paths.

Everything here goes through a dense symmetric eigendecomposition or a
general LP solver, never through the code it is meant to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import InfeasibleTransport, MultipleZeroEigenvalues
from .graph import laplacian

ZERO_EIG_RTOL = 1e-9
ORACLE_MAX_N = 500


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self):
        return len(self.values)

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


def eigendecompose(M):
    vals, vecs = np.linalg.eigh(np.asarray(M, dtype=np.float64))
    return EigenDecomposition(vals, vecs)


def _zero_mask(values):
    scale = max(float(np.abs(values).max()), 1.0) if len(values) else 1.0
    return np.abs(values) < ZERO_EIG_RTOL * scale


def pseudoinverse(L):
    """Moore-Penrose pseudoinverse of a Laplacian from its spectrum."""
    eig = eigendecompose(L)
    zero = _zero_mask(eig.values)
    inv = np.where(zero, 0.0, 1.0 / np.where(zero, 1.0, eig.values))
    return (eig.vectors * inv) @ eig.vectors.T, int(zero.sum())


def pseudoinverse_resistance(g, max_n=ORACLE_MAX_N):
    """All-pairs effective resistance ``Omega`` and ``L^+`` for a connected graph."""
    if g.n > max_n:
        raise ValueError(f"oracle is capped at n={max_n}, got n={g.n}")
    Ldag, zeros = pseudoinverse(laplacian(g))
    if zeros != 1:
        raise MultipleZeroEigenvalues(f"{zeros} zero eigenvalues; graph is disconnected")
    d = np.diag(Ldag)
    omega = d[:, None] + d[None, :] - 2.0 * Ldag
    np.fill_diagonal(omega, 0.0)
    return omega, Ldag


def oracle_edge_resistance(g):
    omega, _ = pseudoinverse_resistance(g)
    return omega[g.u, g.v]


def nullspace_check(L):
    """Count near-zero eigenvalues and measure how much of ``1/sqrt(n)``
    lies in their span (1.0 means the all-ones vector is in the nullspace)."""
    eig = eigendecompose(L)
    zero = _zero_mask(eig.values)
    n = eig.n
    ones = np.ones(n) / np.sqrt(n)
    null = eig.vectors[:, zero]
    alignment = float(np.linalg.norm(null.T @ ones))
    return {"zero_count": int(zero.sum()), "alignment": alignment, "eigenvalues": eig.values}


def matrix_exponential(M, t):
    """``exp(-M t)`` for symmetric ``M`` via its spectrum."""
    if t < 0:
        raise ValueError("t must be >= 0")
    eig = eigendecompose(M)
    return (eig.vectors * np.exp(-eig.values * t)) @ eig.vectors.T


def expected_pair_distance(g, i, j, t, Q=None, omega=None):
    """``e_i^T exp(-Q t) Omega exp(-Q t) e_j`` with ``Q`` defaulting to ``L``."""
    if Q is None:
        Q = laplacian(g)
    if omega is None:
        omega, _ = pseudoinverse_resistance(g)
    eig = eigendecompose(Q)
    decay = np.exp(-eig.values * t)
    rho_i = eig.vectors @ (decay * eig.vectors[i])
    rho_j = eig.vectors @ (decay * eig.vectors[j])
    return float(rho_i @ omega @ rho_j)


def prop4_limit_check(g, edge, t_values=(1e-2, 1e-3, 1e-4), Q=None):
    """Check that ``(1/t) * (1 - E(t)/w_ij)`` approaches the edge curvature.

    Returns the estimates per ``t``, their absolute errors against
    ``2 (p_i + p_j) / w_ij`` computed from the oracle resistances, and the
    least-squares slope of ``log err`` against ``log t`` (the empirical
    convergence order).
    """
    ts = np.asarray(t_values, dtype=np.float64)
    if np.any(np.diff(ts) >= 0) or np.any(ts <= 0):
        raise ValueError("t_values must be positive and strictly decreasing")
    i, j = edge
    omega, _ = pseudoinverse_resistance(g)
    c = g.adjacency_matrix()
    p = 1.0 - 0.5 * (c * omega).sum(axis=1)
    w_ij = omega[i, j]
    k_ij = 2.0 * (p[i] + p[j]) / w_ij
    if Q is None:
        Q = laplacian(g)
    est = np.array([(1.0 - expected_pair_distance(g, i, j, t, Q=Q, omega=omega) / w_ij) / t for t in ts])
    err = np.abs(est - k_ij)
    with np.errstate(divide="ignore"):
        logs = np.log(err)
    if np.all(np.isfinite(logs)):
        order = float(np.polyfit(np.log(ts), logs, 1)[0])
    else:
        order = float("nan")
    return {"t": ts, "estimate": est, "error": err, "order": order, "limit": k_ij}


def laplacian_identity_residuals(g, omega=None):
    """Max-norm residuals of the two orientations of ``L Omega = -2I + 2 (.)``.

    ``as_stated`` tests ``L Omega = -2I + 2 * 1 p^T``;
    ``transposed`` tests ``L Omega = -2I + 2 * p 1^T``.
    """
    if omega is None:
        omega, _ = pseudoinverse_resistance(g)
    L = laplacian(g)
    c = g.adjacency_matrix()
    p = 1.0 - 0.5 * (c * omega).sum(axis=1)
    ones = np.ones(g.n)
    LO = L @ omega
    eye = np.eye(g.n)
    return {
        "as_stated": float(np.abs(LO + 2 * eye - 2 * np.outer(ones, p)).max()),
        "transposed": float(np.abs(LO + 2 * eye - 2 * np.outer(p, ones)).max()),
        "omega_L": float(np.abs(omega @ L + 2 * eye - 2 * np.outer(ones, p)).max()),
    }


def brute_force_w1(mu, nu, ground):
    """W1 between two distributions as a dense LP (HiGHS simplex).

    ``mu``/``nu`` are mass vectors (or objects with ``.mass``); ``ground``
    has shape ``(len(mu), len(nu))``.
    """
    a = np.asarray(getattr(mu, "mass", mu), dtype=np.float64)
    b = np.asarray(getattr(nu, "mass", nu), dtype=np.float64)
    C = np.asarray(ground, dtype=np.float64)
    if C.shape != (len(a), len(b)):
        raise ValueError(f"ground shape {C.shape} does not match supports {len(a)}x{len(b)}")
    if not np.all(np.isfinite(C)):
        raise InfeasibleTransport("infinite ground distance between supports")
    m, n = C.shape
    A_eq = np.zeros((m + n, m * n))
    for r in range(m):
        A_eq[r, r * n : (r + 1) * n] = 1.0
    for s in range(n):
        A_eq[m + s, s::n] = 1.0
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=np.concatenate([a, b]), bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise InfeasibleTransport(res.message)
    return float(res.fun)
