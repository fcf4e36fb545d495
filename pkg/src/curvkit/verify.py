"""Self-checks run by ``curvkit verify``: every fast path against its
oracle, plus the structural properties of the Laplacian and resistance."""

from __future__ import annotations

import itertools
import time

import numpy as np

from . import oracles
from .generators import GenSpec, generate
from .graph import Graph, laplacian
from .ollivier import neighbor_distribution, or_curvature, wasserstein1
from .resistance import effective_resistance, resistance_curvature, total_resistance


def complete_graph(n):
    return Graph(n, itertools.combinations(range(n), 2))


def random_connected(seed, n_lo=6, n_hi=30):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    p = float(rng.uniform(0.15, 0.6))
    return generate(GenSpec("er", n, p=p, seed=seed, require_connected=True))


def check_golden():
    worst = 0.0
    for n in range(2, 13):
        g = complete_graph(n)
        w = oracles.oracle_edge_resistance(g)
        worst = max(worst, float(np.abs(w - 2.0 / n).max()))
    return worst <= 1e-9, {"max_abs_err": worst}


def check_nullspace(count=30):
    bad = 0
    for s in range(count):
        g = random_connected(s)
        L = laplacian(g)
        rep = oracles.nullspace_check(L)
        if np.abs(L.sum(axis=1)).max() > 1e-12 or rep["zero_count"] != 1:
            bad += 1
    two = Graph(4, [(0, 1), (2, 3)])
    split = oracles.nullspace_check(laplacian(two))["zero_count"]
    return bad == 0 and split == 2, {"violations": bad, "disjoint_k2_zero_count": split}


def check_stability(count=30):
    worst = 0.0
    for s in range(count):
        g = random_connected(100 + s, 10, 120)
        w_fast, _ = effective_resistance(g)
        worst = max(worst, float(np.abs(w_fast - oracles.oracle_edge_resistance(g)).max()))
    return worst <= 1e-6, {"max_abs_err": worst}


def check_solver_equivalence(count=5):
    worst = 0.0
    for s in range(count):
        g = random_connected(200 + s, 10, 60)
        a, _ = effective_resistance(g, mode="full-matrix")
        b, _ = effective_resistance(g, mode="per-edge-solve", threads=1)
        worst = max(worst, float(np.abs(a - b).max()))
    return worst <= 1e-8, {"max_abs_diff": worst}


def check_prop5(count=30):
    bad = 0
    for s in range(count):
        g = random_connected(300 + s)
        r = resistance_curvature(g)
        d = g.degrees()
        lower = (4 - d[g.u] - d[g.v]) / r.resistance
        upper = 2 / r.resistance
        # trees hit the lower bound exactly; slack matches the fast-path accuracy
        tol = 1e-6 * np.maximum(1.0, np.abs(r.k))
        bad += int(np.sum(r.k < lower - tol) + np.sum(r.k > upper + tol) + np.sum(r.k_norm > 1 + 1e-6))
    return bad == 0, {"violations": bad}


def check_rayleigh(count=30):
    bad = 0
    rng = np.random.default_rng(7)
    for s in range(count):
        g = random_connected(400 + s, 6, 20)
        missing = [(a, b) for a in range(g.n) for b in range(a + 1, g.n) if (a, b) not in g.edge_index()]
        if not missing:
            continue
        a, b = missing[int(rng.integers(len(missing)))]
        before, _ = oracles.pseudoinverse_resistance(g)
        after, _ = oracles.pseudoinverse_resistance(g.add_edge(a, b))
        if np.any(after > before + 1e-10) or not total_resistance(after) < total_resistance(before):
            bad += 1
    return bad == 0, {"violations": bad}


def check_w1(count=100):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(count):
        m, n = rng.integers(1, 6, size=2)
        a = rng.random(m)
        b = rng.random(n)
        C = rng.integers(0, 4, size=(m, n)).astype(float)
        got = wasserstein1(a / a.sum(), b / b.sum(), C)
        ref = oracles.brute_force_w1(a / a.sum(), b / b.sum(), C)
        worst = max(worst, abs(got - ref))
    k2 = or_curvature(complete_graph(2), alpha=0.5).kappa[0]
    return worst <= 1e-9 and k2 == 1.0, {"max_abs_err": worst, "kappa_K2": float(k2)}


def check_prop4(count=5):
    orders = []
    for s in range(count):
        g = random_connected(500 + s, 5, 15)
        for a, b in zip(g.u.tolist()[:5], g.v.tolist()[:5]):
            orders.append(oracles.prop4_limit_check(g, (a, b))["order"])
    orders = np.asarray(orders)
    ok = bool(np.all(np.abs(orders - 1.0) <= 0.3))
    return ok, {"min_order": float(orders.min()), "max_order": float(orders.max())}


def check_fig6():
    kn = [resistance_curvature(complete_graph(n)).k_norm[0] for n in range(2, 21)]
    ko = [or_curvature(complete_graph(n)).kappa[0] for n in range(2, 21)]
    ok = bool(np.all(np.diff(kn) < 0) and np.all(np.diff(ko) < 0) and min(ko) >= 0.5 and abs(kn[0] - 1) < 1e-6)
    return ok, {"k_norm_K20": float(kn[-1]), "kappa_K20": float(ko[-1])}


def check_neighbor_distribution():
    g = Graph(3, [(0, 1), (1, 2)])
    got = neighbor_distribution(g, 1, 0.5).as_dict()
    return got == {1: 0.5, 0: 0.25, 2: 0.25}, {"p3_center": got}


CHECKS = {
    "golden_values": check_golden,
    "laplacian_nullspace": check_nullspace,
    "resistance_stability": check_stability,
    "solver_equivalence": check_solver_equivalence,
    "curvature_bounds": check_prop5,
    "rayleigh_monotonicity": check_rayleigh,
    "w1_exactness": check_w1,
    "diffusion_limit": check_prop4,
    "complete_graph_trend": check_fig6,
    "neighbor_distribution": check_neighbor_distribution,
}


def run_all():
    results = []
    for name, fn in CHECKS.items():
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append({"name": name, "passed": bool(ok), "detail": detail, "_seconds": time.perf_counter() - t0})
    return results
