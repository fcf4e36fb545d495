import itertools

import numpy as np
import pytest

from curvkit.generators import GenSpec, generate
from curvkit.graph import Graph

# criterion id -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE = {}


def complete(n):
    return Graph(n, itertools.combinations(range(n), 2))


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def two_triangles_bridge():
    return Graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])


def random_connected(seed, n_lo=5, n_hi=30, p_lo=0.15, p_hi=0.6):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    p = float(rng.uniform(p_lo, p_hi))
    return generate(GenSpec("er", n, p=p, seed=seed, require_connected=True))


def random_weighted(seed, n_lo=5, n_hi=20):
    g = random_connected(seed, n_lo, n_hi)
    rng = np.random.default_rng(seed + 10_000)
    return g.with_weights(rng.uniform(0.2, 3.0, size=g.m))


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def p3():
    return path(3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
