"""Seeded random graph models.

All randomness comes from ``numpy.random.Generator(PCG64(seed))`` so a
spec plus seed always yields the same edge list.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GenerationFailure, InvalidSpec
from .graph import Graph, is_connected

MODELS = ("ring", "ws", "nw", "kleinberg-ring", "sbm", "random-regular", "complete", "path", "er")
RR_RETRIES = 200
CONNECT_RETRIES = 100

DENSITY_PRESETS = {"high": 20, "low": 5}


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int
    k: int = 2
    p: float = 0.1
    q: float = 0.0
    exponent: float = 1.0
    long_range: int = 1
    sizes: tuple = ()
    d: int = 3
    seed: int = 0
    require_connected: bool = False

    def validate(self):
        if self.model not in MODELS:
            raise InvalidSpec(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.n < 1:
            raise InvalidSpec("n must be >= 1")
        for name in ("p", "q"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise InvalidSpec(f"{name} must be a probability, got {val}")
        if self.model in ("ring", "ws", "nw", "kleinberg-ring"):
            if self.k % 2 or self.k < 2 or self.k >= self.n:
                raise InvalidSpec(f"k must be even with 2 <= k < n, got k={self.k}, n={self.n}")
        if self.model == "kleinberg-ring" and (self.exponent < 0 or self.long_range < 0):
            raise InvalidSpec("exponent and long_range must be non-negative")
        if self.model == "sbm":
            if not self.sizes or any(s < 1 for s in self.sizes) or sum(self.sizes) != self.n:
                raise InvalidSpec(f"block sizes {self.sizes} must be positive and sum to n={self.n}")
        if self.model == "random-regular":
            if not 0 <= self.d < self.n or (self.n * self.d) % 2:
                raise InvalidSpec(f"random-regular needs 0 <= d < n and n*d even, got n={self.n}, d={self.d}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidSpec("seed must be a 64-bit unsigned integer")
        return self

    def describe(self):
        parts = [self.model, f"n={self.n}"]
        if self.model in ("ring", "ws", "nw", "kleinberg-ring"):
            parts.append(f"k={self.k}")
        if self.model in ("ws", "nw", "er", "sbm"):
            parts.append(f"p={self.p}")
        if self.model == "sbm":
            parts.append(f"q={self.q}")
        if self.model == "random-regular":
            parts.append(f"d={self.d}")
        parts.append(f"seed={self.seed}")
        return " ".join(parts)


def _rng(seed):
    if not isinstance(seed, np.random.SeedSequence):
        seed = int(seed)
    return np.random.Generator(np.random.PCG64(seed))


def _ring_pairs(n, k):
    return [(i, (i + j) % n) for j in range(1, k // 2 + 1) for i in range(n)]


def _ring_distance(a, b, n):
    d = abs(a - b)
    return min(d, n - d)


class _EdgeSet:
    def __init__(self, n):
        self.n = n
        self.adj = [set() for _ in range(n)]

    def add(self, a, b):
        self.adj[a].add(b)
        self.adj[b].add(a)

    def remove(self, a, b):
        self.adj[a].discard(b)
        self.adj[b].discard(a)

    def has(self, a, b):
        return b in self.adj[a]

    def saturated(self, a):
        return len(self.adj[a]) >= self.n - 1

    def graph(self):
        pairs = sorted((a, b) for a in range(self.n) for b in self.adj[a] if a < b)
        return Graph(self.n, pairs)


def _ring(n, k):
    es = _EdgeSet(n)
    for a, b in _ring_pairs(n, k):
        es.add(a, b)
    return es


def _ws(spec, rng):
    n = spec.n
    es = _ring(n, spec.k)
    for a, b in _ring_pairs(n, spec.k):
        if rng.random() < spec.p:
            if es.saturated(a):
                continue
            t = int(rng.integers(n))
            while t == a or es.has(a, t):
                t = int(rng.integers(n))
            es.remove(a, b)
            es.add(a, t)
    return es.graph()


def _nw(spec, rng):
    n = spec.n
    es = _ring(n, spec.k)
    for a, _ in _ring_pairs(n, spec.k):
        if rng.random() < spec.p:
            if es.saturated(a):
                continue
            t = int(rng.integers(n))
            while t == a or es.has(a, t):
                t = int(rng.integers(n))
            es.add(a, t)
    return es.graph()


def _kleinberg_ring(spec, rng):
    """Ring lattice plus ``long_range`` shortcuts per node whose target is
    drawn with probability proportional to ``ring_distance ** -exponent``
    among nodes outside the lattice neighborhood."""
    n, half = spec.n, spec.k // 2
    es = _ring(n, spec.k)
    offsets = np.array([o for o in range(1, n) if _ring_distance(0, o, n) > half], dtype=np.int64)
    if len(offsets) == 0 or spec.long_range == 0:
        return es.graph()
    dist = np.minimum(offsets, n - offsets).astype(np.float64)
    prob = dist ** (-spec.exponent)
    cdf = np.cumsum(prob)
    cdf /= cdf[-1]
    for a in range(n):
        for _ in range(spec.long_range):
            for _attempt in range(100):
                off = offsets[min(int(np.searchsorted(cdf, rng.random(), side="right")), len(offsets) - 1)]
                t = int((a + off) % n)
                if not es.has(a, t):
                    es.add(a, t)
                    break
    return es.graph()


def _sbm(spec, rng):
    sizes = np.asarray(spec.sizes, dtype=np.int64)
    block = np.repeat(np.arange(len(sizes)), sizes)
    iu, ju = np.triu_indices(spec.n, 1)
    prob = np.where(block[iu] == block[ju], spec.p, spec.q)
    keep = rng.random(len(iu)) < prob
    return Graph(spec.n, zip(iu[keep].tolist(), ju[keep].tolist()))


def _er(spec, rng):
    iu, ju = np.triu_indices(spec.n, 1)
    keep = rng.random(len(iu)) < spec.p
    return Graph(spec.n, zip(iu[keep].tolist(), ju[keep].tolist()))


def _rr_attempt(n, d, rng):
    """Pair free stubs at random, keeping only legal pairs and re-pairing
    the leftovers; ``None`` when the leftovers cannot be completed."""
    edges = set()
    stubs = np.repeat(np.arange(n), d)
    while len(stubs):
        stubs = rng.permutation(stubs)
        leftover = defaultdict(int)
        for a, b in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            if a > b:
                a, b = b, a
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                leftover[a] += 1
                leftover[b] += 1
        if not leftover:
            break
        nodes = sorted(leftover)
        if not any(
            (min(x, y), max(x, y)) not in edges for i, x in enumerate(nodes) for y in nodes[i + 1 :]
        ):
            return None
        stubs = np.repeat(np.array(nodes, dtype=np.int64), [leftover[x] for x in nodes])
    return Graph(n, sorted(edges))


def _random_regular(spec, rng):
    if spec.d == 0:
        return Graph(spec.n)
    for _ in range(RR_RETRIES):
        g = _rr_attempt(spec.n, spec.d, rng)
        if g is not None:
            return g
    raise GenerationFailure(f"random-regular pairing failed {RR_RETRIES} times")


_BUILDERS = {
    "ring": lambda s, r: _ring(s.n, s.k).graph(),
    "ws": _ws,
    "nw": _nw,
    "kleinberg-ring": _kleinberg_ring,
    "sbm": _sbm,
    "er": _er,
    "random-regular": _random_regular,
    "complete": lambda s, r: Graph(s.n, [(a, b) for a in range(s.n) for b in range(a + 1, s.n)]),
    "path": lambda s, r: Graph(s.n, [(a, a + 1) for a in range(s.n - 1)]),
}


def generate(spec):
    """Build the graph described by ``spec``.

    With ``require_connected`` the model is re-sampled from a fresh stream
    (seeded by ``(seed, attempt)``) until a connected graph appears.
    """
    spec.validate()
    builder = _BUILDERS[spec.model]
    if not spec.require_connected:
        return builder(spec, _rng(spec.seed))
    for attempt in range(CONNECT_RETRIES):
        seed = spec.seed if attempt == 0 else np.random.SeedSequence([int(spec.seed), attempt])
        g = builder(spec, _rng(seed))
        if is_connected(g):
            return g
    raise GenerationFailure(f"no connected sample for {spec.describe()} in {CONNECT_RETRIES} attempts")


def equal_sizes(n, blocks):
    base, extra = divmod(n, blocks)
    return tuple(base + (1 if i < extra else 0) for i in range(blocks))


def sbm_grid(p_values, q_values, n, blocks, seeds):
    """One SBM sample per ``(p, q, seed)``, in nested loop order."""
    sizes = equal_sizes(n, blocks)
    out = []
    for p in p_values:
        for q in q_values:
            for seed in seeds:
                spec = GenSpec("sbm", n, p=float(p), q=float(q), sizes=sizes, seed=int(seed))
                out.append(({"p": float(p), "q": float(q), "seed": int(seed)}, generate(spec)))
    return out


PAPER_SBM_P = tuple(round(0.05 + 0.02 * i, 2) for i in range(10))
PAPER_SBM_Q = tuple(round(0.001 + 0.004 * i, 3) for i in range(12))
