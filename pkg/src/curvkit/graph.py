"""Weighted undirected graphs, ingestion and the basic algorithms shared by
the curvature modules."""

from __future__ import annotations

import os
from collections import defaultdict
from functools import cached_property

import numpy as np

from . import kernels
from .errors import InconsistentIndicator, MissingFile, ParseError, ValidationError


class Graph:
    """Immutable weighted undirected simple graph on nodes ``0..n-1``.

    Edges are stored canonically with ``u < v`` in the order they were
    supplied; every per-edge result in the package is aligned with this
    order.

    Parameters
    ----------
    n : int
        Number of nodes (at least 1).
    edges : iterable of (u, v) or (u, v, w)
        Missing weights default to 1.0.
    """

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 1:
            raise ValidationError(f"node count must be >= 1, got {n}")
        us, vs, ws = [], [], []
        seen = set()
        for e in edges:
            if len(e) == 2:
                a, b = e
                wt = 1.0
            else:
                a, b, wt = e
            a, b, wt = int(a), int(b), float(wt)
            if not (0 <= a < n and 0 <= b < n):
                raise ValidationError(f"edge ({a}, {b}) out of range for n={n}")
            if a == b:
                raise ValidationError(f"self-loop at node {a}")
            if not (wt > 0.0) or not np.isfinite(wt):
                raise ValidationError(f"edge ({a}, {b}) has non-positive weight {wt}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
            us.append(key[0])
            vs.append(key[1])
            ws.append(wt)
        self.n = n
        self.u = np.asarray(us, dtype=np.int64)
        self.v = np.asarray(vs, dtype=np.int64)
        self.w = np.asarray(ws, dtype=np.float64)
        for arr in (self.u, self.v, self.w):
            arr.flags.writeable = False

    @classmethod
    def from_arrays(cls, n, u, v, w=None):
        if w is None:
            w = np.ones(len(u))
        return cls(n, zip(np.asarray(u).tolist(), np.asarray(v).tolist(), np.asarray(w, dtype=float).tolist()))

    @property
    def m(self):
        return len(self.u)

    @property
    def edges(self):
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.w, other.w)
        )

    def __hash__(self):
        return hash((self.n, self.u.tobytes(), self.v.tobytes(), self.w.tobytes()))

    @cached_property
    def csr(self):
        """Symmetric CSR adjacency ``(indptr, indices, weights, edge_ids)``.

        Neighbor lists are sorted by node id.
        """
        src = np.concatenate([self.u, self.v])
        dst = np.concatenate([self.v, self.u])
        wts = np.concatenate([self.w, self.w])
        eid = np.concatenate([np.arange(self.m), np.arange(self.m)])
        order = np.lexsort((dst, src))
        src, dst, wts, eid = src[order], dst[order], wts[order], eid[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        out = (indptr, dst.astype(np.int64), wts.astype(np.float64), eid.astype(np.int64))
        for arr in out:
            arr.flags.writeable = False
        return out

    def neighbors(self, x):
        indptr, indices, weights, _ = self.csr
        lo, hi = indptr[x], indptr[x + 1]
        return indices[lo:hi], weights[lo:hi]

    def degrees(self):
        indptr = self.csr[0]
        return np.diff(indptr)

    def adjacency_matrix(self):
        c = np.zeros((self.n, self.n))
        c[self.u, self.v] = self.w
        c[self.v, self.u] = self.w
        return c

    def edge_index(self):
        """Map canonical ``(u, v)`` to the edge position."""
        return {(a, b): i for i, (a, b) in enumerate(zip(self.u.tolist(), self.v.tolist()))}

    def density(self):
        if self.n < 2:
            return 0.0
        return 2.0 * self.m / (self.n * (self.n - 1))

    def with_weights(self, w):
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.m,):
            raise ValidationError(f"expected {self.m} weights, got shape {w.shape}")
        return Graph.from_arrays(self.n, self.u, self.v, w)

    def add_edge(self, a, b, w=1.0):
        return Graph(self.n, self.edges + [(a, b, w)])


# --- ingestion -------------------------------------------------------------


def load_edge_list(text, n=None):
    """Parse ``u v [w]`` lines (``#`` starts a comment) into a Graph.

    The node count is ``max id + 1`` unless ``n`` is given, which lets
    isolated trailing nodes survive a round trip.
    """
    edges = []
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            tokens = line[1:].split()
            if len(tokens) == 2 and tokens[0] == "nodes:":
                header_n = _parse_int(tokens[1], lineno)
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        a = _parse_int(parts[0], lineno)
        b = _parse_int(parts[1], lineno)
        if a < 0 or b < 0:
            raise ParseError(f"line {lineno}: negative node id")
        try:
            wt = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"line {lineno}: bad weight {parts[2]!r}") from None
        edges.append((a, b, wt))
    if n is None:
        n = header_n
    if n is None:
        n = 1 + max((max(a, b) for a, b, _ in edges), default=0)
    return Graph(n, edges)


def _parse_int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: bad node id {tok!r}") from None


def serialize_edge_list(g):
    lines = [f"# nodes: {g.n}"]
    lines += [f"{a} {b} {wt!r}" for a, b, wt in g.edges]
    return "\n".join(lines) + "\n"


def read_edge_list(path):
    with open(path, encoding="utf8") as fh:
        return load_edge_list(fh.read())


def write_edge_list(g, path):
    with open(path, "w", encoding="utf8") as fh:
        fh.write(serialize_edge_list(g))


def load_tu_dataset(directory, name=None):
    """Read a TUDataset directory (``DS_A.txt`` + ``DS_graph_indicator.txt``).

    ``DS`` is inferred from the ``*_A.txt`` file when ``name`` is omitted.
    Directed duplicates collapse into one undirected edge; every edge
    gets weight 1.
    """
    if name is None:
        cands = sorted(f for f in os.listdir(directory) if f.endswith("_A.txt")) if os.path.isdir(directory) else []
        if not cands:
            raise MissingFile(f"no *_A.txt in {directory}")
        name = cands[0][: -len("_A.txt")]
    a_path = os.path.join(directory, f"{name}_A.txt")
    ind_path = os.path.join(directory, f"{name}_graph_indicator.txt")
    for p in (a_path, ind_path):
        if not os.path.exists(p):
            raise MissingFile(p)

    with open(ind_path, encoding="utf8") as fh:
        indicator = [int(tok) for tok in fh.read().split()]
    graph_ids = sorted(set(indicator))
    local = []
    counts = defaultdict(int)
    for gid in indicator:
        local.append(counts[gid])
        counts[gid] += 1

    pairs = defaultdict(set)
    with open(a_path, encoding="utf8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                a, b = (int(t) for t in line.replace(",", " ").split())
            except ValueError:
                raise ParseError(f"{a_path}:{lineno}: bad edge {raw!r}") from None
            a -= 1
            b -= 1
            if not (0 <= a < len(indicator) and 0 <= b < len(indicator)):
                raise ParseError(f"{a_path}:{lineno}: node id out of range")
            ga, gb = indicator[a], indicator[b]
            if ga != gb:
                raise InconsistentIndicator(f"{a_path}:{lineno}: edge joins graphs {ga} and {gb}")
            if a == b:
                continue
            la, lb = local[a], local[b]
            pairs[ga].add((min(la, lb), max(la, lb)))

    return [Graph(counts[gid], sorted(pairs[gid])) for gid in graph_ids]


# --- matrices and traversal ------------------------------------------------


def weighted_degrees(g):
    a = np.zeros(g.n)
    np.add.at(a, g.u, g.w)
    np.add.at(a, g.v, g.w)
    return a


def laplacian(g):
    """Dense ``L = D - C``; the diagonal is set from the off-diagonal row sums."""
    L = -g.adjacency_matrix()
    L[np.diag_indices(g.n)] = -L.sum(axis=1)
    return L


def connected_components(g):
    """Component label per node, labels numbered in order of first node."""
    indptr, indices, _, _ = g.csr
    return kernels.component_labels(g.n, indptr, indices)


def is_connected(g):
    if g.n == 1:
        return True
    return bool(connected_components(g).max() == 0)


def shortest_path_distances(g, source, cost="unit"):
    """Distances from ``source``; unreachable nodes are ``inf``.

    ``cost="unit"`` counts hops, ``cost="weight"`` sums edge weights.
    """
    indptr, indices, weights, _ = g.csr
    if cost == "unit":
        d = kernels.bfs_hops(g.n, indptr, indices, int(source))
        out = d.astype(np.float64)
        out[d < 0] = np.inf
        return out
    if cost == "weight":
        return kernels.dijkstra(g.n, indptr, indices, weights, int(source))
    raise ValueError(f"unknown cost {cost!r}")
