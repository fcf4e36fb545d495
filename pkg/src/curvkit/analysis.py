"""Curvature distributions, betweenness, Girvan-Newman communities and the
hub/community pattern checks."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from . import kernels
from .errors import NoUniqueHub, TooFewSamples
from .graph import Graph, connected_components

TIE_RTOL = 1e-9
# spreads below this (relative) are solver noise, e.g. K_n from the fast path
CONST_RTOL = 1e-6


@dataclass(frozen=True)
class DistributionSummary:
    bin_edges: np.ndarray
    counts: np.ndarray
    density_x: np.ndarray
    density_y: np.ndarray
    bandwidth: float
    mean: float
    std: float
    skewness: float
    positive_fraction: float
    size: int


def silverman_bandwidth(values):
    x = np.asarray(values, dtype=np.float64)
    std = x.std(ddof=1) if len(x) > 1 else 0.0
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(std, (q75 - q25) / 1.34) if q75 > q25 else std
    return 0.9 * spread * len(x) ** (-0.2)


def summarize_distribution(values, bins=20, bandwidth=None, grid_size=512):
    """Histogram, Gaussian KDE and moments of a sample.

    A sample whose spread is below ``CONST_RTOL * max(1, |mean|)`` is
    treated as constant: every value lands mid-way through the first of
    ``bins`` bins over a unit range, skewness is 0, and the default
    bandwidth falls back to ``1e-3 * max(1, |mean|)`` (a narrow spike).
    """
    x = np.asarray(values, dtype=np.float64)
    if len(x) < 2:
        raise TooFewSamples(f"need at least 2 values, got {len(x)}")
    mean = float(x.mean())
    std = float(x.std())
    const = np.ptp(x) <= CONST_RTOL * max(1.0, abs(mean))
    # a constant sample sits in the middle of the first unit-width-range bin
    span = (x.min() - 0.5 / bins, x.min() - 0.5 / bins + 1.0) if const else None
    counts, edges = np.histogram(x, bins=bins, range=span)
    skew = float(((x - mean) ** 3).mean() / std**3) if std > 0 and not const else 0.0
    h = silverman_bandwidth(x) if bandwidth is None else float(bandwidth)
    if bandwidth is None and const or not h > 0:
        h = 1e-3 * max(1.0, abs(mean))
    lo, hi = x.min() - 5 * h, x.max() + 5 * h
    npts = int(min(max(grid_size, np.ceil((hi - lo) / (h / 4))), 200_000))
    grid = np.linspace(lo, hi, npts)
    dens = np.zeros_like(grid)
    # chunked so memory stays O(len(grid) * chunk)
    for start in range(0, len(x), 2048):
        z = (grid[:, None] - x[None, start : start + 2048]) / h
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    dens /= len(x) * h * np.sqrt(2 * np.pi)
    return DistributionSummary(
        bin_edges=edges,
        counts=counts,
        density_x=grid,
        density_y=dens,
        bandwidth=h,
        mean=mean,
        std=std,
        skewness=skew,
        positive_fraction=float(np.mean(x > 0)),
        size=len(x),
    )


@dataclass(frozen=True)
class CentralityScores:
    node: np.ndarray
    edge: np.ndarray

    def hub(self):
        """Strict argmax of node betweenness, or ``None`` on a tie."""
        if len(self.node) == 0:
            return None
        top = self.node.max()
        winners = np.flatnonzero(self.node >= top - TIE_RTOL * max(1.0, abs(top)))
        return int(winners[0]) if len(winners) == 1 else None


def betweenness(g):
    """Exact unweighted betweenness (pair counts, no normalization)."""
    indptr, indices, _, eids = g.csr
    node, edge = kernels.brandes(g.n, g.m, indptr, indices, eids)
    return CentralityScores(node, edge)


def modularity(g, communities):
    two_m = 2.0 * g.w.sum()
    if two_m == 0:
        return 0.0
    label = np.empty(g.n, dtype=np.int64)
    for c, members in enumerate(communities):
        label[list(members)] = c
    deg = np.zeros(g.n)
    np.add.at(deg, g.u, g.w)
    np.add.at(deg, g.v, g.w)
    inside = g.w[label[g.u] == label[g.v]].sum()
    tot = np.bincount(label, weights=deg, minlength=len(communities))
    return float(inside * 2 / two_m - ((tot / two_m) ** 2).sum())


def _partition(labels):
    groups = {}
    for node, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(node)
    return sorted(groups.values(), key=lambda c: c[0])


def girvan_newman(g, target_communities=None):
    """Divisive communities by repeated removal of the max-betweenness edge.

    Ties go to the lexicographically smallest ``(u, v)``. Without a target
    the modularity-maximal partition seen along the way is returned
    (modularity measured on the original graph).
    """
    edges = list(zip(g.u.tolist(), g.v.tolist()))
    current = Graph(g.n, edges)
    labels = connected_components(current)
    best = _partition(labels)
    best_q = modularity(g, best)
    ncomp = int(labels.max()) + 1
    while True:
        if target_communities is not None and ncomp >= target_communities:
            return _partition(labels)
        if current.m == 0:
            break
        eb = betweenness(current).edge
        top = eb.max()
        cands = [e for e, val in zip(edges, eb.tolist()) if val >= top - TIE_RTOL * max(1.0, top)]
        drop = min(cands)
        edges = [e for e in edges if e != drop]
        current = Graph(g.n, edges)
        labels = connected_components(current)
        new_ncomp = int(labels.max()) + 1
        if new_ncomp != ncomp:
            ncomp = new_ncomp
            part = _partition(labels)
            q = modularity(g, part)
            if q > best_q + 1e-12:
                best, best_q = part, q
    return best if target_communities is None else _partition(labels)


def positive_ratio_vs_density(graphs, curvatures):
    """Rows of ``(graph_id, density, positive_fraction)`` plus Spearman rho."""
    rows = []
    for gid, (g, k) in enumerate(zip(graphs, curvatures)):
        k = np.asarray(k)
        frac = float(np.mean(k > 0)) if len(k) else float("nan")
        rows.append({"graph_id": gid, "density": g.density(), "positive_fraction": frac})
    rho = float("nan")
    if len(rows) >= 3:
        d = [r["density"] for r in rows]
        f = [r["positive_fraction"] for r in rows]
        if np.ptp(d) > 0 and np.ptp(f) > 0:
            rho = float(spearmanr(d, f).statistic)
    return rows, rho


@dataclass
class PatternReport:
    graph_id: object
    density: float
    hub: int
    community_sizes: list
    p1_res: bool | None
    p1_or: bool | None
    p21: bool | None
    p22: bool | None
    p31: bool
    p32: bool
    details: dict = field(default_factory=dict)


def _monotone(sizes, values, decreasing):
    """Strict monotonicity of values ordered by size; None if < 2 sizes."""
    pairs = sorted(zip(sizes, values))
    if len({s for s, _ in pairs}) < 2:
        return None
    for (s0, v0), (s1, v1) in zip(pairs, pairs[1:]):
        if s1 == s0:
            continue
        if decreasing and not v1 < v0:
            return False
        if not decreasing and not v1 > v0:
            return False
    return True


def _stats(vals):
    vals = np.asarray(vals)
    return {"mean": float(vals.mean()), "min": float(vals.min()), "max": float(vals.max()), "count": len(vals)}


def find_hub(g):
    hub = betweenness(g).hub()
    if hub is None:
        raise NoUniqueHub("highest betweenness is shared by several nodes")
    return hub


def pattern_check(g, k_res, k_or, partition, hub=None, graph_id=None):
    """Evaluate the community-size and hub-sign patterns on one graph.

    ``k_res`` should be the normalized resistance curvature and ``k_or`` the
    Ollivier-Ricci curvature, both aligned with ``g.u``/``g.v``. The hub is
    dropped from its own community, so every hub-incident edge is a
    hub-to-community edge.
    """
    k_res = np.asarray(k_res, dtype=np.float64)
    k_or = np.asarray(k_or, dtype=np.float64)
    if hub is None:
        hub = find_hub(g)
    comm_of = np.full(g.n, -1, dtype=np.int64)
    for c, members in enumerate(partition):
        comm_of[list(members)] = c
    members = [[x for x in comm if x != hub] for comm in partition]
    sizes = [len(m) for m in members]

    inner = {}
    for e, (a, b) in enumerate(zip(g.u.tolist(), g.v.tolist())):
        if a == hub or b == hub or comm_of[a] != comm_of[b]:
            continue
        inner.setdefault(int(comm_of[a]), []).append(e)
    in_sizes = [sizes[c] for c in inner]
    p1_res = _monotone(in_sizes, [k_res[inner[c]].mean() for c in inner], decreasing=True)
    p1_or = _monotone(in_sizes, [k_or[inner[c]].mean() for c in inner], decreasing=True)

    hub_edges = np.flatnonzero((g.u == hub) | (g.v == hub))
    other = np.where(g.u[hub_edges] == hub, g.v[hub_edges], g.u[hub_edges])
    groups = {}
    for e, x in zip(hub_edges.tolist(), other.tolist()):
        groups.setdefault(int(comm_of[x]), []).append(e)
    g_sizes = [sizes[c] for c in groups]
    p21 = _monotone(g_sizes, [k_res[groups[c]].mean() for c in groups], decreasing=True)
    p22 = _monotone(g_sizes, [k_or[groups[c]].mean() for c in groups], decreasing=False)

    details = {
        "hub_to_community": {
            c: {"size": sizes[c], "res": _stats(k_res[idx]), "or": _stats(k_or[idx])} for c, idx in groups.items()
        },
        "within_community": {
            c: {"size": sizes[c], "res": _stats(k_res[idx]), "or": _stats(k_or[idx])} for c, idx in inner.items()
        },
    }
    return PatternReport(
        graph_id=graph_id,
        density=g.density(),
        hub=hub,
        community_sizes=sizes,
        p1_res=p1_res,
        p1_or=p1_or,
        p21=p21,
        p22=p22,
        p31=bool(len(hub_edges) and np.all(k_res[hub_edges] < 0)),
        p32=bool(len(hub_edges) and np.all(k_or[hub_edges] > 0)),
        details=details,
    )


def pattern_rates(reports):
    """Percentage of reports satisfying each pattern (None entries skipped)."""
    out = {}
    for key in ("p1_res", "p1_or", "p21", "p22", "p31", "p32"):
        vals = [getattr(r, key) for r in reports if getattr(r, key) is not None]
        out[key] = 100.0 * float(np.mean(vals)) if vals else float("nan")
    return out


# --- CSV outputs ----------------------------------------------------------


def write_distribution_csv(summary, path):
    nb = len(summary.counts)
    nk = len(summary.density_x)
    with open(path, "w", newline="", encoding="utf8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["bin_left", "bin_right", "count", "density_x", "density_y"])
        for i in range(max(nb, nk)):
            row = [repr(float(summary.bin_edges[i])), repr(float(summary.bin_edges[i + 1])), int(summary.counts[i])] if i < nb else ["", "", ""]
            row += [repr(float(summary.density_x[i])), repr(float(summary.density_y[i]))] if i < nk else ["", ""]
            wr.writerow(row)


def _flag(x):
    return "" if x is None else int(bool(x))


def write_patterns_csv(reports, path):
    with open(path, "w", newline="", encoding="utf8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["graph_id", "density", "p21", "p22", "p31", "p32"])
        for r in reports:
            wr.writerow([r.graph_id, repr(float(r.density)), _flag(r.p21), _flag(r.p22), _flag(r.p31), _flag(r.p32)])


def write_density_ratio_csv(rows, path):
    with open(path, "w", newline="", encoding="utf8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["graph_id", "density", "positive_fraction"])
        for r in rows:
            wr.writerow([r["graph_id"], repr(float(r["density"])), repr(float(r["positive_fraction"]))])
