"""Hot inner loops over CSR adjacency arrays.

Each function is compiled by numba unless ``CURVKIT_DISABLE_NUMBA`` is
set; the source is written so the interpreted path gives identical
results (same visiting order, same floating point operations).
"""

import heapq

import numpy as np

from ._accel import jit


@jit
def component_labels(n, indptr, indices):
    label = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    current = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = current
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            x = queue[head]
            head += 1
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if label[y] < 0:
                    label[y] = current
                    queue[tail] = y
                    tail += 1
        current += 1
    return label


@jit
def bfs_hops(n, indptr, indices, source):
    """Hop distance from ``source``; -1 marks unreachable nodes."""
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        dx = dist[x] + 1
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if dist[y] < 0:
                dist[y] = dx
                queue[tail] = y
                tail += 1
    return dist


@jit
def dijkstra(n, indptr, indices, weights, source):
    dist = np.full(n, np.inf)
    done = np.zeros(n, dtype=np.bool_)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while len(heap) > 0:
        d, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            nd = d + weights[k]
            if nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


@jit
def multi_source_hops(n, indptr, indices, sources, targets):
    """Hop-distance block ``D[a, b] = d(sources[a], targets[b])``.

    One full BFS per source; unreachable pairs are ``inf``.
    """
    out = np.empty((len(sources), len(targets)))
    for a in range(len(sources)):
        dist = bfs_hops(n, indptr, indices, sources[a])
        for b in range(len(targets)):
            t = dist[targets[b]]
            out[a, b] = np.inf if t < 0 else float(t)
    return out


@jit
def multi_source_weighted(n, indptr, indices, weights, sources, targets):
    out = np.empty((len(sources), len(targets)))
    for a in range(len(sources)):
        dist = dijkstra(n, indptr, indices, weights, sources[a])
        for b in range(len(targets)):
            out[a, b] = dist[targets[b]]
    return out


@jit
def brandes(n, m, indptr, indices, edge_ids):
    """Unweighted betweenness of nodes and edges (Brandes accumulation).

    Returns raw pair counts for undirected graphs: each unordered pair
    (s, t) contributes once, split fractionally over shortest paths.
    """
    node_bc = np.zeros(n)
    edge_bc = np.zeros(m)
    sigma = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    delta = np.zeros(n)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        for i in range(n):
            sigma[i] = 0.0
            dist[i] = -1
            delta[i] = 0.0
        sigma[s] = 1.0
        dist[s] = 0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            x = order[head]
            head += 1
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    order[tail] = y
                    tail += 1
                if dist[y] == dist[x] + 1:
                    sigma[y] += sigma[x]
        for idx in range(tail - 1, -1, -1):
            y = order[idx]
            for k in range(indptr[y], indptr[y + 1]):
                x = indices[k]
                if dist[x] == dist[y] - 1:
                    c = sigma[x] / sigma[y] * (1.0 + delta[y])
                    delta[x] += c
                    edge_bc[edge_ids[k]] += c
            if y != s:
                node_bc[y] += delta[y]
    return node_bc / 2.0, edge_bc / 2.0


@jit
def _tree_walk(m, n, bi, bj, root):
    """BFS over the basis spanning tree of the bipartite row/column graph.

    Nodes ``0..m-1`` are rows, ``m..m+n-1`` columns. Returns visiting order,
    parent node and the basis cell linking each node to its parent.
    """
    nn = m + n
    nb = len(bi)
    deg = np.zeros(nn + 1, dtype=np.int64)
    for k in range(nb):
        deg[bi[k] + 1] += 1
        deg[m + bj[k] + 1] += 1
    for i in range(nn):
        deg[i + 1] += deg[i]
    fill = deg[:-1].copy()
    adj_node = np.empty(2 * nb, dtype=np.int64)
    adj_cell = np.empty(2 * nb, dtype=np.int64)
    for k in range(nb):
        r = bi[k]
        c = m + bj[k]
        adj_node[fill[r]] = c
        adj_cell[fill[r]] = k
        fill[r] += 1
        adj_node[fill[c]] = r
        adj_cell[fill[c]] = k
        fill[c] += 1
    parent = np.full(nn, -1, dtype=np.int64)
    pcell = np.full(nn, -1, dtype=np.int64)
    order = np.empty(nn, dtype=np.int64)
    seen = np.zeros(nn, dtype=np.bool_)
    seen[root] = True
    order[0] = root
    head = 0
    tail = 1
    while head < tail:
        x = order[head]
        head += 1
        for t in range(deg[x], deg[x + 1]):
            y = adj_node[t]
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                pcell[y] = adj_cell[t]
                order[tail] = y
                tail += 1
    return order, parent, pcell, tail


@jit
def transport_simplex(a, b, C, tol, max_iter):
    """Exact balanced transportation problem by the primal (MODI) simplex.

    Starts from the north-west corner basis and pivots with Bland's rule
    (first improving cell in row-major order, lowest-index leaving cell),
    which terminates on degenerate instances.

    Returns ``(cost, plan, iterations)``; ``iterations == -1`` signals that
    ``max_iter`` was exhausted.
    """
    m, n = C.shape
    nb = m + n - 1
    bi = np.empty(nb, dtype=np.int64)
    bj = np.empty(nb, dtype=np.int64)
    x = np.zeros(nb)
    ra = a.copy()
    rb = b.copy()
    i = 0
    j = 0
    for k in range(nb):
        bi[k] = i
        bj[k] = j
        q = min(ra[i], rb[j])
        x[k] = q
        ra[i] -= q
        rb[j] -= q
        if k == nb - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif ra[i] <= rb[j]:
            i += 1
        else:
            j += 1

    is_basic = np.zeros((m, n), dtype=np.bool_)
    for k in range(nb):
        is_basic[bi[k], bj[k]] = True
    pot = np.zeros(m + n)
    it = 0
    while True:
        if it >= max_iter:
            it = -1
            break
        order, parent, pcell, reached = _tree_walk(m, n, bi, bj, 0)
        pot[0] = 0.0
        for t in range(1, reached):
            y = order[t]
            k = pcell[y]
            # u_i + v_j = C[i, j] on basic cells
            pot[y] = C[bi[k], bj[k]] - pot[parent[y]]
        ei = -1
        ej = -1
        for r in range(m):
            for c in range(n):
                if is_basic[r, c]:
                    continue
                if C[r, c] - pot[r] - pot[m + c] < -tol:
                    ei = r
                    ej = c
                    break
            if ei >= 0:
                break
        if ei < 0:
            break
        # cycle: entering cell, then the tree path from column ej back to row ei
        order, parent, pcell, reached = _tree_walk(m, n, bi, bj, ei)
        y = m + ej
        sign = -1
        theta = np.inf
        leave = -1
        while y != ei:
            k = pcell[y]
            if sign < 0:
                if x[k] < theta or (x[k] == theta and bi[k] * n + bj[k] < bi[leave] * n + bj[leave]):
                    theta = x[k]
                    leave = k
            sign = -sign
            y = parent[y]
        y = m + ej
        sign = -1
        while y != ei:
            k = pcell[y]
            if sign < 0:
                x[k] -= theta
            else:
                x[k] += theta
            sign = -sign
            y = parent[y]
        is_basic[bi[leave], bj[leave]] = False
        is_basic[ei, ej] = True
        bi[leave] = ei
        bj[leave] = ej
        x[leave] = theta
        it += 1

    plan = np.zeros((m, n))
    cost = 0.0
    for k in range(nb):
        plan[bi[k], bj[k]] += x[k]
        cost += x[k] * C[bi[k], bj[k]]
    return cost, plan, it
