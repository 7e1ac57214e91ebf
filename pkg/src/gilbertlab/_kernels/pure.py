"""Pure-Python/numpy reference implementations of the hot kernels.

The compiled extension (`gilbertlab._ckern`) mirrors every function here with
identical signatures and output dtypes; tests assert element-level agreement.
Adjacency is CSR (indptr, indices) with neighbor lists sorted ascending, and
`adj_edge` maps each adjacency slot to its canonical edge index.
"""

from __future__ import annotations

import heapq

import numpy as np

NAME = "pure"


def build_edges(xy: np.ndarray, radius: float):
    """All pairs at Euclidean distance <= radius, as canonical (i < j) edges
    sorted lexicographically. Cell-list search with cell side = radius."""
    xy = np.ascontiguousarray(np.asarray(xy, dtype=np.float64).reshape(-1, 2))
    n = xy.shape[0]
    empty = np.empty(0, dtype=np.int64)
    if n < 2 or radius <= 0:
        return empty, empty
    r2 = float(radius) * float(radius)
    cell = np.floor(xy / float(radius)).astype(np.int64)
    order = np.lexsort((cell[:, 1], cell[:, 0]))
    sc = cell[order]
    change = np.flatnonzero(np.any(sc[1:] != sc[:-1], axis=1)) + 1
    starts = np.concatenate(([0], change, [n]))
    cells = {}
    for b in range(len(starts) - 1):
        s, e = starts[b], starts[b + 1]
        cells[(int(sc[s, 0]), int(sc[s, 1]))] = order[s:e]
    ei_parts, ej_parts = [], []
    for (a, b), members in cells.items():
        blocks = [
            cells.get((a + da, b + db))
            for da in (-1, 0, 1)
            for db in (-1, 0, 1)
        ]
        cand = np.concatenate([blk for blk in blocks if blk is not None])
        for i in members:
            js = cand[cand > i]
            if js.size == 0:
                continue
            d = xy[js] - xy[i]
            hit = js[d[:, 0] ** 2 + d[:, 1] ** 2 <= r2]
            if hit.size:
                ei_parts.append(np.full(hit.size, i, dtype=np.int64))
                ej_parts.append(hit.astype(np.int64))
    if not ei_parts:
        return empty, empty
    ei = np.concatenate(ei_parts)
    ej = np.concatenate(ej_parts)
    order = np.lexsort((ej, ei))
    return np.ascontiguousarray(ei[order]), np.ascontiguousarray(ej[order])


class _UnionFind:
    """Array union-find; the smaller root index wins, so roots are canonical."""

    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return int(a)

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def bfs_hits(indptr, indices, adj_edge, allowed, src, tgt, edge_open=None) -> bool:
    """True iff some allowed source vertex reaches an allowed target vertex
    through allowed vertices (and open edges, when edge_open is given)."""
    n = len(indptr) - 1
    allowed = np.asarray(allowed, dtype=np.uint8)
    src = np.asarray(src, dtype=np.uint8)
    tgt = np.asarray(tgt, dtype=np.uint8)
    visited = np.zeros(n, dtype=bool)
    queue = [int(v) for v in np.flatnonzero(allowed.astype(bool) & src.astype(bool))]
    for v in queue:
        if tgt[v]:
            return True
        visited[v] = True
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if visited[u] or not allowed[u]:
                continue
            if edge_open is not None and not edge_open[adj_edge[k]]:
                continue
            if tgt[u]:
                return True
            visited[u] = True
            queue.append(int(u))
    return False


def label_active(indptr, indices, adj_edge, v_active, e_active=None) -> np.ndarray:
    """Component labels over active vertices/edges; -1 marks inactive.

    Labels are assigned 0, 1, ... in order of each component's smallest
    vertex, so the labeling is canonical."""
    n = len(indptr) - 1
    v_active = np.asarray(v_active, dtype=np.uint8)
    labels = np.full(n, -1, dtype=np.int64)
    next_label = 0
    for start in range(n):
        if not v_active[start] or labels[start] >= 0:
            continue
        labels[start] = next_label
        queue = [start]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if labels[u] >= 0 or not v_active[u]:
                    continue
                if e_active is not None and not e_active[adj_edge[k]]:
                    continue
                labels[u] = next_label
                queue.append(int(u))
        next_label += 1
    return labels


def eligible_mask(indptr, indices, xy, r2: float):
    """Color-free bow-tie pattern test for every vertex.

    A vertex is eligible when it has exactly four neighbors whose induced
    subgraph is exactly a two-edge perfect matching. Returns (mask, nb4,
    partner0): nb4 holds the four neighbors sorted ascending (-1 elsewhere)
    and partner0 the position in {1,2,3} of the neighbor paired with nb4[0]."""
    n = len(indptr) - 1
    xy = np.asarray(xy, dtype=np.float64)
    mask = np.zeros(n, dtype=np.uint8)
    nb4 = np.full((n, 4), -1, dtype=np.int64)
    partner0 = np.zeros(n, dtype=np.int8)
    for v in range(n):
        lo, hi = indptr[v], indptr[v + 1]
        if hi - lo != 4:
            continue
        nb = indices[lo:hi]
        bits = []
        for a in range(4):
            for b in range(a + 1, 4):
                d = xy[nb[a]] - xy[nb[b]]
                bits.append(d[0] * d[0] + d[1] * d[1] <= r2)
        ab, ac, ad, bc, bd, cd = bits
        if sum(bits) != 2:
            continue
        if ab and cd:
            part = 1
        elif ac and bd:
            part = 2
        elif ad and bc:
            part = 3
        else:
            continue
        mask[v] = 1
        nb4[v] = nb
        partner0[v] = part
    return mask, nb4, partner0


def site_threshold(indptr, indices, t, order, src, tgt) -> float:
    """Smallest activation level at which a source vertex connects to a
    target vertex through vertices with value < level.

    Vertices are activated in the order given (ascending t); returns t of the
    completing vertex, or +inf when the sets never connect. Crossing holds at
    parameter p iff p > returned threshold."""
    n = len(indptr) - 1
    uf = _UnionFind(n + 2)
    hub_s, hub_t = n, n + 1
    active = np.zeros(n, dtype=bool)
    for v in order:
        v = int(v)
        active[v] = True
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if active[u]:
                uf.union(v, int(u))
        if src[v]:
            uf.union(v, hub_s)
        if tgt[v]:
            uf.union(v, hub_t)
        if uf.find(hub_s) == uf.find(hub_t):
            return float(t[v])
    return float("inf")


def bond_threshold(nv: int, ei, ej, x, order, src, tgt) -> float:
    """Bond analogue of site_threshold: all vertices present, edges added in
    ascending mark order; returns the completing edge's mark or +inf."""
    uf = _UnionFind(nv + 2)
    hub_s, hub_t = nv, nv + 1
    for v in np.flatnonzero(np.asarray(src, dtype=np.uint8)):
        uf.union(int(v), hub_s)
    for v in np.flatnonzero(np.asarray(tgt, dtype=np.uint8)):
        uf.union(int(v), hub_t)
    if uf.find(hub_s) == uf.find(hub_t):
        return float("-inf")
    for e in order:
        e = int(e)
        uf.union(int(ei[e]), int(ej[e]))
        if uf.find(hub_s) == uf.find(hub_t):
            return float(x[e])
    return float("inf")


def run_coupling_core(indptr, indices, adj_edge, x_open, z_open):
    """Frontier assignment of site states from bond and seed variables.

    While some unassigned vertex has an assigned-open (active) neighbor, the
    smallest such vertex y is assigned the bond variable of the earliest
    canonical edge from y to an active vertex, and that edge is marked
    examined. Otherwise the smallest unassigned vertex seeds a new cluster
    from its own z variable. Returns (y, prov_kind, prov_idx, examined,
    step): prov_kind 0 means z[v] was consumed, 1 means edge prov_idx."""
    n = len(indptr) - 1
    m = len(x_open)
    y = np.zeros(n, dtype=np.uint8)
    assigned = np.zeros(n, dtype=bool)
    prov_kind = np.zeros(n, dtype=np.uint8)
    prov_idx = np.full(n, -1, dtype=np.int64)
    examined = np.zeros(m, dtype=np.uint8)
    step = np.full(n, -1, dtype=np.int64)
    heap: list[int] = []
    scan = 0
    for step_i in range(n):
        while heap and assigned[heap[0]]:
            heapq.heappop(heap)
        if heap:
            v = heapq.heappop(heap)
            slot = -1
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if assigned[u] and y[u]:
                    slot = k
                    break
            e = int(adj_edge[slot])
            examined[e] = 1
            y[v] = x_open[e]
            prov_kind[v] = 1
            prov_idx[v] = e
        else:
            while assigned[scan]:
                scan += 1
            v = scan
            y[v] = z_open[v]
            prov_kind[v] = 0
            prov_idx[v] = v
        assigned[v] = True
        step[v] = step_i
        if y[v]:
            for k in range(indptr[v], indptr[v + 1]):
                u = int(indices[k])
                if not assigned[u]:
                    heapq.heappush(heap, u)
    return y, prov_kind, prov_idx, examined, step
