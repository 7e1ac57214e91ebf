"""Geometric graph construction and connectivity.

Vertices are point indices in canonical order; two vertices are adjacent
when their Euclidean distance is at most the connection radius (closed
inequality, compared in squared form). Edges are canonical: (i, j) with
i < j, listed in lexicographic order, and that listing position is the
edge's index everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidParameterError
from .point_process import MarkedPointSet

__all__ = [
    "GilbertGraph",
    "CellIndex",
    "DisjointSets",
    "build_cell_index",
    "build_graph",
    "components",
    "largest_component_fraction",
    "write_edges_csv",
]


@dataclass(frozen=True)
class CellIndex:
    """Uniform-grid spatial index with cell side equal to the query radius,
    so candidate neighbors of a point lie in its 3x3 cell block."""

    cell_size: float
    cells: dict  # (cx, cy) -> int64 array of point indices

    def block(self, cx: int, cy: int) -> np.ndarray:
        parts = [
            self.cells.get((cx + dx, cy + dy))
            for dx in (-1, 0, 1)
            for dy in (-1, 0, 1)
        ]
        parts = [p for p in parts if p is not None]
        if not parts:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(parts)


def build_cell_index(points: np.ndarray, cell_size: float) -> CellIndex:
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if not (np.isfinite(cell_size) and cell_size > 0):
        raise InvalidParameterError("cell_size must be finite and positive")
    cells: dict = {}
    if len(points):
        keys = np.floor(points / cell_size).astype(np.int64)
        order = np.lexsort((keys[:, 1], keys[:, 0]))
        sk = keys[order]
        change = np.flatnonzero(np.any(sk[1:] != sk[:-1], axis=1)) + 1
        starts = np.concatenate(([0], change, [len(points)]))
        for b in range(len(starts) - 1):
            s, e = starts[b], starts[b + 1]
            cells[(int(sk[s, 0]), int(sk[s, 1]))] = np.sort(order[s:e]).astype(np.int64)
    return CellIndex(float(cell_size), cells)


class DisjointSets:
    """Union-find over 0..n-1 with path halving; the smaller root wins,
    so roots are canonical component representatives."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return int(a)

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclass(frozen=True)
class GilbertGraph:
    """Immutable geometric graph over a fixed point array.

    adjacency is CSR (indptr, indices) with each neighbor list sorted
    ascending; adj_edge maps adjacency slots to canonical edge indices;
    origin_dist caches each vertex's distance from the origin.
    """

    points: np.ndarray  # (n, 2)
    indptr: np.ndarray  # (n + 1,)
    indices: np.ndarray  # (2m,)
    adj_edge: np.ndarray  # (2m,)
    edges: np.ndarray  # (m, 2) with edges[k, 0] < edges[k, 1]
    radius: float
    origin_dist: np.ndarray  # (n,)

    def __post_init__(self):
        for name in ("points", "indptr", "indices", "adj_edge", "edges", "origin_dist"):
            arr = getattr(self, name)
            arr.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edge_id(self, u: int, v: int) -> int:
        """Canonical index of edge {u, v}; -1 when not adjacent."""
        row = self.indices[self.indptr[u] : self.indptr[u + 1]]
        k = np.searchsorted(row, v)
        if k < len(row) and row[k] == v:
            return int(self.adj_edge[self.indptr[u] + k])
        return -1


def build_graph(points, radius: float = 1.0) -> GilbertGraph:
    """Build the Gilbert graph of a point set (default connection radius 1).

    Accepts a MarkedPointSet or a raw (n, 2) array. Expected cost is linear
    in points plus edges via a cell-list neighbor search.
    """
    if isinstance(points, MarkedPointSet):
        xy = points.points
    else:
        xy = np.ascontiguousarray(np.asarray(points, dtype=np.float64).reshape(-1, 2))
    if not (np.isfinite(radius) and radius > 0):
        raise InvalidParameterError("connection radius must be finite and positive")
    if len(xy) and not np.all(np.isfinite(xy)):
        raise InvalidParameterError("point coordinates must be finite")
    n = len(xy)
    ei, ej = _kernels.build_edges(xy, float(radius))
    m = len(ei)
    src = np.concatenate([ei, ej])
    dst = np.concatenate([ej, ei])
    eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2)
    order = np.lexsort((dst, src))
    indices = np.ascontiguousarray(dst[order])
    adj_edge = np.ascontiguousarray(eid[order])
    counts = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    edges = np.column_stack([ei, ej]) if m else np.empty((0, 2), dtype=np.int64)
    origin_dist = np.hypot(xy[:, 0], xy[:, 1]) if n else np.empty(0, dtype=np.float64)
    return GilbertGraph(
        points=xy,
        indptr=indptr,
        indices=indices,
        adj_edge=np.ascontiguousarray(adj_edge),
        edges=np.ascontiguousarray(edges),
        radius=float(radius),
        origin_dist=origin_dist,
    )


def _as_vertex_mask(graph: GilbertGraph, pred) -> np.ndarray:
    if pred is None:
        return np.ones(graph.n, dtype=np.uint8)
    mask = np.asarray(pred)
    if mask.dtype != np.uint8:
        mask = mask.astype(bool).astype(np.uint8)
    if mask.shape != (graph.n,):
        raise InvalidParameterError("vertex predicate must have one entry per vertex")
    return mask


def _as_edge_mask(graph: GilbertGraph, pred) -> np.ndarray | None:
    if pred is None:
        return None
    mask = np.asarray(pred)
    if mask.dtype != np.uint8:
        mask = mask.astype(bool).astype(np.uint8)
    if mask.shape != (graph.m,):
        raise InvalidParameterError("edge predicate must have one entry per edge")
    return mask


def components(graph: GilbertGraph, vertex_active=None, edge_active=None) -> np.ndarray:
    """Label connected components through active vertices and active edges.

    Returns one int label per vertex; inactive vertices get -1 ("none").
    Two vertices share a label iff they are joined by a path of active
    vertices whose consecutive pairs use active edges.
    """
    v_mask = _as_vertex_mask(graph, vertex_active)
    e_mask = _as_edge_mask(graph, edge_active)
    return _kernels.label_active(graph.indptr, graph.indices, graph.adj_edge, v_mask, e_mask)


def largest_component_fraction(labels: np.ndarray) -> float:
    """Largest component size over active vertex count; 0.0 when no vertex
    is active."""
    labels = np.asarray(labels)
    active = labels[labels >= 0]
    if len(active) == 0:
        return 0.0
    return float(np.bincount(active).max() / len(active))


def write_edges_csv(path, graph: GilbertGraph) -> None:
    """Write the canonical edge list as ``i,j`` rows."""
    with open(path, "w", newline="") as fh:
        fh.write("i,j\n")
        for i, j in graph.edges:
            fh.write(f"{int(i)},{int(j)}\n")
