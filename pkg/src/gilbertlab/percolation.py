"""Site and bond percolation states plus window-crossing events.

The crossing event of window size n asks for a path of coloured vertices,
inside the graph restricted to the open disc of radius n, from a coloured
vertex at distance < 0.5 to a coloured vertex in the boundary annulus
[n - 0.5, n). The relaxed variant only requires reaching distance > n - 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidParameterError
from .geom_graph import GilbertGraph
from .point_process import Annulus, Disk, MarkedPointSet, StreamSpec

__all__ = [
    "SiteState",
    "BondState",
    "CrossingSpec",
    "color_sites",
    "open_bonds",
    "crossing_occurs",
    "crossing_prime_occurs",
    "bond_crossing_occurs",
    "source_mask",
    "target_mask",
]


def _check_prob(value: float, name: str) -> float:
    if not (np.isfinite(value) and 0.0 <= value <= 1.0):
        raise InvalidParameterError(f"{name} must lie in [0, 1]")
    return float(value)


@dataclass(frozen=True)
class SiteState:
    """Site occupation at parameter p: red iff the vertex mark is < p."""

    p: float
    red: np.ndarray  # (n,) bool

    def __post_init__(self):
        self.red.flags.writeable = False

    @property
    def closed(self) -> np.ndarray:
        return ~self.red


def color_sites(points, p: float) -> SiteState:
    """Color vertices red where y < p (strict). Accepts a MarkedPointSet or
    a raw array of y marks."""
    p = _check_prob(p, "p")
    y = points.y if isinstance(points, MarkedPointSet) else np.asarray(points, dtype=np.float64)
    return SiteState(p=p, red=np.ascontiguousarray(y < p))


@dataclass(frozen=True)
class BondState:
    """Bond occupation at parameter p: edge open iff its mark is < p."""

    p: float
    open: np.ndarray  # (m,) bool

    def __post_init__(self):
        self.open.flags.writeable = False


def edge_marks(graph: GilbertGraph, stream: StreamSpec) -> np.ndarray:
    """Uniform edge marks indexed by canonical edge index, drawn from a
    dedicated stream (never stored on the point set)."""
    return stream.generator().uniform(size=graph.m)


def open_bonds(graph: GilbertGraph, p: float, stream: StreamSpec) -> BondState:
    """Open each edge independently where its stream mark is < p."""
    p = _check_prob(p, "p")
    return BondState(p=p, open=np.ascontiguousarray(edge_marks(graph, stream) < p))


@dataclass(frozen=True)
class CrossingSpec:
    """Window geometry of the crossing event for boundary radius n."""

    n: float

    def __post_init__(self):
        if not (np.isfinite(self.n) and self.n > 0.5):
            raise InvalidParameterError("window size n must be finite and > 0.5")

    @property
    def window(self) -> Disk:
        return Disk((0.0, 0.0), self.n)

    @property
    def source(self) -> Disk:
        return Disk((0.0, 0.0), 0.5)

    @property
    def target(self) -> Annulus:
        return Annulus((0.0, 0.0), self.n - 0.5, self.n)


def _spec(n_or_spec) -> CrossingSpec:
    if isinstance(n_or_spec, CrossingSpec):
        return n_or_spec
    return CrossingSpec(float(n_or_spec))


def source_mask(graph: GilbertGraph, n_or_spec) -> np.ndarray:
    _spec(n_or_spec)
    return graph.origin_dist < 0.5


def target_mask(graph: GilbertGraph, n_or_spec) -> np.ndarray:
    spec = _spec(n_or_spec)
    d = graph.origin_dist
    return (d >= spec.n - 0.5) & (d < spec.n)


def _coloured_mask(graph: GilbertGraph, coloured) -> np.ndarray:
    mask = np.asarray(coloured)
    if mask.shape != (graph.n,):
        raise InvalidParameterError("coloured predicate must have one entry per vertex")
    return mask.astype(bool).astype(np.uint8) if mask.dtype != np.uint8 else mask


def crossing_occurs(graph: GilbertGraph, coloured, n_or_spec) -> bool:
    """Coloured path from the source disc to the boundary annulus.

    Callers are expected to pass a graph restricted to the open window disc;
    target membership enforces both annulus bounds either way.
    """
    spec = _spec(n_or_spec)
    allowed = _coloured_mask(graph, coloured)
    src = source_mask(graph, spec).astype(np.uint8)
    tgt = target_mask(graph, spec).astype(np.uint8)
    return _kernels.bfs_hits(graph.indptr, graph.indices, graph.adj_edge, allowed, src, tgt)


def crossing_prime_occurs(graph: GilbertGraph, coloured, n: float) -> bool:
    """Relaxed crossing: reach a coloured vertex at distance > n - 2."""
    spec = _spec(n)
    if spec.n <= 2.0:
        raise InvalidParameterError("relaxed crossing needs n > 2")
    allowed = _coloured_mask(graph, coloured)
    src = source_mask(graph, spec).astype(np.uint8)
    tgt = (graph.origin_dist > spec.n - 2.0).astype(np.uint8)
    return _kernels.bfs_hits(graph.indptr, graph.indices, graph.adj_edge, allowed, src, tgt)


def bond_crossing_occurs(graph: GilbertGraph, bonds, n_or_spec) -> bool:
    """Crossing through open edges with every vertex present (bond model)."""
    spec = _spec(n_or_spec)
    open_mask = bonds.open if isinstance(bonds, BondState) else np.asarray(bonds)
    if open_mask.shape != (graph.m,):
        raise InvalidParameterError("bond state must have one entry per edge")
    open_u8 = open_mask.astype(bool).astype(np.uint8)
    allowed = np.ones(graph.n, dtype=np.uint8)
    src = source_mask(graph, spec).astype(np.uint8)
    tgt = target_mask(graph, spec).astype(np.uint8)
    return _kernels.bfs_hits(
        graph.indptr, graph.indices, graph.adj_edge, allowed, src, tgt, open_u8
    )
