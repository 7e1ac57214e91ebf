"""Bow-tie enhancement of the site process.

A vertex is correctly configured when it is closed, has exactly four graph
neighbors, all four are red, and the induced subgraph on those neighbors is
exactly a two-edge perfect matching (two tight pairs, no other edges). A
configured center turns green when its z mark is < q; coloured means red or
green. Configured status depends only on site states, so enhancement is a
single pass after coloring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidParameterError
from .geom_graph import GilbertGraph, build_graph
from .percolation import SiteState, _check_prob, crossing_occurs
from .point_process import MarkedPointSet

__all__ = [
    "BowTieWitness",
    "EnhancedColoring",
    "bowtie_pattern",
    "configured_centers",
    "correctly_configured",
    "coloured_from_marks",
    "enhance",
    "crossing_event",
    "crossing_event_marks",
    "write_coloring_csv",
    "read_coloring_csv",
]

STATE_CLOSED = 0
STATE_RED = 1
STATE_GREEN = 2
_STATE_CHARS = {STATE_CLOSED: "C", STATE_RED: "R", STATE_GREEN: "G"}


@dataclass(frozen=True)
class BowTieWitness:
    """Evidence that a center is correctly configured.

    Pairs are the two matched neighbor pairs; the first pair is anchored by
    the center's lowest-index neighbor and each pair is sorted ascending.
    """

    center: int
    first_pair: tuple[int, int]
    second_pair: tuple[int, int]

    @property
    def neighbors(self) -> tuple[int, int, int, int]:
        return self.first_pair + self.second_pair


def bowtie_pattern(graph: GilbertGraph):
    """Color-free pattern scan: (eligible, nb4, partner0) arrays.

    eligible[v] is 1 when v has exactly four neighbors forming an induced
    two-edge matching; nb4 rows hold those neighbors sorted ascending and
    partner0 the position (1..3) matched with nb4[v, 0].
    """
    return _kernels.eligible_mask(
        graph.indptr, graph.indices, graph.points, graph.radius * graph.radius
    )


def _witness_from_row(center: int, nb4_row: np.ndarray, partner0: int) -> BowTieWitness:
    mate = int(nb4_row[partner0])
    first = (int(nb4_row[0]), mate)
    rest = sorted(int(u) for k, u in enumerate(nb4_row) if k not in (0, partner0))
    return BowTieWitness(center=int(center), first_pair=first, second_pair=(rest[0], rest[1]))


def configured_centers(graph: GilbertGraph, red: np.ndarray, pattern=None) -> np.ndarray:
    """Boolean mask of correctly configured centers for a red coloring."""
    elig, nb4, _ = pattern if pattern is not None else bowtie_pattern(graph)
    red = np.asarray(red, dtype=bool)
    cfg = np.zeros(graph.n, dtype=bool)
    idx = np.flatnonzero(elig)
    if len(idx):
        cfg[idx] = ~red[idx] & red[nb4[idx]].all(axis=1)
    return cfg


def correctly_configured(graph: GilbertGraph, site: SiteState, v: int) -> BowTieWitness | None:
    """Single-vertex configuration query; returns the witness or None."""
    if not (0 <= v < graph.n):
        raise InvalidParameterError("vertex index out of range")
    if site.red[v]:
        return None
    nb = graph.neighbors(v)
    if len(nb) != 4 or not site.red[nb].all():
        return None
    r2 = graph.radius * graph.radius
    pts = graph.points
    bits = []
    for a in range(4):
        for b in range(a + 1, 4):
            d = pts[nb[a]] - pts[nb[b]]
            bits.append(bool(d[0] * d[0] + d[1] * d[1] <= r2))
    ab, ac, ad, bc, bd, cd = bits
    if sum(bits) != 2:
        return None
    if ab and cd:
        partner = 1
    elif ac and bd:
        partner = 2
    elif ad and bc:
        partner = 3
    else:
        return None
    return _witness_from_row(v, np.asarray(nb), partner)


def coloured_from_marks(graph, y, z, p, q, pattern=None):
    """Fast path: (coloured, red, green) boolean masks from raw marks."""
    red = np.asarray(y, dtype=np.float64) < p
    elig, nb4, _ = pattern if pattern is not None else bowtie_pattern(graph)
    green = np.zeros(graph.n, dtype=bool)
    idx = np.flatnonzero(elig)
    if len(idx):
        z = np.asarray(z, dtype=np.float64)
        green[idx] = ~red[idx] & red[nb4[idx]].all(axis=1) & (z[idx] < q)
    return red | green, red, green


@dataclass(frozen=True)
class EnhancedColoring:
    """Joint site+enhancement state with a witness for every green vertex."""

    p: float
    q: float
    state: np.ndarray  # int8 per vertex: 0 closed, 1 red, 2 green
    witnesses: dict = field(default_factory=dict)  # green vertex -> BowTieWitness

    def __post_init__(self):
        self.state.flags.writeable = False

    @property
    def red(self) -> np.ndarray:
        return self.state == STATE_RED

    @property
    def green(self) -> np.ndarray:
        return self.state == STATE_GREEN

    @property
    def coloured(self) -> np.ndarray:
        return self.state != STATE_CLOSED


def enhance(graph: GilbertGraph, points: MarkedPointSet, p: float, q: float) -> EnhancedColoring:
    """Color sites at p, then green each configured center whose z < q."""
    p = _check_prob(p, "p")
    q = _check_prob(q, "q")
    if graph.n != points.n:
        raise InvalidParameterError("graph and point set disagree on vertex count")
    pattern = bowtie_pattern(graph)
    _, red, green = coloured_from_marks(graph, points.y, points.z, p, q, pattern)
    state = np.zeros(graph.n, dtype=np.int8)
    state[red] = STATE_RED
    state[green] = STATE_GREEN
    elig, nb4, partner0 = pattern
    witnesses = {
        int(v): _witness_from_row(v, nb4[v], int(partner0[v])) for v in np.flatnonzero(green)
    }
    return EnhancedColoring(p=p, q=q, state=state, witnesses=witnesses)


def crossing_event_marks(graph: GilbertGraph, y, z, p, q, n, pattern=None) -> bool:
    """Crossing event on a graph already restricted to the window disc."""
    coloured, _, _ = coloured_from_marks(graph, y, z, p, q, pattern)
    return crossing_occurs(graph, coloured, n)


def crossing_event(points: MarkedPointSet, p: float, q: float, n: float, *, clip: bool = True) -> bool:
    """Window-crossing event for the enhanced process at (p, q).

    With clip=True (the default, matching the windowed event definition) the
    point set is first restricted to the open disc of radius n, so vertices
    outside the window influence nothing. clip=False is the exploratory
    full-plane variant: enhancement statuses see the whole point set, while
    the crossing path itself is still confined to the window.
    """
    p = _check_prob(p, "p")
    q = _check_prob(q, "q")
    if not (np.isfinite(n) and n > 0.5):
        raise InvalidParameterError("window size n must be finite and > 0.5")
    d = points.distances()
    if clip:
        inside = d < n
        if inside.all():
            graph = build_graph(points.points)
            y, z = points.y, points.z
        else:
            graph = build_graph(points.points[inside])
            y, z = points.y[inside], points.z[inside]
        if graph.n == 0:
            return False
        return crossing_event_marks(graph, y, z, p, q, n)
    graph = build_graph(points.points)
    if graph.n == 0:
        return False
    coloured, _, _ = coloured_from_marks(graph, points.y, points.z, p, q)
    return crossing_occurs(graph, coloured & (d < n), n)


def write_coloring_csv(path, coloring: EnhancedColoring) -> None:
    """Write ``index,state`` rows with states R, G or C."""
    with open(path, "w", newline="") as fh:
        fh.write("index,state\n")
        for i, s in enumerate(coloring.state):
            fh.write(f"{i},{_STATE_CHARS[int(s)]}\n")


def read_coloring_csv(path) -> np.ndarray:
    chars = {"C": STATE_CLOSED, "R": STATE_RED, "G": STATE_GREEN}
    states = []
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != "index,state":
            raise InvalidParameterError(f"expected header 'index,state', got {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            _, s = line.split(",")
            states.append(chars[s])
    return np.asarray(states, dtype=np.int8)
