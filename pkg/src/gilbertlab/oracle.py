"""Exact probabilities on small fixed configurations by exhaustive enumeration.

For a fixture of at most 14 fixed points the crossing probability and the
pivotality probabilities are polynomials in (p, q); this module evaluates
them exactly (up to float rounding) by summing over all site subsets and,
within each, all enhancement subsets of the configured centers. Sums are
accumulated with math.fsum, so the result is the correctly rounded double
regardless of term order.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import FixtureCapError, InvalidParameterError
from .geom_graph import build_graph
from .percolation import _check_prob

__all__ = [
    "ENUMERATION_CAP",
    "ExactWindow",
    "exact_crossing_probability",
    "exact_pivotal",
    "exact_derivative",
    "bridge_fixture",
    "read_fixture_csv",
]

ENUMERATION_CAP = 14


def _as_points(points) -> np.ndarray:
    pts = np.asarray(getattr(points, "points", points), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidParameterError("fixture points must be an (n, 2) array")
    if not np.isfinite(pts).all():
        raise InvalidParameterError("fixture points must be finite")
    return pts


class ExactWindow:
    """Enumeration engine for one fixture and one window size.

    Vertices are clipped to the open window disc up front; anything at
    distance >= n cannot take part in the windowed crossing event.
    """

    def __init__(self, points, n: float, radius: float = 1.0):
        if not (np.isfinite(n) and n > 0.5):
            raise InvalidParameterError("window size n must be finite and > 0.5")
        pts = _as_points(points)
        d = np.hypot(pts[:, 0], pts[:, 1])
        pts = pts[d < n]
        if len(pts) > ENUMERATION_CAP:
            raise FixtureCapError(
                f"exact enumeration is capped at {ENUMERATION_CAP} in-window vertices, "
                f"got {len(pts)}"
            )
        self.n = float(n)
        self.graph = build_graph(pts, radius=radius)
        g = self.graph
        self.adj = [0] * g.n
        for v in range(g.n):
            for u in g.neighbors(v):
                self.adj[v] |= 1 << int(u)
        d = g.origin_dist
        self.src_mask = sum(1 << int(v) for v in np.flatnonzero(d < 0.5))
        self.tgt_mask = sum(1 << int(v) for v in np.flatnonzero((d >= n - 0.5) & (d < n)))
        # color-free bow-tie scan: vertex bit plus the mask of its four neighbors
        from .enhancement import bowtie_pattern

        elig, nb4, _ = bowtie_pattern(g)
        self.eligible = [
            (1 << int(v), sum(1 << int(u) for u in nb4[v])) for v in np.flatnonzero(elig)
        ]
        self._cross_memo: dict[int, bool] = {}

    def crossing(self, coloured_mask: int) -> bool:
        """Windowed crossing indicator for a coloured-vertex bitmask."""
        hit = self._cross_memo.get(coloured_mask)
        if hit is not None:
            return hit
        col = coloured_mask
        reach = col & self.src_mask
        out = False
        if reach and col & self.tgt_mask:
            while True:
                grow = reach
                m = reach
                while m:
                    b = m & -m
                    grow |= self.adj[b.bit_length() - 1] & col
                    m ^= b
                if grow == reach:
                    break
                reach = grow
            out = bool(reach & self.tgt_mask)
        self._cross_memo[coloured_mask] = out
        return out

    def configured(self, red_mask: int) -> int:
        """Bitmask of correctly configured centers for a red bitmask."""
        cfg = 0
        for bit, nbm in self.eligible:
            if not red_mask & bit and red_mask & nbm == nbm:
                cfg |= bit
        return cfg

    @staticmethod
    def _bits(mask: int) -> list[int]:
        out = []
        while mask:
            b = mask & -mask
            out.append(b)
            mask ^= b
        return out

    def crossing_probability(self, p: float, q: float, order: str = "forward") -> float:
        p = _check_prob(p, "p")
        q = _check_prob(q, "q")
        if order not in ("forward", "reverse"):
            raise InvalidParameterError("order must be 'forward' or 'reverse'")
        nv = self.graph.n
        if nv == 0:
            return 0.0
        terms = []
        reds = range(1 << nv) if order == "forward" else range((1 << nv) - 1, -1, -1)
        for red in reds:
            wr = p ** red.bit_count() * (1.0 - p) ** (nv - red.bit_count())
            if wr == 0.0:
                continue
            cfg_bits = self._bits(self.configured(red))
            k = len(cfg_bits)
            subs = range(1 << k) if order == "forward" else range((1 << k) - 1, -1, -1)
            for sub in subs:
                greens = 0
                for i in range(k):
                    if sub >> i & 1:
                        greens |= cfg_bits[i]
                if self.crossing(red | greens):
                    terms.append(wr * q ** sub.bit_count() * (1.0 - q) ** (k - sub.bit_count()))
        return math.fsum(terms)

    def pivotal_probability(self, v0: int, kind: int, p: float, q: float) -> float:
        """Pivotality probability for vertex v0 under shared companion marks.

        kind 1 compares v0 forced red against v0 forced closed (its own
        enhancement mark is shared between the two scenarios). kind 2
        compares v0's enhancement mark forced low (green whenever
        configured) against forced high (never green); the closed-center
        requirement carries the (1 - p) weight.
        """
        p = _check_prob(p, "p")
        q = _check_prob(q, "q")
        if kind not in (1, 2):
            raise InvalidParameterError("pivotality kind must be 1 or 2")
        nv = self.graph.n
        if not (0 <= v0 < nv):
            raise InvalidParameterError("pivot vertex index out of range")
        bit0 = 1 << v0
        others = [1 << v for v in range(nv) if v != v0]
        terms = []
        for sub in range(1 << (nv - 1)):
            red = 0
            for i in range(nv - 1):
                if sub >> i & 1:
                    red |= others[i]
            wr = p ** sub.bit_count() * (1.0 - p) ** (nv - 1 - sub.bit_count())
            if wr == 0.0:
                continue
            if kind == 1:
                cfg_t = self.configured(red | bit0)
                cfg_f = self.configured(red)
                union_bits = self._bits(cfg_t | cfg_f)
                k = len(union_bits)
                for low in range(1 << k):
                    lowmask = 0
                    for i in range(k):
                        if low >> i & 1:
                            lowmask |= union_bits[i]
                    wz = q ** low.bit_count() * (1.0 - q) ** (k - low.bit_count())
                    if wz == 0.0:
                        continue
                    col_t = red | bit0 | (lowmask & cfg_t)
                    col_f = red | (lowmask & cfg_f)
                    if self.crossing(col_t) != self.crossing(col_f):
                        terms.append(wr * wz)
            else:
                cfg = self.configured(red)
                if not cfg & bit0:
                    continue
                other_bits = self._bits(cfg & ~bit0)
                k = len(other_bits)
                for low in range(1 << k):
                    lowmask = 0
                    for i in range(k):
                        if low >> i & 1:
                            lowmask |= other_bits[i]
                    wz = q ** low.bit_count() * (1.0 - q) ** (k - low.bit_count())
                    if wz == 0.0:
                        continue
                    base = red | lowmask
                    if self.crossing(base | bit0) != self.crossing(base):
                        terms.append(wr * (1.0 - p) * wz)
        return math.fsum(terms)


def exact_crossing_probability(points, p: float, q: float, n: float, *, order: str = "forward") -> float:
    """Exact windowed crossing probability for a fixed point configuration."""
    return ExactWindow(points, n).crossing_probability(p, q, order=order)


def exact_pivotal(points, location, kind: int, p: float, q: float, n: float) -> float:
    """Exact pivotality probability for a point inserted at ``location``.

    The inserted vertex joins the fixture (total capped at 14 in-window
    vertices); if the location falls outside the window the answer is 0.
    """
    pts = _as_points(points)
    loc = np.asarray(location, dtype=np.float64).reshape(2)
    if not np.isfinite(loc).all():
        raise InvalidParameterError("insertion location must be finite")
    if math.hypot(loc[0], loc[1]) >= n:
        return 0.0
    full = np.vstack([pts, loc[None, :]])
    win = ExactWindow(full, n)
    # the inserted point survives clipping, and clipping preserves order,
    # so it is the last vertex of the window graph
    return win.pivotal_probability(win.graph.n - 1, kind, p, q)


def exact_derivative(points, p: float, q: float, n: float, kind: int) -> float:
    """Exact partial derivative of the fixture crossing probability.

    Differentiating the enumeration in p (kind 1) or q (kind 2) yields a
    sum over vertices of leave-one-out pivotality probabilities; this is
    the finite fixture analogue of the derivative formula the Monte Carlo
    check targets.
    """
    pts = _as_points(points)
    total = [
        exact_pivotal(np.delete(pts, j, axis=0), pts[j], kind, p, q, n)
        for j in range(len(pts))
    ]
    return math.fsum(total)


def bridge_fixture() -> tuple[np.ndarray, float]:
    """Eight-point probe configuration and its window size.

    A source point sits near the origin and a target point in the annulus
    of the n = 4 window. The only route between them passes through a hub
    whose four neighbors form two tight pairs, so the hub is the unique
    cut vertex and is bow-tie eligible. One extra point gives a pair
    member degree four with a non-matching neighborhood, exercising the
    eligibility test's negative branch.
    """
    pts = np.array(
        [
            [0.30, 0.00],   # source, distance 0.3
            [0.95, -0.10],  # first tight pair
            [0.95, 0.10],
            [1.80, 0.00],   # hub: exactly the pair vertices as neighbors
            [2.65, -0.10],  # second tight pair
            [2.65, 0.10],
            [3.00, -0.90],  # decoy: lifts one pair vertex to degree four
            [3.55, 0.00],   # target, inside [3.5, 4)
        ]
    )
    return pts, 4.0


def read_fixture_csv(path) -> np.ndarray:
    """Read fixture positions from a points CSV (marks, if present, ignored)."""
    rows = []
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header not in ("index,x,y", "index,x,y,Y,Z"):
            raise InvalidParameterError(
                f"expected fixture header 'index,x,y[,Y,Z]', got {header!r}"
            )
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            rows.append((float(parts[1]), float(parts[2])))
    return np.asarray(rows, dtype=np.float64).reshape(-1, 2)
