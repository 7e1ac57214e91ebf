"""Pivotal-point probabilities and the derivative consistency check.

The window crossing probability, viewed as a function of the site level p
or the enhancement level q, has a derivative expressible as an integral of
pivotality probabilities over insertion locations. Both sides of that
identity are estimated here by Monte Carlo: the integral by inserting a
uniformly placed extra point and testing whether flipping its mark flips
the crossing event, the derivative by a central finite difference that
reuses one set of marks at both levels, so the difference indicator is 0
or 1 and never -1.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .enhancement import bowtie_pattern, coloured_from_marks
from .errors import InvalidParameterError
from .geom_graph import GilbertGraph, build_graph
from .percolation import _check_prob, crossing_occurs
from .point_process import Disk, MarkedPointSet, StreamSpec, canonical_order, sample_poisson

__all__ = [
    "InsertionTrial",
    "PivotalEstimate",
    "DerivativeCheck",
    "insert_point",
    "is_pivotal_1",
    "is_pivotal_2",
    "estimate_pivotal_integral",
    "finite_difference_theta",
    "russo_check",
    "pivotal_ratio_profile",
]


def _check_window(n: float) -> float:
    if not (np.isfinite(n) and n > 0.5):
        raise InvalidParameterError("window size n must be finite and > 0.5")
    return float(n)


# stream path components are integers; fixed labels for the two halves
_FD_SUBSTREAM = 0
_PIVOTAL_SUBSTREAM = 1


@dataclass(frozen=True)
class InsertionTrial:
    """One insertion experiment: where the point landed and what happened."""

    location: tuple[float, float]
    vertex: int
    n_points: int
    pivotal: bool


def insert_point(points: MarkedPointSet, location, y0: float, z0: float):
    """Insert one marked point, keeping canonical vertex order.

    Returns (positions, y, z, vertex index of the inserted point).
    """
    loc = np.asarray(location, dtype=np.float64).reshape(2)
    pts = np.vstack([points.points, loc[None, :]])
    y = np.append(points.y, y0)
    z = np.append(points.z, z0)
    order = canonical_order(pts)
    v0 = int(np.flatnonzero(order == points.n)[0])
    return pts[order], y[order], z[order], v0


def _crossing_at(graph, y, z, p, q, n, pattern):
    coloured, _, _ = coloured_from_marks(graph, y, z, p, q, pattern)
    return crossing_occurs(graph, coloured, n)


def is_pivotal_1(graph: GilbertGraph, y, z, v0: int, p: float, q: float, n: float,
                 pattern=None) -> bool:
    """Does forcing vertex v0 red versus closed flip the crossing event?

    The vertex's own enhancement mark z[v0] is kept at its sampled value in
    both scenarios, so only the site mark moves.
    """
    if pattern is None:
        pattern = bowtie_pattern(graph)
    y = np.array(y, dtype=np.float64, copy=True)
    y[v0] = 0.0
    hit_red = _crossing_at(graph, y, z, p, q, n, pattern)
    y[v0] = 1.0
    hit_closed = _crossing_at(graph, y, z, p, q, n, pattern)
    return hit_red != hit_closed


def is_pivotal_2(graph: GilbertGraph, y, z, v0: int, p: float, q: float, n: float,
                 pattern=None) -> bool:
    """Does forcing vertex v0's enhancement mark low versus high flip the event?

    Only closed centers can matter: when y[v0] < p the vertex is red either
    way and the answer is False without evaluating anything.
    """
    if y[v0] < p:
        return False
    if pattern is None:
        pattern = bowtie_pattern(graph)
    z = np.array(z, dtype=np.float64, copy=True)
    z[v0] = 0.0
    hit_low = _crossing_at(graph, y, z, p, q, n, pattern)
    z[v0] = 1.0
    hit_high = _crossing_at(graph, y, z, p, q, n, pattern)
    return hit_low != hit_high


def _pivotal_trial(trial: int, *, kind: int, p: float, q: float, n: float,
                   intensity: float, stream: StreamSpec) -> bool:
    st = stream.child(trial)
    base = sample_poisson(Disk((0.0, 0.0), n), intensity, st.child(0))
    rng = st.child(1).generator()
    r = n * math.sqrt(rng.random())
    ang = 2.0 * math.pi * rng.random()
    y0 = rng.random()
    z0 = rng.random()
    pts, y, zz, v0 = insert_point(base, (r * math.cos(ang), r * math.sin(ang)), y0, z0)
    graph = build_graph(pts)
    if kind == 1:
        return is_pivotal_1(graph, y, zz, v0, p, q, n)
    return is_pivotal_2(graph, y, zz, v0, p, q, n)


@dataclass(frozen=True)
class PivotalEstimate:
    """Monte Carlo estimate of an insertion-pivotality integral."""

    kind: int
    p: float
    q: float
    n: float
    intensity: float
    trials: int
    hits: int
    value: float
    se: float

    @property
    def frequency(self) -> float:
        return self.hits / self.trials


def estimate_pivotal_integral(kind: int, p: float, q: float, n: float, intensity: float,
                              trials: int, stream: StreamSpec,
                              workers: int | None = None) -> PivotalEstimate:
    """Estimate the window integral of the kind-1 or kind-2 pivotality density.

    Each trial draws a fresh configuration, inserts one extra point at a
    uniform window location, and tests pivotality; the integral equals the
    window measure (intensity times window area) times the hit frequency.
    """
    if kind not in (1, 2):
        raise InvalidParameterError("pivotality kind must be 1 or 2")
    p = _check_prob(p, "p")
    q = _check_prob(q, "q")
    n = _check_window(n)
    if not (np.isfinite(intensity) and intensity > 0):
        raise InvalidParameterError("intensity must be positive and finite")
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    fn = functools.partial(_pivotal_trial, kind=kind, p=p, q=q, n=n,
                           intensity=intensity, stream=stream)
    flags = pmap(fn, range(trials), workers=workers, chunksize=32)
    hits = int(sum(flags))
    freq = hits / trials
    measure = intensity * math.pi * n * n
    return PivotalEstimate(
        kind=kind, p=p, q=q, n=n, intensity=intensity, trials=trials, hits=hits,
        value=measure * freq,
        se=measure * math.sqrt(freq * (1.0 - freq) / trials),
    )


def _fd_trial(trial: int, *, wrt: str, p: float, q: float, h: float, n: float,
              intensity: float, stream: StreamSpec) -> int:
    base = sample_poisson(Disk((0.0, 0.0), n), intensity, stream.child(trial))
    graph = build_graph(base.points)
    if graph.n == 0:
        return 0
    pattern = bowtie_pattern(graph)
    if wrt == "p":
        lo = _crossing_at(graph, base.y, base.z, p - h, q, n, pattern)
        hi = _crossing_at(graph, base.y, base.z, p + h, q, n, pattern)
    else:
        lo = _crossing_at(graph, base.y, base.z, p, q - h, n, pattern)
        hi = _crossing_at(graph, base.y, base.z, p, q + h, n, pattern)
    return int(hi) - int(lo)


@dataclass(frozen=True)
class DerivativeCheck:
    """Finite-difference derivative against the pivotality integral."""

    wrt: str
    p: float
    q: float
    h: float
    n: float
    intensity: float
    fd_trials: int
    fd_value: float
    fd_se: float
    integral: PivotalEstimate
    tolerance_se: float

    @property
    def difference(self) -> float:
        return self.fd_value - self.integral.value

    @property
    def combined_se(self) -> float:
        return math.hypot(self.fd_se, self.integral.se)

    @property
    def z_score(self) -> float:
        se = self.combined_se
        return self.difference / se if se > 0 else math.inf if self.difference else 0.0

    @property
    def consistent(self) -> bool:
        return abs(self.difference) <= self.tolerance_se * self.combined_se


def finite_difference_theta(wrt: str, p: float, q: float, h: float, n: float,
                            intensity: float, trials: int, stream: StreamSpec,
                            workers: int | None = None) -> tuple[float, float]:
    """Central finite difference of the crossing probability, common marks.

    Because the two levels share one set of marks and the coloured set only
    grows with the level, each trial contributes 0 or 1; the estimate is the
    hit frequency over 2h with the matching binomial standard error.
    """
    if wrt not in ("p", "q"):
        raise InvalidParameterError("wrt must be 'p' or 'q'")
    p = _check_prob(p, "p")
    q = _check_prob(q, "q")
    n = _check_window(n)
    level = p if wrt == "p" else q
    if not (0.0 < h < min(level, 1.0 - level)):
        raise InvalidParameterError(
            f"step h must satisfy 0 < h < min({wrt}, 1 - {wrt})"
        )
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    fn = functools.partial(_fd_trial, wrt=wrt, p=p, q=q, h=h, n=n,
                           intensity=intensity, stream=stream)
    diffs = pmap(fn, range(trials), workers=workers, chunksize=32)
    freq = sum(diffs) / trials
    fd = freq / (2.0 * h)
    se = math.sqrt(freq * (1.0 - freq) / trials) / (2.0 * h)
    return fd, se


def russo_check(wrt: str, p: float, q: float, n: float, intensity: float, *,
                h: float = 0.05, fd_trials: int, pivotal_trials: int,
                stream: StreamSpec, tolerance_se: float = 3.0,
                workers: int | None = None) -> DerivativeCheck:
    """Compare the finite-difference derivative with the pivotality integral.

    wrt 'p' targets the site derivative via kind-1 pivotality, wrt 'q' the
    enhancement derivative via kind-2. The two estimates use disjoint
    substreams of the supplied stream.
    """
    kind = 1 if wrt == "p" else 2
    fd, fd_se = finite_difference_theta(
        wrt, p, q, h, n, intensity, fd_trials, stream.child(_FD_SUBSTREAM), workers=workers
    )
    integral = estimate_pivotal_integral(
        kind, p, q, n, intensity, pivotal_trials, stream.child(_PIVOTAL_SUBSTREAM),
        workers=workers,
    )
    return DerivativeCheck(
        wrt=wrt, p=p, q=q, h=h, n=n, intensity=intensity,
        fd_trials=fd_trials, fd_value=fd, fd_se=fd_se,
        integral=integral, tolerance_se=tolerance_se,
    )


def pivotal_ratio_profile(p_values, n: float, intensity: float, trials: int,
                          stream: StreamSpec, q_values=None,
                          workers: int | None = None) -> list[dict]:
    """Profile both pivotality integrals over a grid of site levels.

    q defaults to p squared at each grid point. Returns one row per level
    with both estimates and their ratio (nan when the kind-1 value is 0).
    """
    p_values = [float(v) for v in p_values]
    if q_values is None:
        q_values = [v * v for v in p_values]
    else:
        q_values = [float(v) for v in q_values]
    if len(q_values) != len(p_values):
        raise InvalidParameterError("q_values must match p_values in length")
    rows = []
    for k, (p, q) in enumerate(zip(p_values, q_values)):
        sub = stream.child(k)
        one = estimate_pivotal_integral(1, p, q, n, intensity, trials,
                                        sub.child(1), workers=workers)
        two = estimate_pivotal_integral(2, p, q, n, intensity, trials,
                                        sub.child(2), workers=workers)
        rows.append({
            "p": p, "q": q, "n": n, "intensity": intensity, "trials": trials,
            "pivotal1": one.value, "pivotal1_se": one.se,
            "pivotal2": two.value, "pivotal2_se": two.se,
            "ratio": two.value / one.value if one.value > 0 else math.nan,
        })
    return rows
