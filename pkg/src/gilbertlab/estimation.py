"""Crossing-probability estimation, half-points, the critical intensity
and the site/enhanced gap experiment.

Everything here rides on one representation: for a sampled configuration
the window-crossing event is monotone in the occupation level, so each
replicate has an exact crossing threshold computable in one union-find
sweep. A whole curve estimate at every level then costs one threshold per
replicate instead of one simulation per (level, replicate) pair, levels
share marks by construction, and curve estimates at different levels are
perfectly coupled.

Threshold recipes per model (level p, window n, marks y, z per vertex and
x per edge):

* site: minimax over crossing paths of the path's largest y.
* bond: all vertices present, edges sorted by x, threshold of the edge
  completing a source-target connection.
* enhanced with q tied to p^2: a vertex is coloured at level p when
  y < p (red), or when it is bow-tie eligible, all four neighbors are red
  and z < p^2 (green). Both routes are monotone in p, giving the
  per-vertex coloured threshold min(y, max(largest neighbor y, sqrt(z)))
  for eligible vertices and y otherwise; the crossing threshold is the
  site sweep over those values.
* enhanced at fixed q: same, with the eligible-vertex threshold
  min(y, largest neighbor y) when z < q and y otherwise.

The critical intensity uses a thinning representation: sampling once at
the top intensity and keeping vertices with y below lam/lam_top is an
exact sample at intensity lam, so the site threshold in y rescales to a
per-replicate critical-intensity sample lam_top * threshold.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._parallel import pmap
from .enhancement import bowtie_pattern
from .errors import InvalidParameterError, WidenGridError
from .geom_graph import GilbertGraph, build_graph, components, largest_component_fraction
from .percolation import _check_prob
from .point_process import Disk, StreamSpec, sample_poisson

__all__ = [
    "MODELS",
    "enhanced_vertex_thresholds",
    "site_crossing_threshold",
    "bond_crossing_threshold",
    "enhanced_crossing_threshold",
    "replicate_thresholds",
    "SweepConfig",
    "sweep",
    "write_sweep_csv",
    "HalfPointEstimate",
    "estimate_half_point",
    "LambdaCEstimate",
    "estimate_lambda_c",
    "GapResult",
    "gap_experiment",
]

MODELS = ("site", "bond", "enhanced")

_Z95 = 1.959963984540054


def _check_window(n: float) -> float:
    if not (np.isfinite(n) and n > 0.5):
        raise InvalidParameterError("window size n must be finite and > 0.5")
    return float(n)


def _check_intensity(value: float) -> float:
    if not (np.isfinite(value) and value > 0):
        raise InvalidParameterError("intensity must be positive and finite")
    return float(value)


def _window_masks(graph: GilbertGraph, n: float):
    d = graph.origin_dist
    return d < 0.5, (d >= n - 0.5) & (d < n)


def enhanced_vertex_thresholds(graph: GilbertGraph, y, z, q: float | None = None,
                               pattern=None) -> np.ndarray:
    """Per-vertex coloured thresholds for the enhanced model.

    q=None ties the enhancement level to the square of the site level;
    a float q freezes it.
    """
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    elig, nb4, _ = pattern if pattern is not None else bowtie_pattern(graph)
    t = y.copy()
    idx = np.flatnonzero(elig)
    if len(idx):
        max_leg = y[nb4[idx]].max(axis=1)
        if q is None:
            green_route = np.maximum(max_leg, np.sqrt(z[idx]))
            t[idx] = np.minimum(y[idx], green_route)
        else:
            q = _check_prob(q, "q")
            better = np.minimum(y[idx], max_leg)
            t[idx] = np.where(z[idx] < q, better, y[idx])
    return t


def site_crossing_threshold(graph: GilbertGraph, y, n: float) -> float:
    """Exact site level above which the window crossing holds."""
    n = _check_window(n)
    if graph.n == 0:
        return math.inf
    src, tgt = _window_masks(graph, n)
    if not src.any() or not tgt.any():
        return math.inf
    y = np.asarray(y, dtype=np.float64)
    order = np.argsort(y, kind="stable")
    return _kernels.site_threshold(graph.indptr, graph.indices, y, order, src, tgt)


def enhanced_crossing_threshold(graph: GilbertGraph, y, z, n: float,
                                q: float | None = None, pattern=None) -> float:
    """Exact site level above which the enhanced crossing holds."""
    n = _check_window(n)
    if graph.n == 0:
        return math.inf
    src, tgt = _window_masks(graph, n)
    if not src.any() or not tgt.any():
        return math.inf
    t = enhanced_vertex_thresholds(graph, y, z, q, pattern)
    order = np.argsort(t, kind="stable")
    return _kernels.site_threshold(graph.indptr, graph.indices, t, order, src, tgt)


def bond_crossing_threshold(graph: GilbertGraph, x, n: float) -> float:
    """Exact bond level above which the window crossing holds."""
    n = _check_window(n)
    if graph.n == 0:
        return math.inf
    src, tgt = _window_masks(graph, n)
    if not src.any() or not tgt.any():
        return math.inf
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    return _kernels.bond_threshold(
        graph.n, graph.edges[:, 0], graph.edges[:, 1], x, order, src, tgt
    )


# stream path labels inside one replicate
_POINTS_SUBSTREAM = 0
_BONDMARK_SUBSTREAM = 1


def replicate_thresholds(replicate: int, *, models: tuple[str, ...], intensity: float,
                         n: float, q: float | None, stream: StreamSpec) -> tuple[float, ...]:
    """Sample one configuration and return its thresholds, one per model.

    All requested models share the replicate's points and marks, so
    cross-model comparisons are paired. Bond marks come from a separate
    substream and are only drawn when a bond threshold is requested.
    """
    st = stream.child(replicate)
    pts = sample_poisson(Disk((0.0, 0.0), n), intensity, st.child(_POINTS_SUBSTREAM))
    graph = build_graph(pts.points)
    pattern = None
    out = []
    for model in models:
        if model == "site":
            out.append(site_crossing_threshold(graph, pts.y, n))
        elif model == "bond":
            x = st.child(_BONDMARK_SUBSTREAM).generator().random(graph.m)
            out.append(bond_crossing_threshold(graph, x, n))
        elif model == "enhanced":
            if pattern is None and graph.n:
                pattern = bowtie_pattern(graph)
            out.append(enhanced_crossing_threshold(graph, pts.y, pts.z, n, q, pattern))
        else:
            raise InvalidParameterError(f"unknown model {model!r}")
    return tuple(out)


def _collect_thresholds(models, intensity, n, q, stream, replicates, workers,
                        start: int = 0) -> np.ndarray:
    fn = functools.partial(replicate_thresholds, models=tuple(models),
                           intensity=intensity, n=n, q=q, stream=stream)
    rows = pmap(fn, range(start, replicates), workers=workers, chunksize=8)
    return np.asarray(rows, dtype=np.float64).reshape(-1, len(models))


@dataclass(frozen=True)
class SweepConfig:
    """Grid description for a crossing-probability sweep."""

    intensity: float
    n_values: tuple[float, ...]
    p_values: tuple[float, ...]
    models: tuple[str, ...] = MODELS
    q: float | None = None  # None ties enhancement to p^2
    replicates: int = 400

    def __post_init__(self):
        _check_intensity(self.intensity)
        object.__setattr__(self, "n_values", tuple(float(v) for v in self.n_values))
        object.__setattr__(self, "p_values", tuple(float(v) for v in self.p_values))
        object.__setattr__(self, "models", tuple(self.models))
        for n in self.n_values:
            _check_window(n)
        for p in self.p_values:
            _check_prob(p, "p")
        for model in self.models:
            if model not in MODELS:
                raise InvalidParameterError(f"unknown model {model!r}")
        if self.q is not None:
            _check_prob(self.q, "q")
        if self.replicates < 1:
            raise InvalidParameterError("replicates must be >= 1")


def _q_column(model: str, p: float, q: float | None) -> float:
    if model == "enhanced":
        return p * p if q is None else q
    if model == "site":
        return 0.0  # site percolation is the enhanced model with q = 0
    return math.nan  # bond rows carry no enhancement level


def sweep(config: SweepConfig, stream: StreamSpec, workers: int | None = None) -> list[dict]:
    """Estimate crossing curves for every (model, n, p) grid point.

    Returns rows with keys model, lambda, n, p, q, theta, se, reps. Within
    one (model, n) the same replicate set serves every p, so curves are
    monotone in p by construction.
    """
    rows = []
    for k, n in enumerate(config.n_values):
        thr = _collect_thresholds(config.models, config.intensity, n, config.q,
                                  stream.child(k), config.replicates, workers)
        for c, model in enumerate(config.models):
            t = thr[:, c]
            for p in config.p_values:
                hits = int((t < p).sum())
                theta = hits / config.replicates
                rows.append({
                    "model": model,
                    "lambda": config.intensity,
                    "n": n,
                    "p": p,
                    "q": _q_column(model, p, config.q),
                    "theta": theta,
                    "se": math.sqrt(theta * (1.0 - theta) / config.replicates),
                    "reps": config.replicates,
                })
    return rows


SWEEP_HEADER = "model,lambda,n,p,q,theta,se,reps"


def write_sweep_csv(path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r['model']},{repr(float(r['lambda']))},{repr(float(r['n']))},"
                f"{repr(float(r['p']))},{repr(float(r['q']))},{repr(float(r['theta']))},"
                f"{repr(float(r['se']))},{int(r['reps'])}\n"
            )


def _median_ci(sorted_t: np.ndarray) -> tuple[float, float, float]:
    """Median and distribution-free 95 percent order-statistic interval.

    Uses the normal approximation to Binomial(R, 1/2) for the order-statistic
    ranks, which for the replicate counts used here is accurate to one rank.
    """
    r = len(sorted_t)
    half = _Z95 * math.sqrt(r) / 2.0
    lo = max(0, int(math.floor(r / 2.0 - half)))
    hi = min(r - 1, int(math.ceil(r / 2.0 + half)))
    return float(np.median(sorted_t)), float(sorted_t[lo]), float(sorted_t[hi])


@dataclass(frozen=True)
class HalfPointEstimate:
    """Occupation level at which the crossing probability passes one half."""

    model: str
    intensity: float
    n: float
    q: float | None
    value: float
    ci: tuple[float, float]
    replicates: int
    converged: bool
    no_crossing_fraction: float

    @property
    def crossed(self) -> bool:
        return math.isfinite(self.value)


def estimate_half_point(model: str, intensity: float, n: float, stream: StreamSpec, *,
                        q: float | None = None, tolerance: float = 0.01,
                        initial: int = 400, growth: int = 4,
                        max_replicates: int = 102_400,
                        workers: int | None = None) -> HalfPointEstimate:
    """Adaptive median-of-thresholds estimate of the half-crossing level.

    Replicates start at ``initial`` and multiply by ``growth`` until the
    order-statistic confidence interval for the median is narrower than
    ``tolerance`` (or the cap is hit; the result then reports
    converged=False). When most replicates never cross at any level the
    median is infinite and the estimate reports that outcome instead of a
    level.
    """
    if model not in MODELS:
        raise InvalidParameterError(f"unknown model {model!r}")
    intensity = _check_intensity(intensity)
    n = _check_window(n)
    if not (np.isfinite(tolerance) and tolerance > 0):
        raise InvalidParameterError("tolerance must be positive")
    if initial < 2 or growth < 2:
        raise InvalidParameterError("need initial >= 2 and growth >= 2")
    thr = np.empty((0, 1))
    count = initial
    while True:
        extra = _collect_thresholds((model,), intensity, n, q, stream,
                                    count, workers, start=len(thr))
        thr = np.vstack([thr, extra]) if len(thr) else extra
        t = np.sort(thr[:, 0])
        med, lo, hi = _median_ci(t)
        no_cross = float(np.isinf(t).mean())
        if not math.isfinite(med):
            return HalfPointEstimate(model=model, intensity=intensity, n=n, q=q,
                                     value=math.inf, ci=(math.inf, math.inf),
                                     replicates=len(t), converged=False,
                                     no_crossing_fraction=no_cross)
        if math.isfinite(hi) and hi - lo < tolerance:
            return HalfPointEstimate(model=model, intensity=intensity, n=n, q=q,
                                     value=med, ci=(lo, hi), replicates=len(t),
                                     converged=True, no_crossing_fraction=no_cross)
        if count >= max_replicates:
            return HalfPointEstimate(model=model, intensity=intensity, n=n, q=q,
                                     value=med, ci=(lo, hi), replicates=len(t),
                                     converged=False, no_crossing_fraction=no_cross)
        count = min(count * growth, max_replicates)


def _silverman_bandwidth(samples: np.ndarray) -> float:
    r = len(samples)
    sd = float(np.std(samples, ddof=1)) if r > 1 else 0.0
    q75, q25 = np.percentile(samples, [75.0, 25.0])
    iqr = float(q75 - q25)
    scale = min(sd, iqr / 1.349) if iqr > 0 else sd
    if scale <= 0:
        scale = max(sd, 1e-3)
    return 0.9 * scale * r ** (-0.2)


def _kde_mode(samples: np.ndarray, grid: np.ndarray, bandwidth: float) -> float:
    """Location of the density maximum with parabolic refinement."""
    u = (grid[:, None] - samples[None, :]) / bandwidth
    dens = np.exp(-0.5 * u * u).sum(axis=1)
    k = int(np.argmax(dens))
    if 0 < k < len(grid) - 1:
        y0, y1, y2 = dens[k - 1], dens[k], dens[k + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0:
            shift = 0.5 * (y0 - y2) / denom
            return float(grid[k] + shift * (grid[1] - grid[0]))
    return float(grid[k])


def _inflection(grid: np.ndarray, curve: np.ndarray) -> float:
    """Steepest-ascent location of a curve with parabolic refinement."""
    slope = np.gradient(curve, grid)
    k = int(np.argmax(slope))
    if 0 < k < len(grid) - 1:
        y0, y1, y2 = slope[k - 1], slope[k], slope[k + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0:
            shift = 0.5 * (y0 - y2) / denom
            return float(grid[k] + shift * (grid[1] - grid[0]))
    return float(grid[k])


def _lambda_task(replicate: int, *, intensity_hi: float, n: float, lcf_grid,
                 lcf_upto: int, stream: StreamSpec) -> tuple[float, bool, list[float]]:
    """One thinning replicate: intensity threshold, whether the window held
    both a source and a target point at all, and (for the first lcf_upto
    replicates) the largest-component-fraction curve along the thinning grid.

    An empty source disc or target annulus censors the replicate for any
    intensity; that is a property of the event definition, not of the
    intensity bracket, so the caller needs the distinction.
    """
    st = stream.child(replicate)
    pts = sample_poisson(Disk((0.0, 0.0), n), intensity_hi, st.child(_POINTS_SUBSTREAM))
    graph = build_graph(pts.points)
    src, tgt = (np.zeros(0, dtype=bool),) * 2 if graph.n == 0 else _window_masks(graph, n)
    has_endpoints = bool(src.any() and tgt.any())
    t = site_crossing_threshold(graph, pts.y, n)
    lam_thr = intensity_hi * t if math.isfinite(t) else math.inf
    curve: list[float] = []
    if lcf_grid is not None and replicate < lcf_upto:
        if graph.n == 0:
            curve = [0.0] * len(lcf_grid)
        else:
            for lam in lcf_grid:
                active = pts.y < (lam / intensity_hi)
                labels = components(graph, vertex_active=active)
                curve.append(largest_component_fraction(labels))
    return lam_thr, has_endpoints, curve


@dataclass(frozen=True)
class LambdaCEstimate:
    """Consensus estimate of the critical intensity of the site model.

    Members: a kernel-density mode of the intensity-threshold sample for
    each window size (the steepest-ascent point of that window's crossing
    curve), a power-law extrapolation for each consecutive window pair
    (shift exponent 3/4, the value for two-dimensional percolation
    windows), and the inflection of the largest window's mean
    largest-component-fraction curve. The point estimate is the member
    median; the interval is the envelope of the members' bootstrap
    intervals.
    """

    value: float
    interval: tuple[float, float]
    members: dict
    n_values: tuple[float, ...]
    intensity_lo: float
    intensity_hi: float
    replicates: int
    curves: list[dict] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def estimate_lambda_c(n_values=(10.0, 20.0, 40.0), *, intensity_lo: float = 1.0,
                      intensity_hi: float = 2.2, replicates: int = 400,
                      stream: StreamSpec, bootstrap: int = 200,
                      lcf_replicates: int = 200,
                      workers: int | None = None) -> LambdaCEstimate:
    """Estimate the critical intensity from windowed crossing thresholds.

    Each member is an estimate of the same limit from a different angle:
    power-law extrapolations of the median crossing threshold over
    consecutive window pairs, plus the inflection of the largest-component
    fraction in the biggest window. The consensus is the member median and
    the interval is the envelope of the member bootstrap intervals.

    Raises WidenGridError when the evidence pushes against either end of
    (intensity_lo, intensity_hi): a member landing within two kernel
    bandwidths of an edge, a consensus outside the open interval, or more
    than 5 percent of replicates failing to cross even with every point
    active all mean the bracket was too narrow (or too low) to trust.
    A few percent of failures is normal in small windows: a void ring can
    separate the source from the boundary at any intensity.
    """
    n_values = tuple(sorted(float(v) for v in n_values))
    if len(n_values) < 2:
        raise InvalidParameterError("need at least two window sizes")
    for n in n_values:
        _check_window(n)
    intensity_lo = float(intensity_lo)
    intensity_hi = _check_intensity(intensity_hi)
    if not (0.0 <= intensity_lo < intensity_hi):
        raise InvalidParameterError("need 0 <= intensity_lo < intensity_hi")
    if replicates < 16:
        raise InvalidParameterError("replicates must be >= 16")
    grid = np.linspace(intensity_lo, intensity_hi, 241)
    lcf_grid = np.linspace(intensity_lo, intensity_hi, 33)
    boot_rng = stream.child(len(n_values)).generator()

    members: dict[str, dict] = {}
    medians: dict[float, dict] = {}
    diagnostics: dict = {"no_crossing_fraction": {}, "censored_fraction": {},
                         "bandwidth": {}, "kde_mode": {}, "lambda_half": {}}
    curves: list[dict] = []
    lcf_rows = None

    for k, n in enumerate(n_values):
        top = n == n_values[-1]
        fn = functools.partial(
            _lambda_task, intensity_hi=intensity_hi, n=n,
            lcf_grid=[float(v) for v in lcf_grid] if top else None,
            lcf_upto=min(lcf_replicates, replicates) if top else 0,
            stream=stream.child(k),
        )
        results = pmap(fn, range(replicates), workers=workers, chunksize=4)
        if top:
            lcf_rows = np.asarray([c for _, _, c in results if c], dtype=np.float64)
        lam = np.asarray([t for t, _, _ in results], dtype=np.float64)
        endpoints = np.asarray([e for _, e, _ in results], dtype=bool)
        finite = lam[np.isfinite(lam)]
        # replicates with an empty source disc or target annulus can never
        # cross at any intensity; only a failure WITH endpoints present is
        # evidence against the bracket
        censored = float((~endpoints).mean())
        stuck = float((np.isinf(lam) & endpoints).mean())
        diagnostics["censored_fraction"][n] = censored
        diagnostics["no_crossing_fraction"][n] = stuck
        if stuck > 0.05:
            raise WidenGridError(
                f"{stuck:.1%} of window-{n:g} replicates with endpoints present "
                f"never cross even at intensity {intensity_hi:g}; raise intensity_hi"
            )
        if len(finite) < 8:
            raise WidenGridError(
                f"only {len(finite)} of {replicates} window-{n:g} replicates "
                f"cross below intensity {intensity_hi:g}; widen the bracket"
            )
        bw = _silverman_bandwidth(finite)
        diagnostics["bandwidth"][n] = bw
        diagnostics["kde_mode"][n] = _kde_mode(finite, grid, bw)
        med = float(np.median(finite))
        diagnostics["lambda_half"][n] = med
        boots = np.empty(bootstrap)
        for b in range(bootstrap):
            pick = boot_rng.integers(0, len(finite), len(finite))
            boots[b] = np.median(finite[pick])
        medians[n] = {"value": med, "bootstrap": boots}
        theta_grid = np.linspace(intensity_lo, intensity_hi, 61)
        for lamv in theta_grid:
            th = float((lam < lamv).mean())
            curves.append({
                "n": n, "lambda": float(lamv), "theta": th,
                "se": math.sqrt(th * (1.0 - th) / len(lam)),
            })

    # a finite window crosses a little early: its median threshold creeps
    # upward as the window grows, so extrapolate consecutive pairs assuming
    # a power-law approach in the window radius
    for n1, n2 in zip(n_values[:-1], n_values[1:]):
        rho = n2 / n1
        kappa = 1.0 / (rho ** 0.75 - 1.0)
        m1, m2 = medians[n1], medians[n2]
        value = m2["value"] + kappa * (m2["value"] - m1["value"])
        boots = m2["bootstrap"] + kappa * (m2["bootstrap"] - m1["bootstrap"])
        members[f"median_extrap_n{n1:g}_n{n2:g}"] = {
            "value": float(value),
            "lo": float(np.percentile(boots, 2.5)),
            "hi": float(np.percentile(boots, 97.5)),
            "bootstrap": boots,
        }

    if lcf_rows is not None and len(lcf_rows):
        n_top = n_values[-1]
        mean_curve = lcf_rows.mean(axis=0)
        value = _inflection(lcf_grid, mean_curve)
        boots = np.empty(bootstrap)
        for b in range(bootstrap):
            pick = boot_rng.integers(0, len(lcf_rows), len(lcf_rows))
            boots[b] = _inflection(lcf_grid, lcf_rows[pick].mean(axis=0))
        members[f"inflection_n{n_top:g}"] = {
            "value": float(value),
            "lo": float(np.percentile(boots, 2.5)),
            "hi": float(np.percentile(boots, 97.5)),
            "bootstrap": boots,
        }

    bw_edge = max(2.0 * max(diagnostics["bandwidth"].values()), 0.02)
    for name, m in members.items():
        if m["value"] <= intensity_lo + bw_edge or m["value"] >= intensity_hi - bw_edge:
            raise WidenGridError(
                f"member {name} sits at {m['value']:.4f}, within {bw_edge:.3f} of the "
                f"bracket ({intensity_lo:g}, {intensity_hi:g}); widen it"
            )

    values = sorted(m["value"] for m in members.values())
    value = float(np.median(values))
    interval = (min(m["lo"] for m in members.values()),
                max(m["hi"] for m in members.values()))
    if not (intensity_lo < value < intensity_hi):
        raise WidenGridError(
            f"consensus {value:.4f} escapes the bracket ({intensity_lo:g}, {intensity_hi:g})"
        )
    public = {
        name: {"value": m["value"], "lo": m["lo"], "hi": m["hi"]}
        for name, m in members.items()
    }
    return LambdaCEstimate(
        value=value, interval=(float(interval[0]), float(interval[1])),
        members=public, n_values=n_values, intensity_lo=intensity_lo,
        intensity_hi=intensity_hi, replicates=replicates, curves=curves,
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class GapRow:
    """Site and bond half-points of one window size, paired by replicate."""

    n: float
    site_half: float
    site_ci: tuple[float, float]
    bond_half: float
    bond_ci: tuple[float, float]
    gap: float
    gap_ci: tuple[float, float]

    @property
    def disjoint(self) -> bool:
        return self.bond_ci[1] < self.site_ci[0]

    @property
    def positive(self) -> bool:
        return self.gap_ci[0] > 0.0


@dataclass(frozen=True)
class GapReport:
    """Per-window comparison of site and bond half-points at one intensity."""

    intensity: float
    replicates: int
    bootstrap: int
    rows: tuple[GapRow, ...]

    def row(self, n: float) -> GapRow:
        for row in self.rows:
            if row.n == float(n):
                return row
        raise KeyError(f"no gap row for window size {n!r}")


def gap_experiment(intensity: float, n_values, stream: StreamSpec, *,
                   replicates: int = 400, bootstrap: int = 1000,
                   workers: int | None = None) -> GapReport:
    """Estimate the half-point gap between the site and bond crossings.

    Both models run on the same replicate windows (common point sets), so
    the per-n gap bootstrap is paired. Bond percolation keeps every vertex
    present and opens edges; it crosses strictly earlier in level, which is
    the finite-window rendering of the site/bond critical-point ordering.
    """
    intensity = _check_intensity(intensity)
    if np.isscalar(n_values):
        n_values = (float(n_values),)
    n_values = tuple(float(v) for v in n_values)
    for n in n_values:
        _check_window(n)
    if replicates < 16:
        raise InvalidParameterError("replicates must be >= 16")
    # bootstrap stream sits just past the per-window children
    rng = stream.child(len(n_values)).generator()
    rows = []
    for k, n in enumerate(n_values):
        thr = _collect_thresholds(("site", "bond"), intensity, n, None,
                                  stream.child(k), replicates, workers)
        site_t, bond_t = thr[:, 0], thr[:, 1]
        med_s = np.empty(bootstrap)
        med_b = np.empty(bootstrap)
        for b in range(bootstrap):
            pick = rng.integers(0, replicates, replicates)
            med_s[b] = np.median(site_t[pick])
            med_b[b] = np.median(bond_t[pick])
        delta = med_s - med_b
        rows.append(GapRow(
            n=n,
            site_half=float(np.median(site_t)),
            site_ci=(float(np.percentile(med_s, 2.5)),
                     float(np.percentile(med_s, 97.5))),
            bond_half=float(np.median(bond_t)),
            bond_ci=(float(np.percentile(med_b, 2.5)),
                     float(np.percentile(med_b, 97.5))),
            gap=float(np.median(site_t) - np.median(bond_t)),
            gap_ci=(float(np.percentile(delta, 2.5)),
                    float(np.percentile(delta, 97.5))),
        ))
    return GapReport(intensity=intensity, replicates=replicates,
                     bootstrap=bootstrap, rows=tuple(rows))
