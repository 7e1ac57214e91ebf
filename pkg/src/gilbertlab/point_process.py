"""Planar regions, reproducible streams and marked Poisson samples.

Every random draw in the package flows through a :class:`StreamSpec`, which
derives an independent counter-based generator from a master seed and an
integer path. Point sets carry two independent uniform marks per point: ``y``
drives site occupation (red iff y < p) and ``z`` drives enhancement (green
iff configured and z < q).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "Disk",
    "Annulus",
    "Box",
    "Region",
    "StreamSpec",
    "MarkedPointSet",
    "region_contains",
    "sample_poisson",
    "sample_in_difference",
    "write_points_csv",
    "read_points_csv",
]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParameterError(msg)


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class Disk:
    """Open disc: points with |x - center| strictly below radius."""

    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        _require(_finite(*self.center, self.radius), "disk parameters must be finite")
        _require(self.radius >= 0.0, "disk radius must be nonnegative")

    def area(self) -> float:
        return math.pi * self.radius**2

    def bounding_box(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, cy - r), (cx + r, cy + r)

    def contains(self, xy: np.ndarray) -> np.ndarray:
        xy = np.asarray(xy, dtype=np.float64)
        d2 = (xy[..., 0] - self.center[0]) ** 2 + (xy[..., 1] - self.center[1]) ** 2
        return d2 < self.radius**2


@dataclass(frozen=True)
class Annulus:
    """Half-open annulus: inner <= |x - center| < outer."""

    center: tuple[float, float] = (0.0, 0.0)
    inner: float = 0.5
    outer: float = 1.0

    def __post_init__(self):
        _require(_finite(*self.center, self.inner, self.outer), "annulus parameters must be finite")
        _require(0.0 <= self.inner <= self.outer, "annulus requires 0 <= inner <= outer")

    def area(self) -> float:
        return math.pi * (self.outer**2 - self.inner**2)

    def bounding_box(self):
        cx, cy = self.center
        r = self.outer
        return (cx - r, cy - r), (cx + r, cy + r)

    def contains(self, xy: np.ndarray) -> np.ndarray:
        xy = np.asarray(xy, dtype=np.float64)
        d2 = (xy[..., 0] - self.center[0]) ** 2 + (xy[..., 1] - self.center[1]) ** 2
        return (d2 >= self.inner**2) & (d2 < self.outer**2)


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box with componentwise-ordered corners."""

    lo: tuple[float, float] = (0.0, 0.0)
    hi: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        _require(_finite(*self.lo, *self.hi), "box corners must be finite")
        _require(
            self.lo[0] <= self.hi[0] and self.lo[1] <= self.hi[1],
            "box corners must be ordered componentwise",
        )

    def area(self) -> float:
        return (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])

    def bounding_box(self):
        return self.lo, self.hi

    def contains(self, xy: np.ndarray) -> np.ndarray:
        xy = np.asarray(xy, dtype=np.float64)
        return (
            (xy[..., 0] >= self.lo[0])
            & (xy[..., 0] <= self.hi[0])
            & (xy[..., 1] >= self.lo[1])
            & (xy[..., 1] <= self.hi[1])
        )


Region = Disk | Annulus | Box


def _dist(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _min_dist_to(region: Region, point: Sequence[float]) -> float:
    """Distance from a point to the closed set underlying ``region``."""
    if isinstance(region, Disk):
        return max(0.0, _dist(region.center, point) - region.radius)
    if isinstance(region, Annulus):
        d = _dist(region.center, point)
        return max(d - region.outer, region.inner - d, 0.0)
    corners_x = min(max(point[0], region.lo[0]), region.hi[0])
    corners_y = min(max(point[1], region.lo[1]), region.hi[1])
    return _dist((corners_x, corners_y), point)


def _within_disk(region: Region, center: Sequence[float], radius: float) -> bool:
    """Whether the closure of ``region`` sits inside the closed disc."""
    if isinstance(region, Disk):
        return _dist(region.center, center) + region.radius <= radius
    if isinstance(region, Annulus):
        return _dist(region.center, center) + region.outer <= radius
    return all(
        _dist((x, y), center) <= radius
        for x in (region.lo[0], region.hi[0])
        for y in (region.lo[1], region.hi[1])
    )


def region_contains(outer: Region, inner: Region) -> bool:
    """Exact closed-set containment check for the three region kinds."""
    if isinstance(outer, Disk):
        return _within_disk(inner, outer.center, outer.radius)
    if isinstance(outer, Box):
        (ilo, ihi) = inner.bounding_box()
        return (
            ilo[0] >= outer.lo[0]
            and ilo[1] >= outer.lo[1]
            and ihi[0] <= outer.hi[0]
            and ihi[1] <= outer.hi[1]
        )
    # annulus: inside the outer circle and clear of the inner hole
    return _within_disk(inner, outer.center, outer.outer) and (
        _min_dist_to(inner, outer.center) >= outer.inner
    )


@dataclass(frozen=True)
class StreamSpec:
    """Named random stream: (master_seed, path) -> independent generator.

    Derivation rule: ``numpy.random.SeedSequence(master_seed, spawn_key=path)``
    keys a Philox counter-based bit generator. Distinct paths give independent
    streams; appending path components with :meth:`child` never collides with
    the parent stream.
    """

    master_seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        _require(
            isinstance(self.master_seed, int) and self.master_seed >= 0,
            "master_seed must be a nonnegative integer",
        )
        _require(
            all(isinstance(p, int) and p >= 0 for p in self.path),
            "stream path components must be nonnegative integers",
        )
        object.__setattr__(self, "path", tuple(self.path))

    def child(self, *components: int) -> "StreamSpec":
        return StreamSpec(self.master_seed, self.path + tuple(int(c) for c in components))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class MarkedPointSet:
    """Points of one sample, sorted by distance from the origin.

    Ties in distance are broken lexicographically by (x, y). ``y`` and ``z``
    are the per-point uniform marks; arrays are read-only.
    """

    points: np.ndarray  # (n, 2) float64
    y: np.ndarray  # (n,) float64
    z: np.ndarray  # (n,) float64
    region: Region | None
    intensity: float
    stream: StreamSpec | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64).reshape(-1, 2))
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.float64).reshape(-1))
        z = np.ascontiguousarray(np.asarray(self.z, dtype=np.float64).reshape(-1))
        if not (len(pts) == len(y) == len(z)):
            raise InvalidParameterError("points and marks must have equal length")
        for arr, name in ((pts, "points"), (y, "y"), (z, "z")):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    def distances(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])


def canonical_order(points: np.ndarray) -> np.ndarray:
    """Sort permutation: nondecreasing |x|, ties by (x, y) lexicographic."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    d2 = points[:, 0] ** 2 + points[:, 1] ** 2
    return np.lexsort((points[:, 1], points[:, 0], d2))


def _uniform_in_region(rng: np.random.Generator, region: Region, count: int) -> np.ndarray:
    """Uniform points, drawn directly for boxes and by rejection otherwise.

    The rejection chunk policy is fixed (part of the determinism contract):
    each round draws max(32, ceil(1.25 * deficit / acceptance)) candidates
    from the bounding box and keeps them in draw order.
    """
    if count == 0:
        return np.empty((0, 2), dtype=np.float64)
    (lo, hi) = region.bounding_box()
    if isinstance(region, Box):
        return rng.uniform(lo, hi, size=(count, 2))
    bbox_area = (hi[0] - lo[0]) * (hi[1] - lo[1])
    acceptance = region.area() / bbox_area
    kept = []
    have = 0
    while have < count:
        deficit = count - have
        chunk = max(32, math.ceil(1.25 * deficit / acceptance))
        cand = rng.uniform(lo, hi, size=(chunk, 2))
        good = cand[region.contains(cand)]
        kept.append(good)
        have += len(good)
    return np.concatenate(kept)[:count]


def sample_poisson(region: Region, intensity: float, stream: StreamSpec) -> MarkedPointSet:
    """Sample a marked Poisson point process on ``region``.

    The point count is Poisson(intensity * area); locations are uniform and
    independent; y and z marks are independent uniforms on [0, 1). The result
    is deterministic given (region, intensity, stream).
    """
    _require(_finite(intensity) and intensity >= 0.0, "intensity must be finite and >= 0")
    area = region.area()
    _require(_finite(area) and area > 0.0, "region must have finite positive area")
    rng = stream.generator()
    count = int(rng.poisson(intensity * area))
    pts = _uniform_in_region(rng, region, count)
    y = rng.uniform(size=count)
    z = rng.uniform(size=count)
    order = canonical_order(pts)
    return MarkedPointSet(pts[order], y[order], z[order], region, float(intensity), stream)


def sample_in_difference(
    outer: Region, inner: Region, intensity: float, stream: StreamSpec
) -> MarkedPointSet:
    """Poisson sample on ``outer`` minus ``inner``.

    Implemented by sampling on ``outer`` and discarding points that fall in
    ``inner`` (an independent-thinning identity), so merging the result with
    an independent sample on ``inner`` reproduces the law on ``outer``.
    """
    _require(region_contains(outer, inner), "inner region must be contained in outer")
    full = sample_poisson(outer, intensity, stream)
    keep = ~inner.contains(full.points)
    return MarkedPointSet(
        full.points[keep], full.y[keep], full.z[keep], outer, float(intensity), stream
    )


def write_points_csv(path, points: np.ndarray, y: np.ndarray, z: np.ndarray) -> None:
    """Write ``index,x,y,Y,Z`` rows; floats use shortest round-trip repr."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "x", "y", "Y", "Z"])
        for i in range(len(points)):
            writer.writerow(
                [
                    i,
                    repr(float(points[i, 0])),
                    repr(float(points[i, 1])),
                    repr(float(y[i])),
                    repr(float(z[i])),
                ]
            )


def read_points_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read an ``index,x,y,Y,Z`` file back into (points, y, z) arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["index", "x", "y", "Y", "Z"]:
            raise InvalidParameterError(
                f"expected header 'index,x,y,Y,Z' in {path}, got {header!r}"
            )
        rows = [row for row in reader if row]
    pts = np.array([[float(r[1]), float(r[2])] for r in rows], dtype=np.float64).reshape(-1, 2)
    y = np.array([float(r[3]) for r in rows], dtype=np.float64)
    z = np.array([float(r[4]) for r in rows], dtype=np.float64)
    return pts, y, z
