"""Sampling, regions, streams, and the points CSV interface."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

import gilbertlab as gl
from gilbertlab.errors import InvalidParameterError
from gilbertlab.point_process import canonical_order, region_contains


def test_region_areas_and_membership():
    disk = gl.Disk((1.0, -2.0), 3.0)
    assert disk.area() == pytest.approx(math.pi * 9.0)
    assert disk.contains(np.array([[1.0, 0.9]]))[0]
    assert not disk.contains(np.array([[1.0, 1.0]]))[0]  # open boundary

    ann = gl.Annulus((0.0, 0.0), 1.0, 2.0)
    assert ann.area() == pytest.approx(math.pi * 3.0)
    inside = ann.contains(np.array([[1.5, 0.0], [0.5, 0.0], [2.0, 0.0], [1.0, 0.0]]))
    assert inside.tolist() == [True, False, False, True]  # [lo, hi)

    box = gl.Box((-1.0, 0.0), (2.0, 1.0))
    assert box.area() == pytest.approx(3.0)
    assert box.contains(np.array([[-1.0, 0.0]]))[0]  # closed corners
    assert box.contains(np.array([[2.0, 0.5]]))[0]
    assert not box.contains(np.array([[2.1, 0.5]]))[0]


def test_region_contains_relation():
    assert region_contains(gl.Disk((0.0, 0.0), 2.0), gl.Disk((0.5, 0.0), 1.0))
    assert not region_contains(gl.Disk((0.0, 0.0), 2.0), gl.Disk((1.5, 0.0), 1.0))
    assert region_contains(gl.Box((-2.0, -2.0), (2.0, 2.0)), gl.Disk((0.0, 0.0), 1.0))


def test_stream_spec_children_and_paths():
    root = gl.StreamSpec(42)
    assert root.child(3).path == (3,)
    assert root.child(3).child(0, 7).path == (3, 0, 7)
    with pytest.raises(InvalidParameterError):
        gl.StreamSpec(-1)
    with pytest.raises(InvalidParameterError):
        gl.StreamSpec(1, ("a",))


def test_stream_spec_reproducible_and_disjoint():
    a = gl.StreamSpec(7, (1, 2)).generator().random(8)
    b = gl.StreamSpec(7, (1, 2)).generator().random(8)
    assert np.array_equal(a, b)
    c = gl.StreamSpec(7, (1, 3)).generator().random(8)
    d = gl.StreamSpec(8, (1, 2)).generator().random(8)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_sample_poisson_count_distribution():
    """Counts should match the Poisson law across many replicates."""
    region = gl.Disk((0.0, 0.0), 2.0)
    mean = 1.3 * region.area()
    root = gl.StreamSpec(1000)
    counts = np.array(
        [gl.sample_poisson(region, 1.3, root.child(k)).n for k in range(600)]
    )
    # two-sided z tests on mean and variance, both generous
    z_mean = (counts.mean() - mean) / math.sqrt(mean / len(counts))
    assert abs(z_mean) < 4.0
    assert 0.7 * mean < counts.var() < 1.3 * mean


def test_sample_poisson_uniform_in_disk():
    region = gl.Disk((0.0, 0.0), 3.0)
    ps = gl.sample_poisson(region, 40.0, gl.StreamSpec(77))
    assert np.all(region.contains(ps.points))
    r = ps.distances()
    # r^2 / 9 should be uniform on [0, 1)
    stat = stats.kstest((r / 3.0) ** 2, "uniform")
    assert stat.pvalue > 1e-4
    ang = np.arctan2(ps.points[:, 1], ps.points[:, 0])
    stat = stats.kstest((ang + math.pi) / (2 * math.pi), "uniform")
    assert stat.pvalue > 1e-4


def test_marks_are_uniform_and_independent():
    ps = gl.sample_poisson(gl.Disk((0.0, 0.0), 4.0), 30.0, gl.StreamSpec(5))
    for m in (ps.y, ps.z):
        assert stats.kstest(m, "uniform").pvalue > 1e-4
    assert abs(np.corrcoef(ps.y, ps.z)[0, 1]) < 0.1


def test_points_sorted_canonically():
    ps = gl.sample_poisson(gl.Disk((0.0, 0.0), 3.0), 2.0, gl.StreamSpec(9))
    d = ps.distances()
    assert np.all(np.diff(d) >= 0)
    order = canonical_order(ps.points)
    assert np.array_equal(order, np.arange(ps.n))


def test_canonical_order_breaks_ties():
    pts = np.array([[1.0, 0.0], [0.0, -1.0], [-1.0, 0.0], [0.0, 0.0]])
    order = canonical_order(pts)
    # origin first, then equal-distance points by (x, y)
    assert list(order) == [3, 2, 1, 0]


def test_sample_is_deterministic_per_stream():
    region = gl.Annulus((0.0, 0.0), 1.0, 2.5)
    a = gl.sample_poisson(region, 2.0, gl.StreamSpec(31, (4,)))
    b = gl.sample_poisson(region, 2.0, gl.StreamSpec(31, (4,)))
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(a.y, b.y)
    assert np.array_equal(a.z, b.z)


def test_sample_in_difference_avoids_inner_region():
    outer = gl.Disk((0.0, 0.0), 3.0)
    inner = gl.Disk((0.0, 0.0), 1.0)
    ps = gl.sample_in_difference(outer, inner, 2.5, gl.StreamSpec(12))
    assert ps.n > 0
    assert np.all(outer.contains(ps.points))
    assert not np.any(inner.contains(ps.points))


def test_invalid_parameters_raise():
    with pytest.raises(InvalidParameterError):
        gl.Disk((0.0, 0.0), -1.0)
    with pytest.raises(InvalidParameterError):
        gl.Annulus((0.0, 0.0), 2.0, 1.0)
    with pytest.raises(InvalidParameterError):
        gl.Box((1.0, 0.0), (0.0, 1.0))
    with pytest.raises(InvalidParameterError):
        gl.sample_poisson(gl.Disk((0.0, 0.0), 1.0), -2.0, gl.StreamSpec(1))


def test_points_csv_round_trip(tmp_path):
    ps = gl.sample_poisson(gl.Disk((0.0, 0.0), 2.0), 3.0, gl.StreamSpec(21))
    path = tmp_path / "points.csv"
    gl.write_points_csv(path, ps.points, ps.y, ps.z)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "index,x,y,Y,Z"
    pts, y, z = gl.read_points_csv(path)
    assert np.array_equal(pts, ps.points)
    assert np.array_equal(y, ps.y)
    assert np.array_equal(z, ps.z)


def test_points_csv_bytes_are_stable(tmp_path):
    ps = gl.sample_poisson(gl.Disk((0.0, 0.0), 2.0), 3.0, gl.StreamSpec(22))
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    gl.write_points_csv(p1, ps.points, ps.y, ps.z)
    gl.write_points_csv(p2, ps.points, ps.y, ps.z)
    assert p1.read_bytes() == p2.read_bytes()
