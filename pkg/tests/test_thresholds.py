"""Exact crossing thresholds against direct event evaluation.

The threshold representation claims: crossing holds at level p iff the
replicate's threshold T < p (strictly). We verify by evaluating the event
directly just below and just above every candidate threshold.
"""

from __future__ import annotations

import math

import numpy as np
from hypothesis import given, strategies as st

import gilbertlab as gl
from gilbertlab.enhancement import bowtie_pattern, coloured_from_marks
from gilbertlab.estimation import (
    bond_crossing_threshold,
    enhanced_crossing_threshold,
    enhanced_vertex_thresholds,
    site_crossing_threshold,
)

from .conftest import random_marked_set

EPS = 1e-9


def site_crossing_at(graph, y, p, n):
    return gl.crossing_occurs(graph, np.asarray(y) < p, n)


@given(st.integers(min_value=0, max_value=150))
def test_site_threshold_flips_event(seed):
    mk = random_marked_set(seed, intensity=2.0, size=3.0)
    graph = gl.build_graph(mk.points)
    n = 3.0
    t = site_crossing_threshold(graph, mk.y, n)
    if math.isinf(t):
        assert not site_crossing_at(graph, mk.y, 1.0, n)
        return
    assert 0.0 <= t <= 1.0
    assert not site_crossing_at(graph, mk.y, t, n)  # strict: no crossing AT t
    assert not site_crossing_at(graph, mk.y, t - EPS, n)
    assert site_crossing_at(graph, mk.y, t + EPS, n)


@given(st.integers(min_value=0, max_value=150))
def test_site_threshold_is_some_mark(seed):
    mk = random_marked_set(seed, intensity=2.0, size=3.0)
    graph = gl.build_graph(mk.points)
    t = site_crossing_threshold(graph, mk.y, 3.0)
    if not math.isinf(t):
        assert np.any(np.isclose(mk.y, t, rtol=0, atol=0))


@given(st.integers(min_value=0, max_value=150))
def test_bond_threshold_flips_event(seed):
    mk = random_marked_set(seed, intensity=2.5, size=3.0)
    graph = gl.build_graph(mk.points)
    n = 3.0
    x = gl.StreamSpec(seed, (9,)).generator().random(graph.m)
    t = bond_crossing_threshold(graph, x, n)
    if math.isinf(t):
        assert not gl.bond_crossing_occurs(graph, x < 1.0, n)
        return
    assert not gl.bond_crossing_occurs(graph, x < t - EPS, n)
    assert not gl.bond_crossing_occurs(graph, x < t, n)
    assert gl.bond_crossing_occurs(graph, x < t + EPS, n)


@given(
    st.integers(min_value=0, max_value=150),
    st.one_of(st.none(), st.floats(min_value=0.05, max_value=0.95)),
)
def test_enhanced_threshold_flips_event(seed, q):
    mk = random_marked_set(seed, intensity=2.0, size=3.0)
    graph = gl.build_graph(mk.points)
    n = 3.0
    pattern = bowtie_pattern(graph)
    t = enhanced_crossing_threshold(graph, mk.y, mk.z, n, q, pattern)

    def crossing_at(p):
        qq = p * p if q is None else q
        coloured, _, _ = coloured_from_marks(graph, mk.y, mk.z, p, qq, pattern)
        return gl.crossing_occurs(graph, coloured, n)

    if math.isinf(t):
        assert not crossing_at(1.0)
        return
    assert not crossing_at(max(t - EPS, 0.0))
    assert crossing_at(min(t + EPS, 1.0))


@given(
    st.integers(min_value=0, max_value=200),
    st.one_of(st.none(), st.floats(min_value=0.0, max_value=1.0)),
)
def test_enhancement_never_hurts(seed, q):
    """Enhanced threshold is never above the plain site threshold."""
    mk = random_marked_set(seed, intensity=2.0, size=3.0)
    graph = gl.build_graph(mk.points)
    ts = site_crossing_threshold(graph, mk.y, 3.0)
    te = enhanced_crossing_threshold(graph, mk.y, mk.z, 3.0, q)
    assert te <= ts or (math.isinf(te) and math.isinf(ts))


@given(st.integers(min_value=0, max_value=150))
def test_vertex_thresholds_pointwise(seed):
    """Per-vertex coloured thresholds match the coloured mask at any level."""
    mk = random_marked_set(seed, intensity=2.0, size=2.5)
    graph = gl.build_graph(mk.points)
    pattern = bowtie_pattern(graph)
    t = enhanced_vertex_thresholds(graph, mk.y, mk.z, None, pattern)
    for p in (0.2, 0.5, 0.62, 0.8):
        coloured, _, _ = coloured_from_marks(graph, mk.y, mk.z, p, p * p, pattern)
        assert np.array_equal(t < p, coloured)
    tq = enhanced_vertex_thresholds(graph, mk.y, mk.z, 0.37, pattern)
    for p in (0.2, 0.5, 0.8):
        coloured, _, _ = coloured_from_marks(graph, mk.y, mk.z, p, 0.37, pattern)
        assert np.array_equal(tq < p, coloured)


def test_thresholds_handle_missing_endpoints():
    # all points far from the origin: no source, threshold inf
    pts = np.array([[2.0, 0.0], [2.6, 0.0]])
    graph = gl.build_graph(pts)
    y = np.array([0.1, 0.1])
    assert math.isinf(site_crossing_threshold(graph, y, 3.0))
    assert math.isinf(enhanced_crossing_threshold(graph, y, y, 3.0))
    assert math.isinf(bond_crossing_threshold(graph, np.array([0.1]), 3.0))
    empty = gl.build_graph(np.empty((0, 2)))
    assert math.isinf(site_crossing_threshold(empty, np.empty(0), 3.0))


def test_threshold_left_continuity_on_ties():
    """Duplicate marks: threshold still flips the event across its value."""
    pts = np.array([[0.0, 0.0], [0.9, 0.0], [1.8, 0.0], [2.6, 0.0]])
    graph = gl.build_graph(pts)
    y = np.array([0.4, 0.4, 0.4, 0.4])
    t = site_crossing_threshold(graph, y, 3.0)
    assert t == 0.4
    assert not site_crossing_at(graph, y, 0.4, 3.0)
    assert site_crossing_at(graph, y, 0.4 + EPS, 3.0)
