"""Bow-tie detection and the coloured configuration rules."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

import gilbertlab as gl
from gilbertlab.enhancement import (
    STATE_CLOSED,
    STATE_GREEN,
    STATE_RED,
    bowtie_pattern,
    coloured_from_marks,
    configured_centers,
    correctly_configured,
)
from gilbertlab.percolation import color_sites

from .conftest import brute_crossing, brute_eligible, random_marked_set


def bowtie_points():
    """A clean bow-tie: center at origin, two adjacent pairs, no cross talk."""
    return np.array([
        [0.0, 0.0],     # center
        [-0.95, 0.1],   # first pair
        [-0.95, -0.1],
        [0.95, 0.1],    # second pair
        [0.95, -0.1],
    ])


def test_bowtie_detected_on_canonical_shape():
    graph = gl.build_graph(bowtie_points())
    elig, nb4, partner0 = bowtie_pattern(graph)
    assert elig[0]
    assert not elig[1:].any()
    assert sorted(nb4[0]) == [1, 2, 3, 4]
    # partner of the smallest neighbor completes the first pair
    first = min(nb4[0])
    assert partner0[0] in nb4[0]
    d = graph.points[partner0[0]] - graph.points[first]
    assert d @ d <= 1.0


def test_bowtie_rejects_extra_adjacency():
    pts = bowtie_points()
    pts[3] = [0.05, 0.95]  # now adjacent to the first pair? no: to the center and pair 2 broken
    graph = gl.build_graph(pts)
    elig, _, _ = bowtie_pattern(graph)
    brute = brute_eligible(pts)
    assert bool(elig[0]) == (0 in brute)


@given(st.integers(min_value=0, max_value=400))
def test_eligibility_matches_brute_rederivation(seed):
    ps = random_marked_set(seed, intensity=1.8, size=2.5)
    graph = gl.build_graph(ps.points)
    elig, nb4, _ = bowtie_pattern(graph)
    brute = brute_eligible(ps.points)
    assert set(np.flatnonzero(elig).tolist()) == set(brute)
    for v in brute:
        (a1, a2), (b1, b2) = brute[v]
        assert sorted(nb4[v]) == sorted((a1, a2, b1, b2))


def test_correctly_configured_witness():
    pts = bowtie_points()
    graph = gl.build_graph(pts)
    y = np.array([0.9, 0.1, 0.1, 0.1, 0.1])
    site = color_sites(y, 0.5)
    w = correctly_configured(graph, site, 0)
    assert w is not None
    assert w.center == 0
    assert set(w.first_pair) == {1, 2}
    assert set(w.second_pair) == {3, 4}
    assert sorted(w.neighbors) == [1, 2, 3, 4]
    # red center disqualifies
    site_red = color_sites(np.full(5, 0.1), 0.5)
    assert correctly_configured(graph, site_red, 0) is None
    # one closed arm disqualifies
    y2 = y.copy()
    y2[3] = 0.9
    assert correctly_configured(graph, color_sites(y2, 0.5), 0) is None


def test_configured_centers_matches_single_vertex_probe():
    for seed in range(30):
        ps = random_marked_set(seed, intensity=1.8, size=2.5)
        graph = gl.build_graph(ps.points)
        site = color_sites(ps.y, 0.55)
        mask = configured_centers(graph, site.red)
        for v in range(graph.n):
            assert bool(mask[v]) == (correctly_configured(graph, site, v) is not None)


def test_coloured_states_partition():
    ps = random_marked_set(13, intensity=2.0, size=3.0)
    graph = gl.build_graph(ps.points)
    coloured, red, green = coloured_from_marks(graph, ps.y, ps.z, 0.5, 0.25)
    assert not np.any(red & green)
    assert np.array_equal(coloured, red | green)
    col = gl.enhance(graph, ps, 0.5, 0.25)
    assert np.array_equal(col.state == STATE_RED, red)
    assert np.array_equal(col.state == STATE_GREEN, green)
    assert np.array_equal(col.state == STATE_CLOSED, ~coloured)
    # every green vertex carries a witness with four red arms
    for v in np.flatnonzero(green):
        w = col.witnesses[int(v)]
        assert w.center == v
        assert all(red[u] for u in w.neighbors)
        assert not red[v]


def test_green_needs_configuration_and_low_z():
    pts = bowtie_points()
    graph = gl.build_graph(pts)
    y = np.array([0.9, 0.1, 0.1, 0.1, 0.1])
    z_low = np.full(5, 0.01)
    z_high = np.full(5, 0.99)
    _, _, green = coloured_from_marks(graph, y, z_low, 0.5, 0.3)
    assert green[0]
    _, _, green = coloured_from_marks(graph, y, z_high, 0.5, 0.3)
    assert not green.any()
    # q = 0 switches enhancement off entirely
    _, red, green = coloured_from_marks(graph, y, z_low, 0.5, 0.0)
    assert not green.any()
    assert np.array_equal(red, y < 0.5)


def test_site_equals_enhanced_at_q_zero():
    for seed in range(20):
        ps = random_marked_set(seed)
        graph = gl.build_graph(ps.points)
        coloured, red, _ = coloured_from_marks(graph, ps.y, ps.z, 0.6, 0.0)
        assert np.array_equal(coloured, red)


@given(
    st.integers(min_value=0, max_value=200),
    st.tuples(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    ),
    st.tuples(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    ),
)
def test_coloured_monotone_in_p_and_q(seed, ps_pair, qs_pair):
    p1, p2 = sorted(ps_pair)
    q1, q2 = sorted(qs_pair)
    mk = random_marked_set(seed, intensity=1.6, size=2.5)
    graph = gl.build_graph(mk.points)
    pattern = bowtie_pattern(graph)
    lo, _, _ = coloured_from_marks(graph, mk.y, mk.z, p1, q1, pattern)
    hi, _, _ = coloured_from_marks(graph, mk.y, mk.z, p2, q2, pattern)
    assert not np.any(lo & ~hi)


@given(st.integers(min_value=0, max_value=300))
def test_crossing_event_matches_brute_force(seed):
    mk = random_marked_set(seed, intensity=1.8, size=3.0)
    n = 2.5
    graph = gl.build_graph(mk.points)
    coloured, _, _ = coloured_from_marks(graph, mk.y, mk.z, 0.7, 0.49)
    expect = brute_crossing(mk.points, coloured, n)
    got = gl.crossing_event_marks(graph, mk.y, mk.z, 0.7, 0.49, n)
    assert got == expect


def test_crossing_event_clip_semantics():
    """clip drops out-of-window arms; full-plane enhancement keeps them.

    The far pair of the bow-tie below sits outside the window, so the center
    only turns green when enhancement sees the whole plane. The crossing
    path itself stays inside the window either way.
    """
    pts = np.array([
        [0.10, 0.00],    # source
        [0.95, 0.05],    # near pair, also on the path
        [0.95, -0.05],
        [1.80, 0.00],    # center, in the target band [1.5, 2)
        [2.65, 0.05],    # far pair, outside the window
        [2.65, -0.05],
    ])
    y = np.array([0.1, 0.1, 0.1, 0.9, 0.1, 0.1])
    z = np.full(6, 0.01)
    mk = gl.MarkedPointSet(pts, y, z, None, 1.0)
    assert gl.crossing_event(mk, 0.5, 0.3, 2.0, clip=False)
    assert not gl.crossing_event(mk, 0.5, 0.3, 2.0, clip=True)


def test_crossing_requires_both_endpoints():
    pts = np.array([[0.1, 0.0], [0.9, 0.0], [1.7, 0.0]])
    graph = gl.build_graph(pts)
    y = np.zeros(3)
    z = np.ones(3)
    assert gl.crossing_event_marks(graph, y, z, 0.5, 0.0, 2.0)
    # target annulus [1.5, 2): drop the far point and the crossing dies
    assert not gl.crossing_event_marks(graph, y, z, 0.5, 0.0, 2.4)


def test_coloring_csv_round_trip(tmp_path):
    ps = random_marked_set(23)
    graph = gl.build_graph(ps.points)
    col = gl.enhance(graph, ps, 0.5, 0.25)
    path = tmp_path / "coloring.csv"
    gl.write_coloring_csv(path, col)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "index,state"
    states = gl.read_coloring_csv(path)
    assert np.array_equal(states, col.state)
