"""Shared fixtures and reference implementations used across the suite.

The reference implementations here are deliberately naive (all-pairs scans,
python BFS, direct event evaluation) so they can serve as independent
oracles for the optimized code paths.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import gilbertlab as gl

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: end-to-end acceptance gate (slow)"
    )


# ---------------------------------------------------------------------------
# reference implementations


def brute_edges(points: np.ndarray, radius: float = 1.0) -> set[tuple[int, int]]:
    """All-pairs edge set: {i, j} iff squared distance <= radius^2."""
    pts = np.asarray(points, dtype=np.float64)
    r2 = radius * radius
    out = set()
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = pts[i] - pts[j]
            if d[0] * d[0] + d[1] * d[1] <= r2:
                out.add((i, j))
    return out


def brute_components(n: int, edges, active=None) -> list[set[int]]:
    """Connected components over active vertices via python BFS."""
    if active is None:
        active = np.ones(n, dtype=bool)
    adj = {v: [] for v in range(n)}
    for i, j in edges:
        if active[i] and active[j]:
            adj[i].append(j)
            adj[j].append(i)
    seen = set()
    comps = []
    for s in range(n):
        if not active[s] or s in seen:
            continue
        comp = {s}
        queue = [s]
        seen.add(s)
        while queue:
            v = queue.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    comp.add(u)
                    queue.append(u)
        comps.append(comp)
    return comps


def brute_crossing(points, coloured, n: float) -> bool:
    """Direct windowed-crossing check from scratch: no shared code paths."""
    pts = np.asarray(points, dtype=np.float64)
    d = np.hypot(pts[:, 0], pts[:, 1])
    col = np.asarray(coloured, dtype=bool) & (d < n)
    idx = np.flatnonzero(col)
    if len(idx) == 0:
        return False
    edges = brute_edges(pts)
    comps = brute_components(len(pts), edges, col)
    src = set(np.flatnonzero(col & (d < 0.5)).tolist())
    tgt = set(np.flatnonzero(col & (d >= n - 0.5) & (d < n)).tolist())
    if not src or not tgt:
        return False
    return any(comp & src and comp & tgt for comp in comps)


def brute_eligible(points, radius: float = 1.0):
    """Re-derive bow-tie eligibility with six pairwise distance bits.

    A vertex is eligible when it has exactly four neighbors that split into
    two adjacent pairs with no other adjacency among the four.
    """
    pts = np.asarray(points, dtype=np.float64)
    edges = brute_edges(pts, radius)
    adj = {v: set() for v in range(len(pts))}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    out = {}
    for v in range(len(pts)):
        nb = sorted(adj[v])
        if len(nb) != 4:
            continue
        pairs = []
        for a in range(4):
            for b in range(a + 1, 4):
                if nb[b] in adj[nb[a]]:
                    pairs.append((nb[a], nb[b]))
        if len(pairs) != 2:
            continue
        (a1, a2), (b1, b2) = pairs
        if {a1, a2} & {b1, b2}:
            continue
        out[v] = (min(pairs), max(pairs))
    return out


def random_marked_set(seed: int, intensity: float = 1.5, size: float = 3.0):
    """Small Poisson sample in a disc, marks included."""
    return gl.sample_poisson(gl.Disk((0.0, 0.0), size), intensity, gl.StreamSpec(seed))


# ---------------------------------------------------------------------------
# fixtures


@pytest.fixture(scope="session")
def bridge():
    pts, n = gl.bridge_fixture()
    return pts, n


@pytest.fixture(scope="session")
def small_graphs():
    """A bag of small random graphs reused by structural tests."""
    out = []
    for seed in range(8):
        ps = random_marked_set(seed)
        out.append((ps, gl.build_graph(ps.points)))
    return out
