"""Acceptance gate: one test per shipped guarantee.

Each test pins an operating point and a tolerance; together they are the
release checklist for the package. Statistical gates use 3 sigma unless the
property is exact, in which case zero violations are required. The two
long-run regression bands (critical intensity, site/bond gap) were frozen
from dedicated calibration runs recorded in the project notes.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time

import numpy as np
import pytest

import gilbertlab as gl
from gilbertlab.cli import main as cli_main
from gilbertlab.enhancement import STATE_GREEN

pytestmark = pytest.mark.acceptance

LAMBDA_C_SEED = 101
LAMBDA_C_BAND = (1.40, 1.48)
GAP_SEED = 7
GAP_BAND_N40 = (0.19, 0.25)


@pytest.fixture(scope="session")
def lambda_c_estimate():
    return gl.estimate_lambda_c(
        (10.0, 20.0, 40.0), stream=gl.StreamSpec(LAMBDA_C_SEED),
        replicates=400, workers=4,
    )


def test_oracle_equivalence_monte_carlo():
    """Fixture MC at 1e5 mark replicates within 3 sigma of enumeration."""
    pts, n = gl.bridge_fixture()
    graph = gl.build_graph(pts)
    start = time.perf_counter()
    trials = 100_000
    rng = np.random.default_rng(31)
    for p, q in ((0.5, 0.5), (0.7, 0.3), (0.9, 0.1)):
        exact = gl.exact_crossing_probability(pts, p, q, n)
        dual = gl.exact_crossing_probability(pts, p, q, n, order="reverse")
        assert abs(exact - dual) < 1e-12
        hits = 0
        for _ in range(trials):
            y = rng.random(len(pts))
            z = rng.random(len(pts))
            hits += gl.crossing_event_marks(graph, y, z, p, q, n)
        freq = hits / trials
        sigma = math.sqrt(exact * (1.0 - exact) / trials)
        assert abs(freq - exact) < 3.0 * sigma, (p, q, freq, exact)
    assert time.perf_counter() - start < 60.0


def _witness_ok(graph, y, z, p, q, w):
    nb = graph.neighbors(w.center)
    if tuple(sorted(w.neighbors)) != tuple(int(v) for v in nb):
        return False
    if len(set(w.neighbors)) != 4:
        return False
    a, b = w.first_pair
    c, d = w.second_pair
    if not (a < b and c < d and a == min(w.neighbors)):
        return False

    def adj(u, v):
        return v in graph.neighbors(u)

    if not (adj(a, b) and adj(c, d)):
        return False
    if any(adj(u, v) for u in (a, b) for v in (c, d)):
        return False
    if not all(y[u] < p for u in w.neighbors):
        return False
    return y[w.center] >= p and z[w.center] < q


def test_bowtie_witnesses_and_center_exclusions():
    """1e3 random configurations: witnesses valid, centers isolated."""
    p, q = 0.65, 0.85
    greens = 0
    for seed in range(1000):
        pts = gl.sample_poisson(gl.Disk((0.0, 0.0), 3.5), 2.2, gl.StreamSpec(seed))
        graph = gl.build_graph(pts.points)
        coloring = gl.enhance(graph, pts, p, q)
        green_idx = np.flatnonzero(coloring.state == STATE_GREEN)
        assert set(int(v) for v in green_idx) == set(coloring.witnesses)
        for v in green_idx:
            assert _witness_ok(graph, pts.y, pts.z, p, q, coloring.witnesses[int(v)])
        greens += len(green_idx)
        red = pts.y < p
        cfg = np.flatnonzero(gl.configured_centers(graph, red))
        for i, u in enumerate(cfg):
            # all four neighbors red, so no closed neighbor and in
            # particular no neighboring configured center (those are closed)
            assert red[graph.neighbors(u)].all()
            for v in cfg[i + 1:]:
                assert v not in graph.neighbors(u)
    assert greens >= 25, "regime produced too few green vertices to be probative"


def test_monotone_coupling_exact():
    """1e3 configurations with common marks: coloured sets nest. Exact."""
    for seed in range(1000):
        pts = gl.sample_poisson(gl.Disk((0.0, 0.0), 3.0), 1.8, gl.StreamSpec(seed))
        graph = gl.build_graph(pts.points)
        pattern = gl.bowtie_pattern(graph)
        p = 0.1 + 0.08 * (seed % 10)
        q = 0.1 + 0.09 * (seed % 9)
        base, _, _ = gl.coloured_from_marks(graph, pts.y, pts.z, p, q, pattern)
        up_p, _, _ = gl.coloured_from_marks(graph, pts.y, pts.z, p + 0.1, q, pattern)
        up_q, _, _ = gl.coloured_from_marks(graph, pts.y, pts.z, p, q + 0.1, pattern)
        assert not (base & ~up_p).any(), f"p-monotonicity violated at seed {seed}"
        assert not (base & ~up_q).any(), f"q-monotonicity violated at seed {seed}"


def test_russo_identity_both_derivatives():
    """Finite difference vs pivotal integral at (2, 4, 0.7, 0.3), 3 SE."""
    start = time.perf_counter()
    chk_p = gl.russo_check("p", 0.7, 0.3, 4.0, 2.0, h=0.02,
                           fd_trials=150_000, pivotal_trials=160_000,
                           stream=gl.StreamSpec(11), workers=4)
    assert chk_p.consistent, (chk_p.fd_value, chk_p.integral.value, chk_p.z_score)
    chk_q = gl.russo_check("q", 0.7, 0.3, 4.0, 2.0, h=0.05,
                           fd_trials=100_000, pivotal_trials=200_000,
                           stream=gl.StreamSpec(12), workers=4)
    assert chk_q.consistent, (chk_q.fd_value, chk_q.integral.value, chk_q.z_score)
    assert time.perf_counter() - start < 600.0


def test_coupling_domination_and_green_rate():
    """1e3 couplings per p at (3, 15): domination, single consumption, p^2."""
    from gilbertlab.coupling import PROV_EDGE

    for p in (0.3, 0.5, 0.7):
        configured = 0
        greens = 0
        stream = gl.StreamSpec(900 + int(10 * p))
        for rep in range(1000):
            st = stream.child(rep)
            pts = gl.sample_poisson(gl.Disk((0.0, 0.0), 15.0), 3.0, st.child(0))
            graph = gl.build_graph(pts.points)
            state = gl.run_coupling(graph, p, st.child(1))
            enh = gl.apply_coupled_enhancement(graph, state)
            coloured = state.red | enh.green
            report = gl.verify_domination(graph, coloured, state.x_open)
            assert report.holds, f"domination violated at p={p} rep={rep}"
            # single consumption: site exploration and green arms draw
            # disjoint edges, and no edge mark state two vertices
            assert not (state.examined & enh.consumed).any()
            edge_idx = state.prov_idx[state.prov_kind == PROV_EDGE]
            assert len(np.unique(edge_idx)) == len(edge_idx)
            configured += int(enh.configured.sum())
            greens += int(enh.green.sum())
        assert configured >= 10, f"too few configured centers at p={p}"
        sigma = math.sqrt(configured * p * p * (1.0 - p * p))
        assert abs(greens - configured * p * p) < 3.0 * sigma, (p, greens, configured)


def test_rescaling_identity_of_half_points():
    """lambda * p_half(lambda, 20) agrees between lambda = 2 and 3."""
    est2 = gl.estimate_half_point("site", 2.0, 20.0, gl.StreamSpec(61),
                                  max_replicates=1600, workers=4)
    est3 = gl.estimate_half_point("site", 3.0, 20.0, gl.StreamSpec(62),
                                  max_replicates=1600, workers=4)
    assert est2.crossed and est3.crossed
    lo = max(2.0 * est2.ci[0], 3.0 * est3.ci[0])
    hi = min(2.0 * est2.ci[1], 3.0 * est3.ci[1])
    assert lo <= hi, (est2.value, est2.ci, est3.value, est3.ci)


def test_critical_intensity_regression_band(lambda_c_estimate):
    """Consensus over n in {10, 20, 40} lands in the frozen band."""
    est = lambda_c_estimate
    assert LAMBDA_C_BAND[0] <= est.value <= LAMBDA_C_BAND[1], est.value
    assert est.interval[0] <= est.value <= est.interval[1]


def test_site_bond_gap_strict_ordering(lambda_c_estimate):
    """At twice the estimated critical intensity the site and bond
    half-point CIs separate, with bond below site at every window."""
    lam = 2.0 * lambda_c_estimate.value
    report = gl.gap_experiment(lam, (10.0, 20.0, 40.0), gl.StreamSpec(GAP_SEED),
                               replicates=400, workers=4)
    for row in report.rows:
        assert row.bond_half < row.site_half, row
    r40 = report.row(40.0)
    assert r40.disjoint, (r40.site_ci, r40.bond_ci)
    assert r40.positive
    assert GAP_BAND_N40[0] <= r40.gap <= GAP_BAND_N40[1], r40.gap


_DETERMINISM_RUNS = {
    "sample": ["--intensity", "1.5", "--n", "2", "--seed", "5"],
    "theta": ["--intensity", "1.5", "--n", "2", "--p-grid", "0.4,0.6",
              "--replicates", "8", "--seed", "5"],
    "pivotal": ["--kind", "1", "--p", "0.6", "--q", "0.3", "--n", "2",
                "--intensity", "1.5", "--trials", "200", "--seed", "5"],
    "russo-check": ["--wrt", "p", "--p", "0.6", "--q", "0.3", "--n", "2",
                    "--intensity", "1.5", "--fd-trials", "200",
                    "--pivotal-trials", "200", "--seed", "5"],
    "couple": ["--intensity", "2.0", "--n", "3", "--p", "0.5",
               "--replicates", "6", "--seed", "5"],
    "oracle": ["--p", "0.6", "--q", "0.3", "--n", "4", "--seed", "5"],
    "critical": ["--n-values", "3,6", "--replicates", "48", "--bootstrap", "40",
                 "--lcf-replicates", "30", "--seed", "5"],
    "gap": ["--intensity", "2.9", "--n-values", "2", "--replicates", "16",
            "--bootstrap", "50", "--seed", "5"],
}


def test_cli_determinism_across_workers(tmp_path):
    """Every subcommand: byte-identical outputs at 1 and 2 workers."""
    pts, _ = gl.bridge_fixture()
    fixture = tmp_path / "bowtie8.csv"
    gl.write_points_csv(fixture, pts, np.zeros(len(pts)), np.zeros(len(pts)))

    for command, args in _DETERMINISM_RUNS.items():
        if command == "oracle":
            args = args + ["--fixture", str(fixture)]
        digests = []
        for tag, workers in (("a", "1"), ("b", "2")):
            out = tmp_path / f"{command}-{tag}"
            code = cli_main([command, *args, "--workers", workers, "--out", str(out)])
            assert code == 0, command
            with open(out / "manifest.json") as fh:
                manifest = json.load(fh)
            listed = {}
            for entry in manifest["outputs"]:
                with open(out / entry["path"], "rb") as fh:
                    listed[entry["path"]] = hashlib.sha256(fh.read()).hexdigest()
                assert listed[entry["path"]] == entry["sha256"]
            digests.append(listed)
        assert digests[0] == digests[1], f"{command} output depends on worker count"
