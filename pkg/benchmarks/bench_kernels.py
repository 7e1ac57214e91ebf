"""Compare the compiled kernel extension against the pure-numpy fallback.

Runs each hot kernel on identical inputs through both backends, checks the
outputs agree, and prints median wall times with the speedup. Invoke from
the repository root:

    python3 benchmarks/bench_kernels.py --intensity 2.0 --n 10 --repeats 5
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

import gilbertlab as gl
from gilbertlab._kernels import get_backend


def timed(fn, repeats):
    best = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best.append(time.perf_counter() - t0)
    return result, statistics.median(best)


def prepare(intensity, n, seed):
    pts = gl.sample_poisson(gl.Disk((0.0, 0.0), n), intensity, gl.StreamSpec(seed))
    graph = gl.build_graph(pts.points)
    rng = gl.StreamSpec(seed).child(1).generator()
    x = rng.random(graph.m)
    dist = np.hypot(pts.points[:, 0], pts.points[:, 1])
    src = dist < 0.5
    tgt = (dist >= n - 0.5) & (dist < n)
    return pts, graph, x, src, tgt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--intensity", type=float, default=2.0)
    ap.add_argument("--n", type=float, default=10.0)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    try:
        compiled = get_backend("compiled")
    except ImportError:
        raise SystemExit("compiled backend not importable; build it first "
                         "(pip install --no-build-isolation -e .)")
    pure = get_backend("pure")

    pts, graph, x, src, tgt = prepare(args.intensity, args.n, args.seed)
    y, z = pts.y, pts.z
    order_y = np.argsort(y, kind="stable")
    order_x = np.argsort(x, kind="stable")
    r2 = 1.0
    coloured = y < 0.55
    x_open = x < 0.55
    z_open = z < 0.3

    cases = {
        "build_edges": lambda b: b.build_edges(pts.points, 1.0),
        "eligible_mask": lambda b: b.eligible_mask(
            graph.indptr, graph.indices, pts.points, r2),
        "bfs_hits": lambda b: b.bfs_hits(
            graph.indptr, graph.indices, graph.adj_edge, coloured, src, tgt),
        "label_active": lambda b: b.label_active(
            graph.indptr, graph.indices, graph.adj_edge, coloured),
        "site_threshold": lambda b: b.site_threshold(
            graph.indptr, graph.indices, y, order_y, src, tgt),
        "bond_threshold": lambda b: b.bond_threshold(
            graph.n, graph.edges[:, 0], graph.edges[:, 1], x, order_x, src, tgt),
        "run_coupling_core": lambda b: b.run_coupling_core(
            graph.indptr, graph.indices, graph.adj_edge, x_open, z_open),
    }

    print(f"{graph.n} vertices, {graph.m} edges "
          f"(intensity {args.intensity:g}, window {args.n:g}, seed {args.seed})")
    print(f"{'kernel':<18} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for name, call in cases.items():
        res_p, t_p = timed(lambda: call(pure), args.repeats)
        res_c, t_c = timed(lambda: call(compiled), args.repeats)
        if isinstance(res_p, tuple):
            agree = all(np.array_equal(np.asarray(a), np.asarray(b))
                        for a, b in zip(res_p, res_c))
        else:
            agree = np.array_equal(np.asarray(res_p), np.asarray(res_c))
        flag = "" if agree else "  MISMATCH"
        print(f"{name:<18} {t_p * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms "
              f"{t_p / t_c:>7.1f}x{flag}")


if __name__ == "__main__":
    main()
