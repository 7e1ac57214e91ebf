"""Command line interface.

Every subcommand writes its outputs into --out plus a manifest.json listing
each written file with its SHA-256 digest, the resolved parameters and the
package version. Outputs contain no timestamps, worker counts or host
details, and all randomness flows through seed-derived streams keyed by
task indices, so reruns with the same seed are byte-identical regardless of
--workers.

Exit codes: 0 success, 2 usage error (argparse), 3 invalid parameter,
4 enumeration cap exceeded, 5 intensity bracket too narrow, 6 coupling
invariant violation, 7 missing input file, 8 malformed JSON config.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .coupling import apply_coupled_enhancement, replay_provenance, run_coupling, verify_domination
from .errors import (
    CouplingInvariantError,
    FixtureCapError,
    InvalidParameterError,
    WidenGridError,
)
from .estimation import (
    MODELS,
    SweepConfig,
    estimate_lambda_c,
    gap_experiment,
    sweep,
    write_sweep_csv,
)
from .geom_graph import build_graph, write_edges_csv
from .oracle import exact_crossing_probability, exact_pivotal, read_fixture_csv
from .pivotality import estimate_pivotal_integral, pivotal_ratio_profile, russo_check
from .point_process import Disk, StreamSpec, sample_poisson, write_points_csv

SCHEMA_VERSION = 1

EXIT_INVALID = 3
EXIT_CAP = 4
EXIT_WIDEN = 5
EXIT_COUPLING = 6
EXIT_MISSING = 7
EXIT_BADJSON = 8


def _jsonable(obj):
    """Recursively convert to plain JSON types; non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(doc), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: str, command: str, params: dict, names: list[str]) -> None:
    outputs = []
    for name in names:
        path = os.path.join(out_dir, name)
        outputs.append({"path": name, "sha256": _sha256(path), "bytes": os.path.getsize(path)})
    _write_json(os.path.join(out_dir, "manifest.json"), {
        "schema_version": SCHEMA_VERSION,
        "tool": "gilbertlab",
        "version": __version__,
        "command": command,
        "parameters": params,
        "outputs": outputs,
    })


class _Resolver:
    """Layer command line values over config file values over defaults."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self.args = args
        self.config = config
        self.resolved: dict = {}

    def get(self, name: str, default=None, cast=None, required: bool = False):
        value = getattr(self.args, name.replace("-", "_"), None)
        if value is None:
            value = self.config.get(name, default)
        if value is None:
            if required:
                raise InvalidParameterError(f"missing required parameter --{name}")
            self.resolved[name] = None
            return None
        if cast is not None:
            try:
                value = cast(value)
            except (TypeError, ValueError) as exc:
                raise InvalidParameterError(f"bad value for --{name}: {value!r}") from exc
        self.resolved[name] = value
        return value


def _float_list(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(tok) for tok in str(text).split(",") if tok != "")


def _grid(text) -> tuple[float, ...]:
    """Grid syntax: either 'a,b,c' or 'start:stop:count' inclusive."""
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    text = str(text)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(text)
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2:
            raise ValueError(text)
        return tuple(float(v) for v in np.linspace(start, stop, count))
    return _float_list(text)


def _q_value(raw) -> float | None:
    if raw is None or (isinstance(raw, str) and raw.lower() in ("p2", "p^2")):
        return None
    return float(raw)


def _ensure_out(res: _Resolver) -> str:
    out = res.get("out", ".", cast=str)
    os.makedirs(out, exist_ok=True)
    return out


def _seed_stream(res: _Resolver) -> StreamSpec:
    return StreamSpec(res.get("seed", 0, cast=int))


def _cmd_sample(res: _Resolver) -> int:
    intensity = res.get("intensity", cast=float, required=True)
    n = res.get("n", cast=float, required=True)
    out = _ensure_out(res)
    stream = _seed_stream(res)
    pts = sample_poisson(Disk((0.0, 0.0), n), intensity, stream)
    graph = build_graph(pts.points)
    write_points_csv(os.path.join(out, "points.csv"), pts.points, pts.y, pts.z)
    write_edges_csv(os.path.join(out, "edges.csv"), graph)
    _write_manifest(out, "sample", res.resolved, ["points.csv", "edges.csv"])
    print(f"sample: {pts.n} points, {graph.m} edges -> {out}")
    return 0


def _cmd_theta(res: _Resolver) -> int:
    config = SweepConfig(
        intensity=res.get("intensity", cast=float, required=True),
        n_values=res.get("n", cast=_float_list, required=True),
        p_values=res.get("p-grid", "0.05:0.95:19", cast=_grid),
        models=tuple(str(res.get("models", "site,bond,enhanced")).split(",")),
        q=_q_value(res.get("q", "p2")),
        replicates=res.get("replicates", 400, cast=int),
    )
    workers = res.get("workers", cast=int)
    out = _ensure_out(res)
    rows = sweep(config, _seed_stream(res), workers=workers)
    write_sweep_csv(os.path.join(out, "sweep.csv"), rows)
    _write_manifest(out, "theta", res.resolved, ["sweep.csv"])
    print(f"theta: {len(rows)} rows -> {out}")
    return 0


PROFILE_HEADER = "p,q,n,intensity,trials,pivotal1,pivotal1_se,pivotal2,pivotal2_se,ratio"


def _cmd_pivotal(res: _Resolver) -> int:
    p_grid = res.get("p-grid", cast=_grid)
    if p_grid is not None:
        q_grid = res.get("q-grid", cast=_grid)
        if q_grid is None:
            pairs = [(p, p * p) for p in p_grid]
        else:
            pairs = [(p, q) for p in p_grid for q in q_grid]
        rows = pivotal_ratio_profile(
            [pq[0] for pq in pairs],
            res.get("n", cast=float, required=True),
            res.get("intensity", cast=float, required=True),
            res.get("trials", 10_000, cast=int),
            _seed_stream(res),
            q_values=[pq[1] for pq in pairs],
            workers=res.get("workers", cast=int),
        )
        out = _ensure_out(res)
        with open(os.path.join(out, "pivotal_profile.csv"), "w", newline="") as fh:
            fh.write(PROFILE_HEADER + "\n")
            for row in rows:
                fh.write(",".join(repr(float(row[key]))
                                  for key in PROFILE_HEADER.split(",")) + "\n")
        _write_manifest(out, "pivotal", res.resolved, ["pivotal_profile.csv"])
        print(f"pivotal: profile of {len(rows)} grid points -> {out}")
        return 0
    kind = res.get("kind", cast=int, required=True)
    est = estimate_pivotal_integral(
        kind,
        res.get("p", cast=float, required=True),
        res.get("q", cast=float, required=True),
        res.get("n", cast=float, required=True),
        res.get("intensity", cast=float, required=True),
        res.get("trials", 10_000, cast=int),
        _seed_stream(res),
        workers=res.get("workers", cast=int),
    )
    out = _ensure_out(res)
    _write_json(os.path.join(out, "pivotal.json"), {
        "schema_version": SCHEMA_VERSION,
        "kind": est.kind, "p": est.p, "q": est.q, "n": est.n,
        "intensity": est.intensity, "trials": est.trials, "hits": est.hits,
        "frequency": est.frequency, "value": est.value, "se": est.se,
        "window_measure": est.intensity * math.pi * est.n * est.n,
    })
    _write_manifest(out, "pivotal", res.resolved, ["pivotal.json"])
    print(f"pivotal: kind {est.kind} integral {est.value:.6g} (se {est.se:.3g}) -> {out}")
    return 0


def _cmd_russo_check(res: _Resolver) -> int:
    check = russo_check(
        res.get("wrt", cast=str, required=True),
        res.get("p", cast=float, required=True),
        res.get("q", cast=float, required=True),
        res.get("n", cast=float, required=True),
        res.get("intensity", cast=float, required=True),
        h=res.get("h", 0.05, cast=float),
        fd_trials=res.get("fd-trials", 20_000, cast=int),
        pivotal_trials=res.get("pivotal-trials", 20_000, cast=int),
        stream=_seed_stream(res),
        tolerance_se=res.get("tolerance-se", 3.0, cast=float),
        workers=res.get("workers", cast=int),
    )
    out = _ensure_out(res)
    _write_json(os.path.join(out, "russo.json"), {
        "schema_version": SCHEMA_VERSION,
        "wrt": check.wrt, "p": check.p, "q": check.q, "h": check.h,
        "n": check.n, "intensity": check.intensity,
        "fd": {"trials": check.fd_trials, "value": check.fd_value, "se": check.fd_se},
        "integral": {
            "kind": check.integral.kind, "trials": check.integral.trials,
            "hits": check.integral.hits, "value": check.integral.value,
            "se": check.integral.se,
        },
        "difference": check.difference,
        "combined_se": check.combined_se,
        "z_score": check.z_score,
        "tolerance_se": check.tolerance_se,
        "consistent": check.consistent,
    })
    _write_manifest(out, "russo-check", res.resolved, ["russo.json"])
    verdict = "consistent" if check.consistent else "INCONSISTENT"
    print(f"russo-check: d/d{check.wrt} fd {check.fd_value:.5g} vs integral "
          f"{check.integral.value:.5g} ({verdict}) -> {out}")
    return 0


def _cmd_couple(res: _Resolver) -> int:
    intensity = res.get("intensity", cast=float, required=True)
    n = res.get("n", cast=float, required=True)
    p = res.get("p", cast=float, required=True)
    replicates = res.get("replicates", 100, cast=int)
    out = _ensure_out(res)
    stream = _seed_stream(res)
    failures = 0
    red_sum = 0
    green_sum = 0
    cfg_sum = 0
    vertex_sum = 0
    for r in range(replicates):
        st = stream.child(r)
        pts = sample_poisson(Disk((0.0, 0.0), n), intensity, st.child(0))
        graph = build_graph(pts.points)
        state = run_coupling(graph, p, st.child(1))
        replay_provenance(graph, state)
        enh = apply_coupled_enhancement(graph, state)
        coloured = state.red | enh.green
        report = verify_domination(graph, coloured, state.x_open)
        if not report.holds:
            failures += 1
        red_sum += int(state.red.sum())
        green_sum += int(enh.green.sum())
        cfg_sum += int(enh.configured.sum())
        vertex_sum += graph.n
    _write_json(os.path.join(out, "coupling.json"), {
        "schema_version": SCHEMA_VERSION,
        "intensity": intensity, "n": n, "p": p, "replicates": replicates,
        "domination_holds": failures == 0,
        "domination_failures": failures,
        "vertices_total": vertex_sum,
        "red_total": red_sum,
        "red_rate": red_sum / vertex_sum if vertex_sum else 0.0,
        "configured_total": cfg_sum,
        "green_total": green_sum,
        "green_rate_given_configured": green_sum / cfg_sum if cfg_sum else 0.0,
        "expected_red_rate": p,
        "expected_green_rate": p * p,
    })
    _write_manifest(out, "couple", res.resolved, ["coupling.json"])
    print(f"couple: {replicates} replicates, domination "
          f"{'holds' if failures == 0 else f'FAILED x{failures}'} -> {out}")
    return 0


def _cmd_oracle(res: _Resolver) -> int:
    fixture_path = res.get("fixture", cast=str, required=True)
    points = read_fixture_csv(fixture_path)
    p = res.get("p", cast=float, required=True)
    q = res.get("q", cast=float, required=True)
    n = res.get("n", cast=float, required=True)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "fixture": os.path.basename(fixture_path),
        "fixture_sha256": _sha256(fixture_path),
        "points": len(points),
        "p": p, "q": q, "n": n,
        "crossing_probability": exact_crossing_probability(points, p, q, n),
    }
    pivot = res.get("pivot", cast=_float_list)
    if pivot is not None:
        kind = res.get("kind", cast=int, required=True)
        if len(pivot) != 2:
            raise InvalidParameterError("--pivot must be 'x,y'")
        doc["pivotal"] = {
            "kind": kind,
            "location": list(pivot),
            "value": exact_pivotal(points, pivot, kind, p, q, n),
        }
    out = _ensure_out(res)
    _write_json(os.path.join(out, "oracle.json"), doc)
    _write_manifest(out, "oracle", res.resolved, ["oracle.json"])
    print(f"oracle: crossing probability {doc['crossing_probability']:.12g} -> {out}")
    return 0


def _cmd_critical(res: _Resolver) -> int:
    est = estimate_lambda_c(
        res.get("n-values", "10,20,40", cast=_float_list),
        intensity_lo=res.get("intensity-lo", 1.0, cast=float),
        intensity_hi=res.get("intensity-hi", 2.2, cast=float),
        replicates=res.get("replicates", 400, cast=int),
        stream=_seed_stream(res),
        bootstrap=res.get("bootstrap", 200, cast=int),
        lcf_replicates=res.get("lcf-replicates", 200, cast=int),
        workers=res.get("workers", cast=int),
    )
    out = _ensure_out(res)
    _write_json(os.path.join(out, "critical.json"), {
        "schema_version": SCHEMA_VERSION,
        "value": est.value,
        "interval": list(est.interval),
        "members": est.members,
        "n_values": list(est.n_values),
        "intensity_lo": est.intensity_lo,
        "intensity_hi": est.intensity_hi,
        "replicates": est.replicates,
        "diagnostics": est.diagnostics,
    })
    with open(os.path.join(out, "critical_curves.csv"), "w", newline="") as fh:
        fh.write("n,lambda,theta,se\n")
        for row in est.curves:
            fh.write(f"{repr(float(row['n']))},{repr(float(row['lambda']))},"
                     f"{repr(float(row['theta']))},{repr(float(row['se']))}\n")
    _write_manifest(out, "critical", res.resolved, ["critical.json", "critical_curves.csv"])
    print(f"critical: {est.value:.4f} in [{est.interval[0]:.4f}, {est.interval[1]:.4f}] -> {out}")
    return 0


def _cmd_gap(res: _Resolver) -> int:
    report = gap_experiment(
        res.get("intensity", cast=float, required=True),
        res.get("n-values", "10,20,40", cast=_float_list),
        _seed_stream(res),
        replicates=res.get("replicates", 400, cast=int),
        bootstrap=res.get("bootstrap", 1000, cast=int),
        workers=res.get("workers", cast=int),
    )
    out = _ensure_out(res)
    _write_json(os.path.join(out, "gap.json"), {
        "schema_version": SCHEMA_VERSION,
        "intensity": report.intensity,
        "replicates": report.replicates, "bootstrap": report.bootstrap,
        "rows": [{
            "n": row.n,
            "site_half": row.site_half, "site_ci": list(row.site_ci),
            "bond_half": row.bond_half, "bond_ci": list(row.bond_ci),
            "gap": row.gap, "gap_ci": list(row.gap_ci),
            "disjoint": row.disjoint, "positive": row.positive,
        } for row in report.rows],
    })
    _write_manifest(out, "gap", res.resolved, ["gap.json"])
    last = report.rows[-1]
    print(f"gap: n={last.n:g} site {last.site_half:.4f} vs bond {last.bond_half:.4f} "
          f"(gap {last.gap:.4f}, disjoint={last.disjoint}) -> {out}")
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "theta": _cmd_theta,
    "pivotal": _cmd_pivotal,
    "russo-check": _cmd_russo_check,
    "couple": _cmd_couple,
    "oracle": _cmd_oracle,
    "critical": _cmd_critical,
    "gap": _cmd_gap,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gilbertlab",
        description="Continuum percolation experiments on random geometric graphs.",
    )
    parser.add_argument("--version", action="version", version=f"gilbertlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
        sp.add_argument("--workers", type=int, default=None,
                        help="process count (default env GILBERTLAB_WORKERS or 1)")
        sp.add_argument("--out", default=None, help="output directory (default .)")
        sp.add_argument("--config", default=None, help="JSON file with parameter defaults")

    sp = sub.add_parser("sample", help="sample one marked point configuration and its graph")
    sp.add_argument("--intensity", type=float)
    sp.add_argument("--n", type=float, help="window radius")
    common(sp)

    sp = sub.add_parser("theta", help="crossing-probability sweep over a level grid")
    sp.add_argument("--intensity", type=float)
    sp.add_argument("--n", help="comma-separated window radii")
    sp.add_argument("--p-grid", help="levels: 'a,b,c' or 'start:stop:count'")
    sp.add_argument("--models", help=f"comma-separated subset of {','.join(MODELS)}")
    sp.add_argument("--q", help="enhancement level, or 'p2' to tie it to p^2")
    sp.add_argument("--replicates", type=int)
    common(sp)

    sp = sub.add_parser("pivotal", help="Monte Carlo pivotality integral")
    sp.add_argument("--kind", type=int, choices=(1, 2))
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--p-grid", help="profile mode: site levels 'a,b,c' or 'start:stop:count'")
    sp.add_argument("--q-grid", help="with --p-grid: enhancement levels (default q = p^2)")
    sp.add_argument("--n", type=float)
    sp.add_argument("--intensity", type=float)
    sp.add_argument("--trials", type=int)
    common(sp)

    sp = sub.add_parser("russo-check", help="finite difference vs pivotality integral")
    sp.add_argument("--wrt", choices=("p", "q"))
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--h", type=float)
    sp.add_argument("--n", type=float)
    sp.add_argument("--intensity", type=float)
    sp.add_argument("--fd-trials", type=int)
    sp.add_argument("--pivotal-trials", type=int)
    sp.add_argument("--tolerance-se", type=float)
    common(sp)

    sp = sub.add_parser("couple", help="coupled site/bond exploration with domination audit")
    sp.add_argument("--intensity", type=float)
    sp.add_argument("--n", type=float)
    sp.add_argument("--p", type=float)
    sp.add_argument("--replicates", type=int)
    common(sp)

    sp = sub.add_parser("oracle", help="exact probabilities on a small fixture")
    sp.add_argument("--fixture", help="fixture CSV (index,x,y[,Y,Z])")
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--n", type=float)
    sp.add_argument("--pivot", help="insertion location 'x,y' for a pivotality query")
    sp.add_argument("--kind", type=int, choices=(1, 2))
    common(sp)

    sp = sub.add_parser("critical", help="critical intensity estimate")
    sp.add_argument("--n-values", help="comma-separated window radii")
    sp.add_argument("--intensity-lo", type=float)
    sp.add_argument("--intensity-hi", type=float)
    sp.add_argument("--replicates", type=int)
    sp.add_argument("--bootstrap", type=int)
    sp.add_argument("--lcf-replicates", type=int)
    common(sp)

    sp = sub.add_parser("gap", help="site vs bond half-point gap")
    sp.add_argument("--intensity", type=float)
    sp.add_argument("--n-values", help="comma-separated window radii")
    sp.add_argument("--replicates", type=int)
    sp.add_argument("--bootstrap", type=int)
    common(sp)

    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise _BadJson(str(exc)) from exc
    if not isinstance(doc, dict):
        raise _BadJson("config root must be a JSON object")
    return doc


class _BadJson(Exception):
    pass


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        res = _Resolver(args, config)
        return _COMMANDS[args.command](res)
    except _BadJson as exc:
        print(f"error: bad JSON config: {exc}", file=sys.stderr)
        return EXIT_BADJSON
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename or exc}", file=sys.stderr)
        return EXIT_MISSING
    except FixtureCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except WidenGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WIDEN
    except CouplingInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COUPLING
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
