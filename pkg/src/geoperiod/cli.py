"""Command line front end.

Exit codes: 0 success, 1 a checked hypothesis failed, 2 configuration
error, 3 numerical failure (unachievable tolerance, node budget, lost
geodesic).  All file outputs are deterministic byte for byte: floats
are written with repr, rows in a fixed order, no timestamps.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import kuznecov as kz
from . import oscint
from .config import build_chart, build_model, build_oscint_problem, parse_config
from .curvature import comparison_report, torus_graph_chart, torus_plane_chart
from .errors import ConfigError, NumericalError
from .jacobi import integrate_geodesic
from .manifold import Euclidean, FlatTorus, PointTangent, SpaceForm, WarpedSurface
from .rankcheck import surface_sweep
from .verify import run_checks


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(c) if not isinstance(c, str) else c for c in row) + "\n")


def _say(quiet, *parts):
    if not quiet:
        print(*parts)


def _curvature_bounds(model):
    """Pinching constants a <= b with -b^2 <= K <= -a^2 on the model."""
    if isinstance(model, SpaceForm):
        return model.b, model.b
    if isinstance(model, (Euclidean, FlatTorus)):
        return 0.0, 0.0
    if isinstance(model, WarpedSurface):
        lo, hi = model.r_bounds
        neg = model.profile.neg_curv(np.linspace(lo, hi, 4001))
        return math.sqrt(max(float(np.min(neg)), 0.0)), math.sqrt(float(np.max(neg)))
    return None, None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_curvature(cfg, out_dir, threads, quiet):
    model = build_model(cfg)
    if isinstance(model, SpaceForm):
        p = model.base_point()
    else:
        p = np.zeros(model.chart_dim())
    v = model.tangent_basis(p)[0]
    grid = np.asarray(cfg.r_grid, dtype=float)
    geod = integrate_geodesic(model, PointTangent(p, v), float(grid[-1]))
    report = comparison_report(model, geod, grid, tol=cfg.jacobi_tol, slack=cfg.slack)
    rows = [
        (r[0], r[1], r[2], r[3], r[4], bool(f))
        for r, f in zip(report.rows, report.flags)
    ]
    _write_csv(
        os.path.join(out_dir, "curvature.csv"),
        ("r", "horosphere", "sphere", "difference", "bound", "pass"),
        rows,
    )
    _say(quiet, f"curvature: {int(np.sum(report.flags))}/{len(rows)} grid points pass")
    return 0 if report.passed else 1


def cmd_check_hypersurface(cfg, out_dir, threads, quiet):
    model = build_model(cfg)
    chart = build_chart(cfg, model)
    a, b = _curvature_bounds(model)
    reports, summary = surface_sweep(
        chart,
        cfg.sweep_density,
        rank_tol=cfg.rank_tol,
        jacobi_tol=cfg.jacobi_tol,
        a=a,
        b=b,
        threads=threads,
    )
    d = chart.d
    header = ("index",) + tuple(f"u{i}" for i in range(d)) + (
        "rank_plus",
        "rank_minus",
        "rank_sum",
        "passes",
        "clauses",
        "consistent",
    )
    rows = []
    for i, rep in enumerate(reports):
        clause_str = "".join(str(c) for c in sorted(rep.clauses))
        rows.append(
            (i,)
            + tuple(float(x) for x in rep.point)
            + (rep.rank_plus, rep.rank_minus, rep.sum, rep.passes, clause_str, rep.consistent)
        )
    _write_csv(os.path.join(out_dir, "check_hypersurface.csv"), header, rows)
    _say(
        quiet,
        f"check-hypersurface: {summary.passed}/{summary.total} pass, "
        f"min rank sum {summary.min_rank_sum}, "
        f"{summary.inconsistencies} corollary inconsistencies",
    )
    ok = summary.fraction == 1.0 and summary.inconsistencies == 0
    return 0 if ok else 1


def cmd_oscint(cfg, out_dir, threads, quiet):
    problem = build_oscint_problem(cfg)
    if problem.phase.gradient_floor > 0.0:
        check = oscint.verify_nonstationary_bound(
            problem, order=cfg.oscint_order, node_cap=cfg.node_cap, threads=threads
        )
    elif problem.phase.hessian_floor > 0.0:
        check = oscint.verify_nondegenerate_bound(
            problem, node_cap=cfg.node_cap, threads=threads
        )
    else:
        check = None
    if check is None:
        results = oscint.evaluate_grid(problem, node_cap=cfg.node_cap, threads=threads)
    else:
        results = check.results
    rows = [
        (
            res.lam,
            res.value.real,
            res.value.imag,
            abs(res.value),
            res.err_est,
            res.err_tol,
            res.nodes,
            res.converged,
        )
        for res in results
    ]
    _write_csv(
        os.path.join(out_dir, "oscint.csv"),
        ("lambda", "real", "imag", "magnitude", "err_est", "err_tol", "nodes", "converged"),
        rows,
    )
    if check is None:
        _say(quiet, "oscint: constant phase, no decay bound to check")
        return 0
    _say(
        quiet,
        f"oscint: {check.kind} fit exponent {check.fit.exponent!r} "
        f"(target <= {check.target_exponent!r}), "
        + ("pass" if check.passed else "FAIL"),
    )
    return 0 if check.passed and check.quadrature_ok else 1


def _cosine_height(amplitude, waves):
    def height(ang):
        ang = np.atleast_1d(np.asarray(ang, dtype=float))
        return amplitude * float(np.sum(np.cos(waves * ang)))

    return height


def cmd_kuznecov(cfg, out_dir, threads, quiet):
    target = cfg.kuznecov_target
    if target == "sphere":
        series = kz.sphere_kuznecov(cfg.degree_cap)
    else:
        cols = np.asarray(cfg.kuznecov_columns)
        n = cols.shape[0]
        torus = FlatTorus(n)
        offset = np.asarray(cfg.kuznecov_offset, dtype=float) if cfg.kuznecov_offset else None
        if target == "torus_plane":
            chart = torus_plane_chart(torus, cols, offset)
        else:
            height = _cosine_height(cfg.kuznecov_height_amplitude, cfg.kuznecov_height_waves)
            chart = torus_graph_chart(torus, height, offset)
        series = kz.torus_kuznecov(chart, cfg.lambda_cap)
    rows = [
        (
            " ".join(str(i) for i in e.index),
            e.eigenvalue,
            e.period.real,
            e.period.imag,
            e.abs2,
            float(c),
        )
        for e, c in zip(series.entries, series.cumulative)
    ]
    _write_csv(
        os.path.join(out_dir, "kuznecov.csv"),
        ("index", "eigenvalue", "period_re", "period_im", "abs2", "cumulative"),
        rows,
    )
    _say(
        quiet,
        f"kuznecov: {len(rows)} periods, growth exponent {series.fit.exponent!r} "
        f"over window {series.fit.window!r}, sup |period| {series.period_sup!r}",
    )
    return 0


def cmd_verify_all(cfg, out_dir, threads, quiet):
    results = run_checks(seed=cfg.seed, threads=threads)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
    ]
    n_pass = sum(1 for r in results if r.passed)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    for line in lines:
        _say(quiet, line)
    return 0 if n_pass == len(results) else 1


_COMMANDS = {
    "curvature": cmd_curvature,
    "check-hypersurface": cmd_check_hypersurface,
    "oscint": cmd_oscint,
    "kuznecov": cmd_kuznecov,
    "verify-all": cmd_verify_all,
}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="path to an INI run configuration")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument(
        "--threads", type=int, default=None, help="worker threads (0 = machine count)"
    )
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser = argparse.ArgumentParser(
        prog="geoperiod",
        description="curvature comparison, rank checks, and period-integral decay",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__)
    return parser


def run(argv=None):
    args = _build_parser().parse_args(argv)
    cfg = parse_config(args.config) if args.config else parse_config()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    quiet = args.quiet or cfg.quiet
    threads = cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    return _COMMANDS[args.command](cfg, out_dir, threads, quiet)


def main(argv=None):
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
