"""Command line front end.

Subcommands: green (kernel tables + positivity), certify (certificate scan
and existence report), solve (find the positive periodic solutions), sweep
(lambda continuation to CSV), reproduce (built-in benchmark scenarios with
pass/fail clauses).

All numeric output is printed with 17 significant digits and no environment
state is consulted, so identical invocations produce byte-identical files.
Exit codes: 0 found/success, 1 clean "nothing certified/found" or a failed
reproduce clause, 2 numeric failure, 3 input/config error.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .benchmarks import PRESETS
from .certify import (
    annuli_from_scan,
    classify_regime,
    large_lambda_threshold,
    scan_radii,
)
from .cone import compute_constants
from .config import load_config_file, parse_config
from .errors import ConfigError, HypothesisError, PericoneError
from .greens import build_green_table, verify_positivity
from .solver import SolveOptions, continue_lambda, find_solutions

__all__ = ["main"]

EXIT_FOUND = 0
EXIT_NOTHING = 1
EXIT_NUMERIC = 2
EXIT_INPUT = 3

DISCLAIMER = ("failure to certify is not evidence of non-existence; "
              "the certificates are conservative sufficient conditions")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _bool(b) -> str:
    return "true" if b else "false"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _write_json(path: Path, doc):
    _write_text(path, json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")


def _load(args):
    return parse_config(load_config_file(args.config))


def _build_tables(problem, n_grid):
    return [build_green_table(problem.a[i], n_grid) for i in range(problem.n)]


def _radius_grid(rmin: float, rmax: float, per_decade: int) -> np.ndarray:
    if rmin <= 0.0 or rmax <= rmin:
        raise ConfigError("--rmin/--rmax", "need 0 < rmin < rmax")
    if per_decade < 2:
        raise ConfigError("--per-decade", "need at least 2 radii per decade")
    count = max(2, int(round(math.log10(rmax / rmin) * (per_decade - 1))) + 1)
    return np.geomspace(rmin, rmax, count)


def cmd_green(args) -> int:
    parsed = _load(args)
    problem, n_grid = parsed.problem, parsed.n_grid
    out = Path(args.out)
    reports = []
    for i in range(problem.n):
        table = build_green_table(problem.a[i], n_grid)
        pos = verify_positivity(table)
        t = table.grid_t
        lines = ["t,s,G"]
        for p in range(n_grid):
            row = table.values[p]
            tp = _fmt(t[p])
            lines.extend(f"{tp},{_fmt(t[q])},{_fmt(row[q])}" for q in range(n_grid))
        _write_text(out / f"green_{i}.csv", "\n".join(lines) + "\n")
        reports.append({
            "component": i,
            "m": table.m,
            "M": table.M,
            "positive": table.positive,
            "resonant": table.resonant,
            "min_value": pos.min_value,
            "argmin_t": pos.argmin[0],
            "argmin_s": pos.argmin[1],
            "holds": pos.holds,
        })
        print(f"component {i}: m={_fmt(table.m)} M={_fmt(table.M)} "
              f"positive={_bool(table.positive)}")
    _write_json(out / "positivity.json", {"n_grid": n_grid, "components": reports})
    return EXIT_FOUND


def _constants_block(constants):
    return {
        "m": list(constants.m),
        "M": list(constants.M),
        "sigma_i": list(constants.sigma_i),
        "sigma": constants.sigma,
        "Gamma": constants.Gamma,
        "C_hat": constants.C_hat,
        "int_g": list(constants.int_g),
        "int_abs_e": list(constants.int_abs_e),
        "delta": constants.delta,
        "Delta": constants.Delta,
    }


def cmd_certify(args) -> int:
    parsed = _load(args)
    problem, n_grid = parsed.problem, parsed.n_grid
    out = Path(args.out)
    r_grid = _radius_grid(args.rmin, args.rmax, args.per_decade)

    tables = _build_tables(problem, n_grid)
    constants = compute_constants(tables, problem)
    rows = scan_radii(problem, constants, r_grid)
    annuli = annuli_from_scan(problem, constants, rows)
    regime = classify_regime(problem)

    lines = ["r,expansion_margin,compression_margin,domain_ok"]
    for r, exp_cert, comp_cert in rows:
        region_ok = exp_cert.domain_ok
        lines.append(f"{_fmt(r)},{_fmt(exp_cert.margin)},{_fmt(comp_cert.margin)},"
                     f"{_bool(region_ok)}")
    _write_text(out / "certificates.csv", "\n".join(lines) + "\n")

    report = {
        "constants": _constants_block(constants),
        "annuli": [{
            "id": a.annulus_id,
            "r_in": a.r_in,
            "r_out": a.r_out,
            "orientation": a.orientation,
            "predicted": a.predicted,
            "inner_route": a.inner.route,
            "inner_margin": a.inner.margin,
            "outer_route": a.outer.route,
            "outer_margin": a.outer.margin,
        } for a in annuli],
        "regime": {
            "regime": regime.regime,
            "singular_at_zero": regime.singular_at_zero,
            "singular_all_components": regime.singular_all_components,
            "clause": regime.clause,
            "note": regime.note,
        },
        "note": DISCLAIMER,
    }
    if problem.sign_profile == "MixedE" and regime.regime == "Sublinear":
        thr = large_lambda_threshold(problem, constants, r_grid)
        report["large_lambda_threshold"] = {
            "value": thr,
            "label": "implementation-derived, not a closed-form constant",
        }
    _write_json(out / "report.json", report)

    for a in annuli:
        print(f"{a.annulus_id}: {a.orientation} r_in={_fmt(a.r_in)} "
              f"r_out={_fmt(a.r_out)} ({a.predicted})")
    print(f"regime: {regime.regime}, clause: {regime.clause}")
    print(f"note: {DISCLAIMER}")
    return EXIT_FOUND if annuli else EXIT_NOTHING


def cmd_solve(args) -> int:
    parsed = _load(args)
    problem, n_grid = parsed.problem, parsed.n_grid
    out = Path(args.out)
    tables = _build_tables(problem, n_grid)
    constants = compute_constants(tables, problem)
    opts = SolveOptions(ode_tol=args.ode_tol)
    report = find_solutions(problem, tables, constants, opts)

    header = "t," + ",".join(f"x_{i + 1}" for i in range(problem.n))
    t = tables[0].grid_t
    for j, sol in enumerate(report.solutions, start=1):
        lines = [header]
        for p in range(n_grid):
            vals = ",".join(_fmt(sol.x.values[i, p]) for i in range(problem.n))
            lines.append(f"{_fmt(t[p])},{vals}")
        _write_text(out / f"solution_{j}.csv", "\n".join(lines) + "\n")

    summary = ["norm,fp_residual,ode_residual,cone_margin"]
    summary.extend(
        f"{_fmt(s.norm)},{_fmt(s.fp_residual)},{_fmt(s.ode_residual)},{_fmt(s.cone_margin)}"
        for s in report.solutions
    )
    _write_text(out / "solutions_summary.csv", "\n".join(summary) + "\n")

    for note in report.notes:
        print(f"note: {note}")
    for s in report.solutions:
        print(f"solution: norm={_fmt(s.norm)} annulus={s.annulus_id} "
              f"fp_residual={_fmt(s.fp_residual)} ode_residual={_fmt(s.ode_residual)}")
    if not report.solutions:
        print("no solutions found; " + DISCLAIMER)
    return EXIT_FOUND if report.solutions else EXIT_NOTHING


_BRANCH_RE = re.compile(r"^b(\d+)$")


def cmd_sweep(args) -> int:
    parsed = _load(args)
    problem, n_grid = parsed.problem, parsed.n_grid
    out = Path(args.out)
    if args.lmin <= 0.0 or args.lmax < args.lmin:
        raise ConfigError("--lmin/--lmax", "need 0 < lmin <= lmax")
    if args.steps < 0:
        raise ConfigError("--steps", "must be nonnegative")
    if args.jobs < 1:
        raise ConfigError("--jobs", "must be at least 1")

    header = "lambda,branch_id,norm,ode_residual"
    if args.steps == 0:
        _write_text(out / "branches.csv", header + "\n")
        return EXIT_FOUND

    tables = _build_tables(problem, n_grid)
    constants = compute_constants(tables, problem)
    opts = SolveOptions(ode_tol=args.ode_tol)

    lams = np.geomspace(args.lmin, args.lmax, args.steps)
    jobs = min(args.jobs, args.steps)
    bounds = [(k * args.steps) // jobs for k in range(jobs + 1)]
    chunks = [(lams[lo], lams[hi - 1], hi - lo) for lo, hi in zip(bounds, bounds[1:])]

    def run_chunk(chunk):
        lo, hi, steps = chunk
        return continue_lambda(problem, tables, float(lo), float(hi), steps,
                               opts=opts, constants=constants)

    if jobs == 1:
        results = [run_chunk(chunks[0])]
    else:
        # branch continuity is chunk-local; merged rows stay deterministic
        # because each chunk is itself deterministic and the merge sorts
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_chunk, chunks))

    rows = []
    notes = []
    offset = 0
    for res in results:
        local_max = 0
        for row in res.rows:
            match = _BRANCH_RE.match(row.branch_id)
            num = int(match.group(1)) if match else 0
            local_max = max(local_max, num)
            bid = f"b{num + offset}" if match else row.branch_id
            rows.append((row.lam, row.norm, bid, row.ode_residual))
        notes.extend(res.notes)
        offset += local_max
    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    lines = [header]
    lines.extend(f"{_fmt(lam)},{bid},{_fmt(norm)},{_fmt(ode)}"
                 for lam, norm, bid, ode in rows)
    _write_text(out / "branches.csv", "\n".join(lines) + "\n")
    for note in notes:
        print(f"note: {note}")
    return EXIT_FOUND if rows else EXIT_NOTHING


def cmd_reproduce(args) -> int:
    preset = PRESETS[args.name]
    out = Path(args.out) if args.out else None
    opts = SolveOptions(ode_tol=preset.ode_tol)
    print(f"{preset.name}: {preset.description}")
    print(f"clause: {preset.clause}")
    for note in preset.notes:
        print(f"note: {note}")

    results = []
    all_pass = True
    for lam in preset.lambdas:
        parsed = parse_config(preset.config(lam))
        problem, n_grid = parsed.problem, parsed.n_grid
        tables = _build_tables(problem, n_grid)
        constants = compute_constants(tables, problem)
        report = find_solutions(problem, tables, constants, opts)
        count = len(report.solutions)
        ok = count >= preset.expected_count
        all_pass = all_pass and ok
        norms = "/".join(_fmt(s.norm) for s in report.solutions) or "-"
        print(f"{preset.name} lambda={lam:g}: found {count} solution(s), "
              f"expected >= {preset.expected_count}, norms {norms}: "
              f"{'PASS' if ok else 'FAIL'}")
        if len(report.annuli) < preset.expected_count:
            print(f"certificate gap at lambda={lam:g}: only {len(report.annuli)} "
                  f"annuli certified; {DISCLAIMER}")
        for note in report.notes:
            print(f"note: {note}")
        results.append({
            "lambda": lam,
            "found": count,
            "expected": preset.expected_count,
            "norms": [s.norm for s in report.solutions],
            "annuli": len(report.annuli),
            "pass": ok,
        })
    if out is not None:
        _write_json(out / f"reproduce_{preset.name}.json", {
            "preset": preset.name,
            "clause": preset.clause,
            "results": results,
        })
    return EXIT_FOUND if all_pass else EXIT_NOTHING


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pericone",
        description="periodic Green tables, cone certificates, and positive "
                    "periodic solutions of singular second-order systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_green = sub.add_parser("green", help="tabulate kernels and check positivity")
    p_green.add_argument("--config", required=True, help="problem config (JSON)")
    p_green.add_argument("--out", default=".", help="output directory")
    p_green.set_defaults(func=cmd_green)

    p_cert = sub.add_parser("certify", help="scan radii and report certified annuli")
    p_cert.add_argument("--config", required=True)
    p_cert.add_argument("--out", default=".")
    p_cert.add_argument("--rmin", type=float, default=1e-3)
    p_cert.add_argument("--rmax", type=float, default=1e3)
    p_cert.add_argument("--per-decade", type=int, default=61, dest="per_decade")
    p_cert.set_defaults(func=cmd_certify)

    p_solve = sub.add_parser("solve", help="find positive periodic solutions")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--out", default=".")
    p_solve.add_argument("--ode-tol", type=float, default=1e-6, dest="ode_tol")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="lambda continuation, branch CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=".")
    p_sweep.add_argument("--lmin", type=float, required=True)
    p_sweep.add_argument("--lmax", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="upper bound on concurrent chunks; results are "
                              "merged by (lambda, norm) regardless of timing")
    p_sweep.add_argument("--ode-tol", type=float, default=1e-6, dest="ode_tol")
    p_sweep.set_defaults(func=cmd_sweep)

    p_rep = sub.add_parser("reproduce", help="run a built-in benchmark scenario")
    p_rep.add_argument("name", choices=sorted(PRESETS))
    p_rep.add_argument("--out", default=None)
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, HypothesisError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except np.linalg.LinAlgError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PericoneError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
