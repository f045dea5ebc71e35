"""Command line entry point: ``kleinroute <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import _backend
from .experiments import (
    SIX_DEGREES_N,
    SIX_DEGREES_SCENARIOS,
    conjectured_exponent,
    estimate_exponent,
    find_r_opt,
    robustness_thresholds,
    six_degrees_scenarios,
    sweep_over_n,
    sweep_over_r,
)
from .lattice import GridParams
from .output import OutputTable, emit_tsv
from .router import EstimateConfig, estimate_edt
from .sampler import check_against_oracle, probe_points

SAMPLER_TV_LIMIT = 0.005


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _positive_float(text):
    v = _nonneg_float(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def r_grid(start, stop, step):
    if step <= 0:
        raise ValueError("--r-step must be > 0")
    if stop < start:
        raise ValueError("--r-to must be >= --r-from")
    count = int(round((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_positive_int, default=1, help="local link radius")
    common.add_argument("--q", type=_positive_int, default=1, help="shortcuts per node")
    common.add_argument("--runs", type=_positive_int, default=10_000, help="Monte Carlo runs per estimate")
    common.add_argument("--seed", type=_nonneg_int, default=None, help="master seed (default: from the clock)")
    common.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1)
    common.add_argument("--backend", choices=sorted(_backend.BACKENDS), default=None)
    common.add_argument("--out", default="-", help="output file (default: stdout)")

    rrange = argparse.ArgumentParser(add_help=False)
    rrange.add_argument("--r-from", type=_nonneg_float, default=0.0)
    rrange.add_argument("--r-to", type=_nonneg_float, default=3.0)
    rrange.add_argument("--r-step", type=_positive_float, default=0.1)

    parser = argparse.ArgumentParser(prog="kleinroute", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("edt", parents=[common], help="one delivery-time estimate")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--r", type=_nonneg_float, required=True)

    p = sub.add_parser("sweep-r", parents=[common, rrange], help="delivery time over a range of r")
    p.add_argument("--n", type=_positive_int, required=True)

    p = sub.add_parser("sweep-n", parents=[common], help="delivery time and run time over grid sizes")
    p.add_argument("--r", type=_nonneg_float, required=True)
    p.add_argument("--n-list", type=_int_list, required=True)

    p = sub.add_parser("ropt", parents=[common], help="golden-section search for the best r")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--r-from", type=_nonneg_float, default=0.5)
    p.add_argument("--r-to", type=_nonneg_float, default=2.5)
    p.add_argument("--tol", type=_positive_float, default=0.02)

    p = sub.add_parser("thresholds", parents=[common], help="r_opt and the e_2 / 2e_2 thresholds")
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--tol", type=_positive_float, default=0.01)

    p = sub.add_parser("exponent", parents=[common], help="slope of log e_r(n) between two sizes")
    p.add_argument("--r", type=_nonneg_float, required=True)
    p.add_argument("--n-list", type=_int_list, required=True, help="two powers of two: low,high")

    p = sub.add_parser("sixdeg", parents=[common, rrange], help="six-degrees scenarios")
    p.add_argument("--n", type=_positive_int, default=SIX_DEGREES_N)

    p = sub.add_parser("validate-sampler", help="compare rejection sampling with the exact law")
    p.add_argument("--n-list", type=_int_list, default=[2, 4, 8, 16])
    p.add_argument("--r-list", type=_float_list, default=[0.0, 0.5, 1.0, 2.0, 3.0])
    p.add_argument("--samples", type=_positive_int, default=4 * 10 ** 6)
    p.add_argument("--seed", type=_nonneg_int, default=None)
    p.add_argument("--backend", choices=sorted(_backend.BACKENDS), default=None)
    p.add_argument("--out", default="-")
    return parser


def _check_grid(parser, n, r=None, p=1):
    if n < 2:
        parser.error(f"argument --n: must be >= 2, got {n}")
    if p >= n:
        parser.error(f"argument --p: must be < n ({n}), got {p}")


def _config(args):
    return EstimateConfig(runs=args.runs, seed=args.seed, workers=args.workers)


def _meta(args, **extra):
    meta = {"command": args.command}
    for key, val in vars(args).items():
        if key in ("command", "out") or val is None:
            continue
        if isinstance(val, list):
            val = ",".join(str(v) for v in val)
        meta[key] = val
    meta["backend"] = args.backend or _backend.DEFAULT
    meta.update(extra)
    return meta


def cmd_edt(args, parser):
    _check_grid(parser, args.n, args.r, args.p)
    est = estimate_edt(GridParams(args.n, args.r, args.p, args.q), _config(args), backend=args.backend)
    table = OutputTable(["n", "r", "p", "q", "runs", "delivery", "stderr", "accept_rate", "time"],
                        metadata=_meta(args))
    table.add(args.n, args.r, args.p, args.q, est.runs, est.mean_hops, est.std_error, est.acceptance_rate,
              est.wall_time_seconds)
    return table


def cmd_sweep_r(args, parser):
    _check_grid(parser, args.n, p=args.p)
    try:
        rs = r_grid(args.r_from, args.r_to, args.r_step)
    except ValueError as exc:
        parser.error(str(exc))
    rows = sweep_over_r(args.n, rs, args.p, args.q, _config(args), backend=args.backend)
    table = OutputTable(["r", "delivery", "stderr", "accept_rate", "overhead"], metadata=_meta(args))
    for row in rows:
        table.add(float(row.x), row.mean_hops, row.std_error, row.acceptance_rate, row.overhead)
    return table


def cmd_sweep_n(args, parser):
    for n in args.n_list:
        if n < 2 or args.p >= n:
            parser.error(f"argument --n-list: every n must be >= 2 and > p, got {n}")
    rows = sweep_over_n(args.r, args.n_list, args.p, args.q, _config(args), backend=args.backend)
    table = OutputTable(["n", "time", "delivery", "stderr", "accept_rate"], metadata=_meta(args))
    for row in rows:
        table.add(int(row.x), row.wall_time_seconds, row.mean_hops, row.std_error, row.acceptance_rate)
    return table


def cmd_ropt(args, parser):
    _check_grid(parser, args.n, p=args.p)
    if not args.r_from < args.r_to:
        parser.error("argument --r-to: must be > --r-from")
    r_opt = find_r_opt(args.n, (args.r_from, args.r_to), args.tol, _config(args), args.p, args.q,
                       backend=args.backend)
    table = OutputTable(["n", "r_opt"], metadata=_meta(args))
    table.add(args.n, r_opt)
    return table


def cmd_thresholds(args, parser):
    for n in args.n_list:
        if n < 2 or args.p >= n:
            parser.error(f"argument --n-list: every n must be >= 2 and > p, got {n}")
    table = OutputTable(["n", "e2", "r_opt", "r_min_e2", "r_min_2e2", "r_max_2e2"], metadata=_meta(args))
    for n in args.n_list:
        res = robustness_thresholds(n, _config(args), args.p, args.q, tol=args.tol, backend=args.backend)
        table.add(n, res.e2_reference, res.r_opt, res.r_min_e2, res.r_min_2e2, res.r_max_2e2)
    return table


def cmd_exponent(args, parser):
    if len(args.n_list) != 2:
        parser.error("argument --n-list: expected exactly two sizes, low,high")
    n_low, n_high = args.n_list
    try:
        alpha = estimate_exponent(args.r, n_low, n_high, _config(args), args.p, args.q, backend=args.backend)
    except ValueError as exc:
        parser.error(f"argument --n-list: {exc}")
    table = OutputTable(["r", "n_low", "n_high", "alpha", "conjectured"], metadata=_meta(args))
    table.add(args.r, n_low, n_high, alpha, conjectured_exponent(args.r))
    return table


def cmd_sixdeg(args, parser):
    try:
        rs = r_grid(args.r_from, args.r_to, args.r_step)
    except ValueError as exc:
        parser.error(str(exc))
    groups = six_degrees_scenarios(_config(args), n=args.n, scenarios=SIX_DEGREES_SCENARIOS, r_values=rs,
                                   backend=args.backend)
    table = OutputTable(["p", "q", "r", "delivery", "stderr", "accept_rate"], metadata=_meta(args))
    for (p, q), rows in groups.items():
        for row in rows:
            table.add(p, q, float(row.x), row.mean_hops, row.std_error, row.acceptance_rate)
    return table


def cmd_validate_sampler(args, parser):
    for n in args.n_list:
        if n < 2:
            parser.error(f"argument --n-list: every n must be >= 2, got {n}")
    table = OutputTable(["n", "r", "ux", "uy", "samples", "tv", "accept_rate", "accept_stderr",
                         "expected_accept", "pass"], metadata=_meta(args, tv_limit=SAMPLER_TV_LIMIT))
    k = 0
    failed = False
    for n in args.n_list:
        for u in probe_points(n).values():
            for r in args.r_list:
                chk = check_against_oracle(u, n, r, args.samples, seed=args.seed + k, backend=args.backend)
                k += 1
                ok = chk.tv_distance < SAMPLER_TV_LIMIT and chk.acceptance_rate > 0.125
                failed |= not ok
                table.add(n, r, u.x, u.y, args.samples, chk.tv_distance, chk.acceptance_rate,
                          chk.acceptance_stderr, chk.expected_acceptance, ok)
    table.failed = failed
    return table


COMMANDS = {
    "edt": cmd_edt,
    "sweep-r": cmd_sweep_r,
    "sweep-n": cmd_sweep_n,
    "ropt": cmd_ropt,
    "thresholds": cmd_thresholds,
    "exponent": cmd_exponent,
    "sixdeg": cmd_sixdeg,
    "validate-sampler": cmd_validate_sampler,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        args.seed = time.time_ns() % 2 ** 63
    try:
        table = COMMANDS[args.command](args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        emit_tsv(table, args.out)
    except OSError as exc:
        print(f"kleinroute: cannot write --out {args.out}: {exc}", file=sys.stderr)
        return 1
    return 1 if getattr(table, "failed", False) else 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
