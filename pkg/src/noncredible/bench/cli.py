"""Command-line entry point: ``noncredible {run,slope,verify-lb,oracle}``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from ..clairvoyant import DEFAULT_GRID, optimal_bid
from ..distributions import parse_distribution
from ..env import ConfigurationError
from .config import build_config, read_config_file
from .lower_bound import verify_lower_bound
from .runner import read_summary, run_experiment
from .slope import fit_regret_slope


def _cmd_run(args) -> int:
    raw = read_config_file(args.config) if args.config else {}
    overrides = {
        "strategy": args.strategy,
        "alpha0": args.alpha0,
        "dist": args.dist,
        "value_dist": args.value_dist,
        "horizons": args.T,
        "reps": args.reps,
        "seed": args.seed,
        "out": args.out,
        "feedback": args.feedback,
        "K": args.K,
        "M": args.M,
        "eta": args.eta,
        "delta": args.delta,
        "alpha_low": args.alpha_low,
        "estimator": args.estimator,
        "workers": args.workers,
        "traces": "true" if args.traces else None,
    }
    config = build_config(raw, overrides)
    rows = run_experiment(config)
    print("strategy,T,reps,mean_regret,std_regret")
    for row in rows:
        print(f"{row.strategy},{row.T},{row.reps},{row.mean_regret:.6g},{row.std_regret:.6g}")
    return 0


def _cmd_slope(args) -> int:
    rows = read_summary(args.summary)
    beta, intercept = fit_regret_slope((float(r["T"]), float(r["mean_regret"])) for r in rows)
    ok = (args.min is None or beta >= args.min) and (args.max is None or beta <= args.max)
    print(f"beta={beta:.6f} intercept={intercept:.6f}")
    if args.min is not None or args.max is not None:
        print(f"range [{args.min}, {args.max}]: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _cmd_verify_lb(args) -> int:
    report = verify_lower_bound(args.alpha, args.delta, args.grid_n)
    print(f"alpha={report.alpha:g} delta={report.delta:g}")
    print(f"separation: min gap {report.min_gap:.6g} >= {report.gap_bound:.6g}: {_word(report.checks['separation'])}")
    print(f"kl: {report.kl:.6g} <= {report.kl_bound:.6g}: {_word(report.checks['kl'])}")
    print(f"tv_kl: 1 - TV {report.one_minus_tv:.6g} >= {report.tv_kl_floor:.6g}: {_word(report.checks['tv_kl'])}")
    return 0 if report.passed else 1


def _cmd_oracle(args) -> int:
    dist = parse_distribution(args.dist)
    for v in args.v:
        print(f"{v:.17g},{args.alpha:.17g},{optimal_bid(v, args.alpha, dist, args.grid_n):.17g}")
    return 0


def _word(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noncredible", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment sweep")
    run.add_argument("--config", help="key=value file; flags override its entries")
    run.add_argument("--strategy")
    run.add_argument("--alpha0", type=float)
    run.add_argument("--dist", help="competing-bid distribution, e.g. uniform or truncnorm:mu=0.5,sigma=0.3")
    run.add_argument("--value-dist", dest="value_dist")
    run.add_argument("--T", help="comma-separated horizons")
    run.add_argument("--reps", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.add_argument("--feedback", choices=["bandit", "full"])
    run.add_argument("--K", type=int)
    run.add_argument("--M", type=int)
    run.add_argument("--eta", type=float)
    run.add_argument("--delta", type=float)
    run.add_argument("--alpha-low", dest="alpha_low", type=float)
    run.add_argument("--estimator", choices=["product_limit", "wins_only"])
    run.add_argument("--workers", type=int)
    run.add_argument("--traces", action="store_true", help="also write traces.csv")
    run.set_defaults(func=_cmd_run)

    slope = sub.add_parser("slope", help="fit the log-log regret slope of a summary CSV")
    slope.add_argument("summary")
    slope.add_argument("--min", type=float)
    slope.add_argument("--max", type=float)
    slope.set_defaults(func=_cmd_slope)

    lb = sub.add_parser("verify-lb", help="check the two-point lower-bound construction")
    lb.add_argument("--alpha", type=float, required=True)
    lb.add_argument("--delta", type=float, required=True)
    lb.add_argument("--grid-n", dest="grid_n", type=int, default=DEFAULT_GRID)
    lb.set_defaults(func=_cmd_verify_lb)

    oracle = sub.add_parser("oracle", help="print the clairvoyant bid b*(v, alpha)")
    oracle.add_argument("--dist", default="uniform")
    oracle.add_argument("--alpha", type=float, required=True)
    oracle.add_argument("--v", type=float, nargs="+", required=True)
    oracle.add_argument("--grid-n", dest="grid_n", type=int, default=DEFAULT_GRID)
    oracle.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
