"""Command-line interface: run trajectories, reversal and convergence checks,
period estimation. CSV is the only output format; plotting stays external.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .algebra import NumericalError
from .harness import (
    ConfigError,
    RunConfig,
    convergence_study,
    drift_report,
    estimate_period,
    reversal_test,
    run,
)
from .kowalevski import BranchRule

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _reals(text: str, n: int) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ConfigError(f"expected {n} comma-separated reals, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True,
                   choices=["euler", "lagrange", "kowalevski", "general"])
    p.add_argument("--scheme", required=True,
                   choices=["hk", "bs", "symmetric", "bohlin-a", "bohlin-b",
                            "bohlin-c", "hybrid", "reference"])
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--stride", type=int, default=10)
    p.add_argument("--c0", type=float, default=1.0)
    p.add_argument("--init", help="6 comma-separated reals (w,gamma or m,a)")
    p.add_argument("--inertia", help="A,B,C", default="1,2,3")
    p.add_argument("--gravity", help="x0,y0,z0 (times mg=1)", default="0,0,0")
    p.add_argument("--p", dest="vertical", help="constant vertical (lagrange)",
                   default="0,0,1")
    p.add_argument("--branch", choices=["arg-sign", "nearest"], default="arg-sign")
    p.add_argument("--out", dest="out_path")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        model=args.model,
        scheme=args.scheme,
        h=args.h,
        steps=args.steps,
        stride=args.stride,
        c0=args.c0,
        inertia=_reals(args.inertia, 3),
        gravity=_reals(args.gravity, 3),
        vertical=_reals(args.vertical, 3),
        init=np.array(_reals(args.init, 6)) if args.init else None,
        branch_rule=BranchRule(args.branch),
        out_path=args.out_path,
    ).validated()


def _cmd_run(args) -> int:
    traj = run(_config_from_args(args))
    report = drift_report(traj)
    print(f"ran {args.steps} steps of {args.model}/{args.scheme} at h={args.h}")
    for name, d in report.per_invariant.items():
        print(
            f"  {name}: initial={d.initial:.15g} min={d.min:.15g} "
            f"max={d.max:.15g} max|dev|={d.max_abs_deviation:.3e}"
        )
    if args.out_path:
        print(f"wrote {args.out_path}")
    return 0


def _cmd_reverse(args) -> int:
    err = reversal_test(_config_from_args(args), args.n)
    print(f"round-trip error after {args.n} steps forward + backward: {err:.6e}")
    return 0


def _cmd_converge(args) -> int:
    h_list = [float(x) for x in args.h_list.split(",")]
    rows = convergence_study(_config_from_args(args), h_list, args.t_end)
    print(f"{'h':>12} {'endpoint error':>16} {'observed order':>15}")
    for h, err, order in rows:
        order_s = f"{order:.3f}" if order is not None else "-"
        print(f"{h:>12g} {err:>16.6e} {order_s:>15}")
    return 0


def _cmd_period(args) -> int:
    traj = run(_config_from_args(args))
    period = estimate_period(traj.column(args.column), args.h * args.stride)
    print(f"estimated period of {args.column}: {period:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spintops",
                                     description="Discrete spinning-top schemes")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate and report invariant drift")
    _add_run_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_rev = sub.add_parser("reverse", help="forward/backward round-trip error")
    _add_run_flags(p_rev)
    p_rev.add_argument("--n", type=int, default=1000, help="steps each direction")
    p_rev.set_defaults(func=_cmd_reverse)

    p_conv = sub.add_parser("converge", help="observed-order study")
    _add_run_flags(p_conv)
    p_conv.add_argument("--h-list", required=True, help="comma-separated step sizes")
    p_conv.add_argument("--t-end", type=float, required=True)
    p_conv.set_defaults(func=_cmd_converge)

    p_per = sub.add_parser("period", help="dominant oscillation period of a column")
    _add_run_flags(p_per)
    p_per.add_argument("--column", default="g3")
    p_per.set_defaults(func=_cmd_period)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
