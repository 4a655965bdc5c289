#!/usr/bin/env python3
"""
Robin Lab - Main entry point.

Computes Robin spectra of the disk with negative impedance -1/delta by secular
roots and by radial finite elements, builds the asymptotic series of the
accumulating branches and runs the delta sweeps that check their rates.

Exit codes: 0 when every check of the invoked study passes, 2 when a check
fails, 1 for usage, runtime or I/O errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from asymptotics.expansion import MAX_ORDER, RESIDUAL_ALPHA, series_table
from report_writer import SummaryRenderer, write_csv
from spectra.errors import RobinLabError
from spectra.radial_discrete import DEFAULT_ELEMENTS, DEFAULT_ORDER
from spectra.settings import load_config
from studies.experiments import (
    ALPHAS,
    RHO_FRACTION,
    StudyReport,
    SweepSpec,
    branch_table,
    coercivity_study,
    concentration_study,
    convergence_study,
    dirichlet_table,
    expansion_report,
    residual_study,
    robin_comparison,
    surface_limit_study,
    trace_study,
)
from studies.fitting import parse_delta_range

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2

logger = logging.getLogger("robinlab")


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", type=float, default=1.0, help="disk radius R (default 1)")
    common.add_argument(
        "--elements", type=int, default=DEFAULT_ELEMENTS,
        help=f"radial elements (default {DEFAULT_ELEMENTS})",
    )
    common.add_argument(
        "--element-order", type=int, choices=(1, 2), default=DEFAULT_ORDER,
        help=f"1 = linear, 2 = quadratic (default {DEFAULT_ORDER})",
    )
    common.add_argument("--csv", default=None, help="write the CSV table here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    parser = argparse.ArgumentParser(
        prog="robinlab",
        description="Robin eigenvalues of the disk with negative impedance -1/delta.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dirichlet", parents=[common], help="sector Dirichlet eigenvalues")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--count", type=int, default=3)

    p = sub.add_parser("robin", parents=[common], help="accumulating root, analytic vs discrete")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--deltas", "--delta", dest="deltas", default="0.1,0.05,0.02")

    p = sub.add_parser("surface", parents=[common], help="surface-mode limit delta^2 lambda -> -1")
    p.add_argument("--m", type=_int_list, default=[0], help="comma list of sectors")
    p.add_argument("--deltas", "--delta", dest="deltas", default="0.1:0.001:log6")

    p = sub.add_parser("expand", parents=[common], help="asymptotic series coefficients")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--order", type=int, default=MAX_ORDER, help=f"series order N (default {MAX_ORDER})")
    p.add_argument("--archive", default=None, help="also write the plain-text (k, lambda_k, g_k) table")

    p = sub.add_parser("converge", parents=[common], help="eigenvalue error rate of Lambda_N")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--deltas", "--delta", dest="deltas", default=None, help="a:b:logK or comma list")

    p = sub.add_parser("residual", parents=[common], help="dual norm of the series residual")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--alpha", type=float, default=RESIDUAL_ALPHA)
    p.add_argument("--deltas", "--delta", dest="deltas", default=None)

    p = sub.add_parser("concentrate", parents=[common], help="interior and boundary masses")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--rho", type=float, default=None, help=f"K radius (default {RHO_FRACTION} R)")
    p.add_argument("--deltas", "--delta", dest="deltas", default=None)

    p = sub.add_parser("coercivity", parents=[common], help="alpha sweep of the shifted form")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--alphas", type=_float_list, default=ALPHAS)
    p.add_argument("--deltas", "--delta", dest="deltas", default=None)

    p = sub.add_parser("track", parents=[common], help="sector eigenvalues along a delta sweep")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--method", choices=("analytic", "discrete"), default="analytic")
    p.add_argument("--deltas", "--delta", dest="deltas", default="0.5:0.01:log6")

    p = sub.add_parser("trace", parents=[common], help="trace-inequality constant C*")
    p.add_argument("--m", type=int, default=0)

    return parser


def _deltas(args) -> list[float]:
    return parse_delta_range(args.deltas) if args.deltas else []


def _spec(args, N: int = 1) -> SweepSpec:
    return SweepSpec(
        m=args.m,
        n=getattr(args, "n", 1),
        N=N,
        deltas=_deltas(args),
        elements=args.elements,
        order=args.element_order,
        rho=getattr(args, "rho", None),
        alpha=getattr(args, "alpha", RESIDUAL_ALPHA),
        radius=args.radius,
    )


def run_command(args) -> StudyReport:
    """Dispatch one subcommand to its study."""
    geometry_args = dict(elements=args.elements, order=args.element_order, radius=args.radius)
    command = args.command
    if command == "dirichlet":
        return dirichlet_table(args.m, args.count, args.radius)
    if command == "robin":
        return robin_comparison(args.m, args.n, _deltas(args), **geometry_args)
    if command == "surface":
        return surface_limit_study(args.m, _deltas(args), args.radius)
    if command == "expand":
        report = expansion_report(args.m, args.n, args.order, **geometry_args)
        if args.archive:
            Path(args.archive).write_text(series_table(report.series), encoding="utf-8")
            print(f"[expand] archived series to {args.archive}")
        return report
    if command == "converge":
        return convergence_study(_spec(args, args.order))
    if command == "residual":
        return residual_study(_spec(args, args.order))
    if command == "concentrate":
        return concentration_study(_spec(args))
    if command == "coercivity":
        return coercivity_study(args.alphas, _deltas(args) or None, args.m, **geometry_args)
    if command == "track":
        return branch_table(args.m, _deltas(args), args.count, args.method, **geometry_args)
    if command == "trace":
        return trace_study(args.m, **geometry_args)
    raise ValueError(f"unknown command '{command}'")


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="[%(name)s] %(message)s", force=True)


def run_settings(args) -> dict:
    """Effective defaults plus the arguments of this run."""
    settings = load_config()
    settings["run"] = {
        key: value for key, value in sorted(vars(args).items())
        if key not in ("verbose", "csv", "archive")
    }
    return settings


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    configure_logging(args.verbose)
    renderer = SummaryRenderer()
    print(renderer.render_header(args.command, run_settings(args)), end="")

    try:
        report = run_command(args)
        write_csv(report, args.csv)
    except (RobinLabError, ValueError, OSError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"[{args.command}] error: {e}")
        return EXIT_ERROR

    print(renderer.render_report(report), end="")
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
