"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 oracle-check failures.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import report
from .eigensolver import DEFAULT_C_LAMBDA, DEFAULT_POINTS, EigensolverError, solve
from .model import Family, dimensionless_frame, make_potential
from .quadrature import QuadratureError
from .quantum_moments import DiscretizationError
from .susy import SusyError, partner_uncertainty_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_ORACLE = 3

SOLVER_ERRORS = (EigensolverError, DiscretizationError, QuadratureError, SusyError, report.SweepError)

log = logging.getLogger("dimless_uncertainty")
_RANGE = re.compile(r"^(\d+)\s*-\s*(\d+)$")


class ConfigExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for solver failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigExit(f"{self.prog}: error: {message}")


def parse_int_list(text: str) -> tuple[int, ...]:
    """'3', '1,2,5' or '1-10' (inclusive), in any comma-separated mix."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        span = _RANGE.match(part)
        if span:
            lo, hi = int(span[1]), int(span[2])
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(values)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return parse_int_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common(parser: argparse.ArgumentParser, *, b_default: str, n_default: str) -> None:
    parser.add_argument(
        "--family",
        action="append",
        choices=[f.value for f in Family],
        help="potential family; repeat for several (default: symmetric)",
    )
    parser.add_argument("--b", type=_int_list, default=_int_list(b_default), help="powers, e.g. 2 or 1-10")
    parser.add_argument("--n", type=_int_list, default=_int_list(n_default), help="state indices, e.g. 0-10")
    parser.add_argument("--points", type=int, default=DEFAULT_POINTS, help="grid points (default %(default)s)")
    parser.add_argument("--c-lambda", type=float, default=DEFAULT_C_LAMBDA, help="grid half-width factor (default %(default)s)")
    parser.add_argument("--out", type=Path, help="output file (default stdout)")
    parser.add_argument("--format", choices=[f.value for f in report.OutputFormat], default="csv")
    parser.add_argument("--workers", type=int, default=1, help="threads for independent (family, b) groups")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dimless-uncertainty", description="Dimensionless quantum and classical uncertainty products.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="lowest energies and frames of one potential")
    _common(p, b_default="2", n_default="0-4")

    p = sub.add_parser("sweep", help="quantum and classical moments over families, b and n")
    _common(p, b_default="1-10", n_default="0")

    p = sub.add_parser("figure", help="tabulated data behind one figure panel")
    p.add_argument("figure_id", choices=[f.value for f in report.FigureId])
    _common(p, b_default="1-10", n_default="0")

    p = sub.add_parser("oracle-check", help="analytic references against the numerics")
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--c-lambda", type=float, default=DEFAULT_C_LAMBDA)

    p = sub.add_parser("susy", help="products on supersymmetric partners of |x|**b")
    _common(p, b_default="1-4", n_default="3")
    p.add_argument("--momentum-scale", choices=["energy", "kinetic"], default="energy")
    return parser


def _families(args) -> tuple[Family, ...]:
    return tuple(Family(f) for f in (args.family or [Family.SYMMETRIC_POWER.value]))


def _cmd_spectrum(args) -> int:
    families = _families(args)
    if len(families) != 1 or len(args.b) != 1:
        raise report.ConfigError("spectrum takes one family and one b")
    family = families[0]
    spec = make_potential(family) if family.is_box else make_potential(family, args.b[0])
    count = max(args.n) + 1
    spectrum = solve(spec, count, args.points, args.c_lambda)
    rows = []
    for n in sorted(set(args.n)):
        frame = dimensionless_frame(spec, float(spectrum.energies[n]))
        rows.append((n, frame.energy, frame.x_max, frame.p_max))
    text = report.render_table(("n", "E", "x_max", "p_max"), rows, args.format)
    report.write_text(text, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = report.SweepConfig(
        _families(args), args.b, args.n, args.points, args.c_lambda, args.out, args.format, args.workers
    )
    rows = report.run_sweep(config)
    report.write_text(report.render_rows(rows, config.format), config.out)
    return EXIT_OK


def _cmd_figure(args) -> int:
    data = report.emit_figure_data(args.figure_id, args.points, args.c_lambda, workers=args.workers)
    report.write_text(data.render(args.format), args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    checks = report.oracle_check(args.points, args.c_lambda)
    sys.stdout.write(report.render_checks(checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_ORACLE


def _cmd_susy(args) -> int:
    if len(args.n) != 1:
        raise report.ConfigError("--n is the number of partner levels for susy")
    if max(args.b) > report.B_CEILING:
        raise report.ConfigError(f"b must lie in 1..{report.B_CEILING}")
    records = partner_uncertainty_sweep(
        args.b, args.n[0], args.points, args.c_lambda, momentum_scale=args.momentum_scale
    )
    rows = [
        (r.potential, r.n, r.quantum.frame.energy, r.quantum.frame.x_max, r.quantum.frame.p_max,
         r.product_qm, r.product_cl)
        for r in records
    ]
    columns = ("potential", "level", "E", "x_max", "p_max", "q_product", "c_product")
    report.write_text(report.render_table(columns, rows, args.format), args.out)
    return EXIT_OK


COMMANDS = {
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "oracle-check": _cmd_oracle,
    "susy": _cmd_susy,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    logging.captureWarnings(True)
    try:
        return COMMANDS[args.command](args)
    except SOLVER_ERRORS as exc:
        log.error("solver failure: %s", exc)
        return EXIT_SOLVER
    except ValueError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
