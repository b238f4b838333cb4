"""Command-line interface.

Exit codes: 0 success, 2 invalid arguments, 3 numeric failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from typing import Sequence

from . import experiments as ex
from .dqc1 import DEFAULT_GRID_POINTS
from .errors import NumericError, ValidationError
from .unitary_file import load_unitary

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

log = logging.getLogger("dqcdiscord")


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="ascii") as fh:
            yield fh


def _emit(rows, header, path):
    with _output(path) as fh:
        ex.write_csv(rows, header, fh)


def cmd_sweep(args) -> None:
    cfg = ex.SweepConfig(
        n=args.n,
        samples=args.samples,
        alpha_grid=tuple(ex.make_alpha_grid(args.alpha_min, args.alpha_max, args.alpha_steps)),
        master_seed=args.seed,
        grid_points=args.grid,
        output_path=args.out,
    )
    log.info("sweep n=%d samples=%d over %d alpha values", cfg.n, cfg.samples, len(cfg.alpha_grid))
    _emit(ex.run_sweep(cfg, workers=args.workers), ex.SWEEP_HEADER, cfg.output_path)


def cmd_single(args) -> None:
    unitary = load_unitary(args.unitary) if args.unitary else None
    inst, bd = ex.run_single(args.n, args.alpha, seed=args.seed, unitary=unitary, grid_points=args.grid)
    row = ex.single_row(inst, bd, args.report_phi)
    header = list(ex.SINGLE_HEADER) + (["phi_star"] if args.report_phi else [])
    width = max(len(h) for h in header)
    for h in header:
        print(f"{h:<{width}}  {ex.format_value(row[h])}")
    print()
    ex.write_csv([row], header, sys.stdout)


def cmd_ppt(args) -> None:
    splits = ex.parse_splits(args.splits, args.n + 1)
    rows = ex.run_ppt_scan(args.n, args.alpha_list, args.samples, splits, args.seed, workers=args.workers)
    _emit(rows, ex.PPT_HEADER, args.out)


def cmd_trace(args) -> None:
    if (args.tau_r is None) != (args.tau_i is None):
        raise ValidationError("--tau-r and --tau-i must be given together")
    tau = None if args.tau_r is None else complex(args.tau_r, args.tau_i)
    if (tau is None) == (args.n is None):
        raise ValidationError("give either --tau-r/--tau-i or --n")
    est = ex.run_trace(args.alpha, args.shots, seed=args.seed, tau=tau, n=args.n)
    _emit([ex.trace_row(args.alpha, est)], ex.TRACE_HEADER, args.out)


def cmd_analytic(args) -> None:
    alphas = ex.make_alpha_grid(args.alpha_min, args.alpha_max, args.alpha_steps)
    _emit(ex.analytic_rows(alphas), ex.ANALYTIC_HEADER, args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dqcdiscord",
        description="Quantum discord of DQC1 states: ensembles, PPT scans, trace estimation.",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="ensemble-averaged discord against the closed form")
    s.add_argument("--n", type=int, default=ex.DEFAULT_N)
    s.add_argument("--samples", type=int, default=ex.DEFAULT_SAMPLES)
    s.add_argument("--alpha-min", type=float, default=ex.DEFAULT_ALPHA_MIN)
    s.add_argument("--alpha-max", type=float, default=ex.DEFAULT_ALPHA_MAX)
    s.add_argument("--alpha-steps", type=int, default=ex.DEFAULT_ALPHA_STEPS)
    s.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    s.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS)
    s.add_argument("--out", default=None, help="CSV path (default stdout)")
    s.add_argument("--workers", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("single", help="full entropy breakdown of one instance")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--alpha", type=float, required=True)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--seed", type=int)
    src.add_argument("--unitary", metavar="PATH")
    s.add_argument("--report-phi", action="store_true", help="include the optimal angle")
    s.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS)
    s.set_defaults(func=cmd_single)

    s = sub.add_parser("ppt", help="partial-transpose scan over bipartitions")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha-list", type=_float_list, required=True)
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--splits", default="all",
                   help='"all" or groups like "0;0,1;0,1,2" (qubit 0 is the control)')
    s.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    s.add_argument("--out", default=None)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_ppt)

    s = sub.add_parser("trace", help="simulate DQC1 trace estimation")
    s.add_argument("--tau-r", type=float)
    s.add_argument("--tau-i", type=float)
    s.add_argument("--n", type=int)
    s.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--shots", type=int, required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("analytic", help="closed-form discord over an alpha grid")
    s.add_argument("--alpha-min", type=float, default=0.0)
    s.add_argument("--alpha-max", type=float, default=1.0)
    s.add_argument("--alpha-steps", type=int, default=21)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_analytic)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
