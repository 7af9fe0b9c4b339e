"""Command-line entry point: ``recip-sums <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import experiments, verify
from .bounds import DEFAULT_KMAX
from .caps import ENV_VAR, parse_caps
from .config import ExperimentConfig, load_config, with_overrides
from .errors import ConfigError, RecipSumsError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DESCRIPTION = """\
Bilinear sums with reciprocals of polynomials over prime fields: exact
evaluation, counting oracles, the pigeonhole reduction and the bound
comparison table.

All logarithms (dyadic census bands e^j, the (log p)^2 diagnostics) are
natural logarithms.  Work caps can be overridden with RECIP_SUMS_WORKCAP,
either a single integer or e.g. "naive=1e9,conv=100000,tuples=1e8,coeffs=8".
"""


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="recip-sums", description=DESCRIPTION, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    ap.add_argument("-v", "--verbose", action="store_true", help="log per-cell timings to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value experiment file")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    common.add_argument("--parallel", type=int, help="worker processes for sweep cells")

    tc = sub.add_parser("table-compare", help="exponent comparison table (exit 1 if the reference rows differ)")
    tc.add_argument("--kmax", type=int, default=DEFAULT_KMAX, help="largest k tried for the k-dependent bound")
    tc.add_argument("--row", nargs=2, action="append", type=_rational, metavar=("ALPHA", "BETA"),
                    help="custom row U=p^ALPHA, V=p^BETA (repeatable)")
    tc.add_argument("--out", metavar="PATH", help="also write the table as CSV")

    for name, text in (
        ("eval", "evaluate the requested sums at one (p, U, V)"),
        ("count", "J, N_f, 6-tuple, moment and census counts"),
        ("sweep", "cartesian sweep of sum evaluations"),
        ("pigeonhole", "shrink f by the Dirichlet reduction"),
        ("discrepancy", "discrepancy of f(1..U) mod p"),
    ):
        sub.add_parser(name, parents=[common], help=text)

    vp = sub.add_parser("verify", help="run the invariant suites (exit 1 on any failure)")
    vp.add_argument("--level", choices=verify.LEVELS, default="quick")
    return ap


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    return with_overrides(cfg, seed=args.seed, out=args.out, parallel=args.parallel)


@contextmanager
def _workcap(value: str):
    """Set the cap variable for this command only; worker processes inherit it."""
    if not value:
        yield
        return
    parse_caps(value)
    old = os.environ.get(ENV_VAR)
    os.environ[ENV_VAR] = value
    try:
        yield
    finally:
        if old is None:
            del os.environ[ENV_VAR]
        else:
            os.environ[ENV_VAR] = old


def _emit(text: str, out: str) -> None:
    if out:
        experiments.save(text, out)
    else:
        sys.stdout.write(text)


DRIVERS = {
    "eval": experiments.cmd_eval,
    "count": experiments.cmd_count,
    "sweep": experiments.cmd_sweep,
    "pigeonhole": experiments.cmd_pigeonhole,
    "discrepancy": experiments.cmd_discrepancy,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "table-compare":
            rendered, cols, records, problems = experiments.cmd_table_compare(args.row, args.kmax)
            print(rendered)
            if args.out:
                experiments.save(experiments.write_csv(cols, records), args.out)
            for msg in problems:
                print(f"mismatch: {msg}", file=sys.stderr)
            return EXIT_FAIL if problems else EXIT_OK
        if args.command == "verify":
            return EXIT_OK if verify.run(args.level) else EXIT_FAIL
        cfg = _config(args)
        with _workcap(cfg.workcap):
            cols, records = DRIVERS[args.command](cfg)
        _emit(experiments.write_csv(cols, records), cfg.out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RecipSumsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
