"""Command-line front end.

    padestieltjes generate --hamiltonian pt-cubic --order 193 --cache DIR
    padestieltjes sum --lambda 1/7 --rows 0-5,188-192
    padestieltjes diagnose --couplings 1/10,1/7,1/2,1
    padestieltjes predict --hamiltonian quartic --n 0 --k 33 --terms 16
    padestieltjes predict --sweep

Exit status: 0 success, 1 unreadable or corrupted cache, 2 missing or
insufficient data, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .diagnostics import diagnose, pade_family
from .errors import ChecksumMismatch, InsufficientCoefficients, InsufficientMoments, SingularSystem, ZeroConstantTerm, ZeroDenominator
from .numeric import MIN_DIGITS, format_rational, rational
from .oscillators import Hamiltonian, map_coupling
from .report import (
    OUTPUT_FORMATS,
    SUMMATION_ROWS,
    SWEEP_ROWS,
    coefficient_table,
    diagnostics_evidence,
    diagnostics_table,
    emit,
    ensure_cache,
    load_series,
    parse_rows,
    prediction_table,
    relative_error_sweep,
    summation_table,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_INSUFFICIENT = 2
EXIT_DEGENERATE = 3

DEFAULT_CACHE = os.environ.get("PADESTIELTJES_CACHE", "coefficients")


class _Missing(Exception):
    pass


def _precision(text: str) -> int:
    value = int(text)
    if value < MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_DIGITS}")
    return value


def _coupling(text: str):
    try:
        value = rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("coupling must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padestieltjes", description="Pade summation and Stieltjes diagnostics for anharmonic oscillator series.")
    parser.add_argument("--cache", default=DEFAULT_CACHE, help="directory holding the coefficient cache files (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="compute exact coefficients and store them in the cache")
    gen.add_argument("--hamiltonian", default="pt-cubic", help="pt-cubic or quartic")
    gen.add_argument("--order", type=int, default=193)
    gen.add_argument("--cache", default=argparse.SUPPRESS, help="cache directory")
    gen.add_argument("--format", choices=OUTPUT_FORMATS, default="text")
    gen.add_argument("--show", type=int, default=10, help="coefficients to print (default: %(default)s)")

    summ = sub.add_parser("sum", help="partial sums and staircase Pade approximants")
    group = summ.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lam", type=_coupling, help="cubic coupling lambda as p/q")
    group.add_argument("--beta", type=_coupling, help="quartic coupling beta as p/q (lambda^2 = beta/40)")
    summ.add_argument("--hamiltonian", help="restrict to one series")
    summ.add_argument("--precision", type=_precision, default=600)
    summ.add_argument("--rows", help="rows such as 0-5,50-54 (default: a spread up to 192)")
    summ.add_argument("--format", choices=OUTPUT_FORMATS, default="text")
    summ.add_argument("--cache", default=argparse.SUPPRESS)

    diag = sub.add_parser("diagnose", help="Stieltjes-property tests at several couplings")
    diag.add_argument("--couplings", default="1/10,1/7,1/2,1", help="comma separated lambda values")
    diag.add_argument("--hankel-max", type=int, default=20)
    diag.add_argument("--pade-max", type=int, default=40, help="largest denominator degree for the monotonicity test")
    diag.add_argument("--hamiltonian", help="restrict to one series")
    diag.add_argument("--precision", type=_precision, default=600)
    diag.add_argument("--format", choices=OUTPUT_FORMATS, default="text")
    diag.add_argument("--evidence", help="write the JSON evidence dump to this file")
    diag.add_argument("--cache", default=argparse.SUPPRESS)

    pred = sub.add_parser("predict", help="predict coefficients not used by the approximant")
    pred.add_argument("--hamiltonian", help="pt-cubic (default for single predictions) or quartic")
    pred.add_argument("--n", type=int, default=0)
    pred.add_argument("--k", type=int, default=33)
    pred.add_argument("--terms", type=int, default=16)
    pred.add_argument("--sweep", action="store_true", help="relative errors of first predictions for both series")
    pred.add_argument("--rows", help="sweep rows (default: a spread up to 191)")
    pred.add_argument("--precision", type=_precision, default=600)
    pred.add_argument("--format", choices=OUTPUT_FORMATS, default="text")
    pred.add_argument("--cache", default=argparse.SUPPRESS)
    return parser


def _load(cache, hamiltonian, min_order: int = 1):
    try:
        return load_series(cache, hamiltonian, min_order)
    except FileNotFoundError as exc:
        raise _Missing(f"no coefficient cache for {Hamiltonian.parse(hamiltonian).value} in {cache}; run 'padestieltjes generate --hamiltonian {Hamiltonian.parse(hamiltonian).value} --order 193 --cache {cache}'") from exc


def _selected(args) -> list[Hamiltonian]:
    if getattr(args, "hamiltonian", None):
        return [Hamiltonian.parse(args.hamiltonian)]
    return [Hamiltonian.PT_CUBIC, Hamiltonian.QUARTIC]


def cmd_generate(args, out) -> int:
    cache, action = ensure_cache(args.cache, args.hamiltonian, args.order)
    series = cache.series().truncated(args.order) if cache.max_order > args.order else cache.series()
    print(f"{action}: {cache.hamiltonian.value}, {cache.max_order} orders in {Path(args.cache)}", file=sys.stderr)
    if args.show > 0 and series.max_order > 0:
        out.write(emit(coefficient_table(series, args.show), args.format))
    return EXIT_OK


def cmd_sum(args, out) -> int:
    if args.beta is not None:
        lam_sq = args.beta / 40
        lam = _sqrt_rational(lam_sq)
    else:
        lam = args.lam if args.lam is not None else rational("1/7")
    rows = parse_rows(args.rows, SUMMATION_ROWS)
    need = max(rows) + 1 if rows else 1
    loaded = {h: _load(args.cache, h, need) for h in _selected(args)}
    table = summation_table(loaded.get(Hamiltonian.PT_CUBIC), loaded.get(Hamiltonian.QUARTIC), lam, rows, args.precision)
    out.write(emit(table, args.format))
    return EXIT_OK


def _sqrt_rational(q):
    """Exact square root of a rational square; otherwise an error."""
    import gmpy2

    num, den = gmpy2.isqrt(q.numerator), gmpy2.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError(f"beta/40 = {format_rational(q)} is not the square of a rational lambda")
    return rational(f"{num}/{den}")


def cmd_diagnose(args, out) -> int:
    couplings = [_coupling(c) for c in args.couplings.split(",") if c.strip()]
    reports = []
    for h in _selected(args):
        series = _load(args.cache, h)
        family = pade_family(series, args.pade_max)
        for lam in couplings:
            z = lam * lam if h is Hamiltonian.PT_CUBIC else map_coupling(lam)
            reports.append(diagnose(series, z, digits=args.precision, hankel_max=args.hankel_max, monotonicity_m_max=args.pade_max, approximants=family))
    table = diagnostics_table(reports)
    evidence = [diagnostics_evidence(r) for r in reports]
    if args.format == "json":
        out.write(json.dumps({"verdicts": table.records(), "evidence": evidence}, indent=2) + "\n")
    else:
        out.write(emit(table, args.format))
    if args.evidence:
        Path(args.evidence).write_text(json.dumps(evidence, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_predict(args, out) -> int:
    if args.sweep:
        rows = parse_rows(args.rows, SWEEP_ROWS)
        need = max(rows) + 2 if rows else 1
        loaded = {h: _load(args.cache, h, need) for h in _selected(args)}
        table = relative_error_sweep(loaded.get(Hamiltonian.PT_CUBIC), loaded.get(Hamiltonian.QUARTIC), rows, args.precision)
    else:
        series = _load(args.cache, args.hamiltonian or "pt-cubic", args.n + 2 * args.k + 1)
        table, _ = prediction_table(series, args.n, args.k, args.terms, args.precision)
    out.write(emit(table, args.format))
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "sum": cmd_sum, "diagnose": cmd_diagnose, "predict": cmd_predict}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except _Missing as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (InsufficientCoefficients, InsufficientMoments) as exc:
        print(f"error: {exc}; generate more orders with 'padestieltjes generate --order N'", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (ZeroDenominator, ZeroConstantTerm, SingularSystem, ArithmeticError) as exc:
        print(f"error: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ChecksumMismatch as exc:
        print(f"error: corrupted cache: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT


if __name__ == "__main__":
    sys.exit(main())
