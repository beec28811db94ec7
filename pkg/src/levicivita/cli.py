"""Command-line front end: ``levicivita <command> <expr> [options]``.

Exit codes: 0 for a value or a yes verdict, 2 for a negative verdict
(not outer measurable, not L-measurable, not S-measurable), 3 when the
question is left open, 1 on any error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from levicivita.core import render_number
from levicivita.derive import derivative_demo, eval_number_expression
from levicivita.dsl import parse_number, parse_set, render_set
from levicivita.errors import (
    DSLError,
    DSLSyntaxError,
    DuplicateExponent,
    LeviCivitaError,
    NotSMeasurable,
)
from levicivita.intervals import render_interval
from levicivita.measure import (
    No,
    NotOuterMeasurable,
    Undecided,
    Unknown,
    _fmt,
    is_L_measurable,
    outer_measure,
)
from levicivita.sets import Diff, Empty, PointSeq, Union
from levicivita.smeasure import _interval_form, decompose, derive_covers, s_measure, trivial_covers

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OPEN = 0, 1, 2, 3

# how many decomposition pieces to list before eliding
SHOW_PIECES = 8


def _order(text):
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid order {text!r}")
    if q <= 0:
        raise argparse.ArgumentTypeError("order must be positive")
    return q


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="levicivita", description="Exact Levi-Civita arithmetic and measures.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("expr", nargs="?", help="expression text (or use -f)")
        sp.add_argument("-f", "--file", help="read the expression from a UTF-8 file")
        sp.add_argument("--order", type=_order, default=Fraction(16), help="truncation order K (default 16)")
        sp.add_argument("--trace", action="store_true", help="print the rule trace")
        return sp

    add("eval", "evaluate a number or arithmetic expression in d")
    add("measure", "outer measure of a set expression")
    add("lcheck", "decide L-measurability")
    for name in ("smeasure", "decompose"):
        sp = add(name, "S-measure" if name == "smeasure" else "decompose into intervals and a null set")
        sp.add_argument("--covers", choices=("auto", "trivial"), required=True,
                        help="auto: derive covers from the expression; trivial: interval-only sets")
    sp = add("derive", "n-th derivative of f at x0")
    sp.add_argument("--at", type=_rational, required=True, dest="x0")
    sp.add_argument("--n", type=int, default=1)
    return p


def _source(args) -> str:
    if args.file is not None:
        if args.expr is not None:
            raise ValueError("give either an expression or -f, not both")
        with open(args.file, encoding="utf-8") as fh:
            return fh.read().strip()
    if args.expr is None:
        raise ValueError("missing expression")
    return args.expr


def _exit_for(result) -> int:
    if isinstance(result, (NotOuterMeasurable, No)):
        return EXIT_NEGATIVE
    if isinstance(result, (Undecided, Unknown)):
        return EXIT_OPEN
    return EXIT_OK


def _emit_result(result, trace, out):
    print(result.render(), file=out)
    if trace:
        for line in result.trace:
            print(f"  {line}", file=out)


def _cmd_eval(text, args, out):
    try:
        x = parse_number(text)
    except DuplicateExponent:
        raise
    except DSLSyntaxError:
        x = eval_number_expression(text, args.order)
    line = render_number(x)
    if not x.is_exact:
        line += f" (order {_fmt(x.order)})"
    print(line, file=out)
    return EXIT_OK


def _cmd_smeasure(text, args, out):
    A = parse_set(text)
    covers = _covers(A, args.covers)
    r = s_measure(A, args.order, covers)
    print(f"S-measure = {render_number(r.value)} (order {_fmt(r.order)})", file=out)
    if args.trace:
        for line in r.trace:
            print(f"  {line}", file=out)
    return EXIT_OK


def _covers(A, choice):
    if choice == "auto":
        return derive_covers(A)
    form = _interval_form(A)
    if form is None:
        raise ValueError("trivial covers need a set built from intervals only")
    return trivial_covers(form)


def _cmd_decompose(text, args, out):
    A = parse_set(text)
    covers = _covers(A, args.covers)
    dec = decompose(A, args.order, covers)
    K = args.order
    count = dec.intervals.threshold(K)
    pieces = [dec.intervals.at(n) for n in range(1, min(count, SHOW_PIECES) + 1)]
    shown = ", ".join(render_interval(iv) for iv in pieces) or "none"
    if count > SHOW_PIECES:
        shown += f", ... ({count} pieces through order {_fmt(K)})"
    elif not dec.intervals.at(count + 1).is_empty:
        shown += ", ..."
    print(f"intervals: {shown}", file=out)
    print(f"interval sum = {render_number(dec.interval_sum)} (order {_fmt(K)})", file=out)
    print(f"null part: {_render_null(dec.null_part)}", file=out)
    if args.trace:
        for k in range(1, min(int(K), 3) + 1):
            print(f"  residual cover {k}: total {render_number(dec.residual_sum(k, K))}", file=out)
    return EXIT_OK


def _render_null(N):
    if isinstance(N, Empty):
        return "empty"
    if isinstance(N, PointSeq):
        return N.label
    if isinstance(N, Union):
        return f"({_render_null(N.a)} | {_render_null(N.b)})"
    if isinstance(N, Diff):
        b = N.b.seq.label if hasattr(N.b, "seq") else _render_null(N.b)
        return f"({_render_null(N.a)} \\ {b})"
    return render_set(N)


def _cmd_measure(text, args, out):
    r = outer_measure(parse_set(text), args.order)
    _emit_result(r, args.trace, out)
    return _exit_for(r)


def _cmd_lcheck(text, args, out):
    r = is_L_measurable(parse_set(text), args.order)
    _emit_result(r, args.trace, out)
    return _exit_for(r)


def _cmd_derive(text, args, out):
    print(_fmt(derivative_demo(text, args.x0, args.n)), file=out)
    return EXIT_OK


COMMANDS = {
    "eval": _cmd_eval,
    "measure": _cmd_measure,
    "lcheck": _cmd_lcheck,
    "smeasure": _cmd_smeasure,
    "decompose": _cmd_decompose,
    "derive": _cmd_derive,
}


def run_cli(argv=None, out=None, err=None) -> int:
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed the usage message to stderr
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        text = _source(args)
        return COMMANDS[args.command](text, args, out)
    except NotSMeasurable as e:
        print(f"NOT S-MEASURABLE: {e}", file=out)
        return EXIT_NEGATIVE
    except (DSLError, LeviCivitaError, ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return EXIT_ERROR


def main(argv=None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
