"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import io
from .convert import gfa_to_pfa, qfa_to_pfa
from .linearize import qfa_to_gfa
from .models import GFA, GQFA, BoundaryError, UnknownSymbolError, ValidationError, decide
from .verify import AlphabetMismatch, check_agreement
from .witness import all_subsets, build_witness, parse_signs, verify_shattering

OK, FAILED, BAD_INPUT = 0, 1, 2
EMPTY_WORDS = ("", "ε", "eps")


class InputError(Exception):
    pass


def parse_word(text: str, alphabet) -> tuple:
    """Symbols separated by spaces or commas, or a run of one-character symbols."""
    if text in EMPTY_WORDS:
        return ()
    if text in alphabet:
        return (text,)
    if any(c in text for c in " ,"):
        return tuple(s for s in text.replace(",", " ").split())
    if all(len(s) == 1 for s in alphabet):
        return tuple(text)
    raise InputError(f"cannot split word {text!r}; separate symbols with spaces or commas")


def _fmt(value) -> str:
    from fractions import Fraction

    if isinstance(value, Fraction):
        text = str(value)
        return f"{text} (~{float(value):.12g})" if len(text) <= 24 else f"~{float(value):.15g} (exact)"
    return f"{float(value):.12g}"


def _emit(args, rows: list[dict], text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(rows, indent=2))
    else:
        print(text)


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------
def cmd_eval(args) -> int:
    machine = io.load(args.machine)
    rows, lines = [], []
    for text in args.words:
        word = parse_word(text, machine.alphabet)
        value = machine.evaluate(word)
        try:
            verdict = "accept" if decide(value, machine.cutpoint, args.tol) else "reject"
        except BoundaryError:
            verdict = "boundary"
        rows.append({"word": list(word), "value": io.fraction_or_float(value), "decision": verdict})
        lines.append(f"{' '.join(word) or 'ε':<24} {_fmt(value):<40} {verdict}")
    _emit(args, rows, "\n".join(lines))
    return OK


def cmd_convert(args) -> int:
    machine = io.load(args.input)
    trace = None
    if args.direction == "gfa-to-pfa":
        if not isinstance(machine, GFA):
            raise InputError("gfa-to-pfa expects a gfa document")
        out, trace = gfa_to_pfa(machine, args.scale_margin)
    elif args.direction == "qfa-to-gfa":
        if not isinstance(machine, GQFA):
            raise InputError("qfa-to-gfa expects a gqfa document")
        out = qfa_to_gfa(machine)
    else:
        if not isinstance(machine, GQFA):
            raise InputError("qfa-to-pfa expects a gqfa document")
        out, trace = qfa_to_pfa(machine, args.scale_margin)
    io.save(out, args.output)
    if args.trace:
        if trace is None:
            raise InputError("--trace only applies to conversions producing a PFA")
        Path(args.trace).write_text(json.dumps(io.trace_to_document(trace), indent=2) + "\n")
    print(f"{args.direction}: {machine.num_states} -> {out.num_states} states, written to {args.output}")
    return OK


def cmd_witness_build(args) -> int:
    if args.n < 2:
        raise InputError("-n must be at least 2")
    if args.all_tests:
        tests = "all"
    elif args.tests:
        tests = [parse_signs(s) for s in args.tests.split(",")]
    else:
        tests = ()
    Q = build_witness(args.n, tests)
    io.save(Q, args.output)
    p = Q.params
    print(f"witness n={args.n}: {p.d} prepare symbols, {len(Q.alphabet) - p.d} test symbols, "
          f"epsilon={p.epsilon:.6g}, t={p.t:.6g}, margin={p.margin:.6g}")
    return OK


def cmd_verify_agreement(args) -> int:
    a = io.load(args.a)
    b = io.load(args.b)
    report = check_agreement(a, b, args.max_len, args.tol)
    rows = [{
        "words_checked": report.words_checked,
        "disagreements": [{"word": list(w), "a": io.fraction_or_float(x), "b": io.fraction_or_float(y)}
                          for w, x, y in report.disagreements],
        "boundary_flags": [{"word": list(w), "value": io.fraction_or_float(v), "distance": dist}
                           for w, v, dist in report.boundary_flags],
    }]
    lines = [str(report)]
    lines += [f"  disagree on {' '.join(w) or 'ε'}: {_fmt(x)} vs {_fmt(y)}" for w, x, y in report.disagreements[:20]]
    lines += [f"  boundary on {' '.join(w) or 'ε'}: {_fmt(v)}" for w, v, _ in report.boundary_flags[:20]]
    _emit(args, rows, "\n".join(lines))
    return OK if report.ok else FAILED


def cmd_verify_shattering(args) -> int:
    if args.n < 2:
        raise InputError("-n must be at least 2")
    Q = build_witness(args.n)
    d = Q.params.d
    if args.all_subsets:
        if d > 16:
            raise InputError(f"--all-subsets would enumerate 2**{d} subsets")
        subsets = list(all_subsets(d))
    else:
        rng = random.Random(args.seed)
        subsets = [[k for k in range(1, d + 1) if rng.random() < 0.5] for _ in range(args.samples)]
    report = verify_shattering(Q, subsets)
    rows = [{"n": args.n, "d": d, "checks": report.checks, "passed": report.passed,
             "min_margin": report.min_margin}]
    _emit(args, rows, f"{report} (n={args.n}, d={d}, min margin {report.min_margin:.6g})")
    return OK if report.ok else FAILED


def bounds_table(n_from: int, n_to: int) -> list[dict]:
    return [{"n": n, "gfa_states": n * n, "upper": 2 * n * n + 6, "lower": n * n - 1}
            for n in range(n_from, n_to + 1)]


def cmd_report_bounds(args) -> int:
    if args.n_from < 2 or args.n_to < args.n_from:
        raise InputError("need 2 <= --n-from <= --n-to")
    rows = bounds_table(args.n_from, args.n_to)
    lines = [f"{'n':>4} {'GFA states':>11} {'PFA upper':>10} {'PFA lower':>10}"]
    lines += [f"{r['n']:>4} {r['gfa_states']:>11} {r['upper']:>10} {r['lower']:>10}" for r in rows]
    _emit(args, rows, "\n".join(lines))
    return OK


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cutpoint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a machine on words")
    p.add_argument("machine")
    p.add_argument("words", nargs="*", default=[""])
    p.add_argument("--tol", type=float, default=1e-9, help="boundary band for float machines")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convert", help="convert between machine kinds")
    p.add_argument("direction", choices=["gfa-to-pfa", "qfa-to-gfa", "qfa-to-pfa"])
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--trace", help="write the conversion intermediates here")
    p.add_argument("--scale-margin", default="1",
                   help="C = max|B_ij| + margin (exact rational, default 1)")
    p.set_defaults(func=cmd_convert)

    w = sub.add_parser("witness", help="prepare-test witness machines").add_subparsers(dest="action", required=True)
    p = w.add_parser("build")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--tests", help="comma-separated sign strings such as +--,-+-")
    p.add_argument("--all-tests", action="store_true")
    p.set_defaults(func=cmd_witness_build)

    v = sub.add_parser("verify", help="brute-force checks").add_subparsers(dest="action", required=True)
    p = v.add_parser("agreement")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_agreement)
    p = v.add_parser("shattering")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--all-subsets", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_shattering)

    r = sub.add_parser("report", help="state-complexity tables").add_subparsers(dest="action", required=True)
    p = r.add_parser("bounds")
    p.add_argument("--n-from", type=int, default=2)
    p.add_argument("--n-to", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report_bounds)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, io.ParseError, ValidationError, AlphabetMismatch, UnknownSymbolError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
