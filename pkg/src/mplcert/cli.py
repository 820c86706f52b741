"""Command-line front end: evaluate primitives, sum binomial series, verify
the identity registry, list the catalogue.

Exit codes: 0 success / all PASS; 1 any FAIL; 2 usage or parse error;
3 evaluation/domain error; 4 UNCERTAIN results with no FAIL.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath import mp, mpf

from .errors import MplcertError
from . import stats
from .precision import (CertifiedReal, PrecisionContext, make_context,
                        golden_ratio, ln_golden_ratio, pi_const, zeta_int)
from .polylogs import li, mpl, mpl_single, nielsen, MPLArgument
from .iterint import IteratedWord, eval_word, h_m1001
from .apery import AperySumSpec, HarmonicWeight, WeightFactor, apery_sum
from .registry import (builtin_registry, lookup, verify, verify_all,
                       aggregate_verdict, report_record)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_UNCERTAIN = 4


class SpecParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Value tokens: gf, pi, ln_gf, zeta3, rationals/decimals, optional ^exponent
# ---------------------------------------------------------------------------

_CONST_TOKENS = ("gf", "pi", "ln_gf", "zeta3")


def _const_value(name: str, ctx: PrecisionContext) -> CertifiedReal:
    if name == "gf":
        return golden_ratio(ctx)
    if name == "pi":
        return pi_const(ctx)
    if name == "ln_gf":
        return ln_golden_ratio(ctx)
    if name == "zeta3":
        return zeta_int(3, ctx)
    raise SpecParseError(f"unknown constant {name!r} (known: {', '.join(_CONST_TOKENS)})")


def parse_value(token: str, ctx: PrecisionContext) -> Union[Fraction, CertifiedReal]:
    """Parse a numeric token; rationals stay exact, constants go certified."""
    token = token.strip()
    if not token:
        raise SpecParseError("empty value token")
    body, power = token, 1
    if "^" in token:
        body, _, exp = token.partition("^")
        try:
            power = int(exp)
        except ValueError:
            raise SpecParseError(f"bad exponent in {token!r}") from None
    negate = body.startswith("-") and body[1:] in _CONST_TOKENS
    if negate:
        body = body[1:]
    if body in _CONST_TOKENS:
        v = _const_value(body, ctx)
        if power < 0:
            v = v.reciprocal() ** (-power)
        else:
            v = v ** power
        return -v if negate else v
    try:
        q = Fraction(body)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"cannot parse value {token!r}") from None
    if power < 0:
        if q == 0:
            raise SpecParseError("cannot invert zero")
        return (1 / q) ** (-power)
    return q ** power


def _parse_int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SpecParseError(f"{what} must be an integer, got {token!r}") from None


# ---------------------------------------------------------------------------
# Weight grammar: terms of rationals and factor tokens joined by * and +/-
# ---------------------------------------------------------------------------

_FACTOR_TOKENS = {f.value: f for f in WeightFactor}


def parse_weight(text: str):
    """Parse e.g. 'H2(n-1)', '10*H(n)-3/n', '1' into a weight combination."""
    text = text.replace(" ", "")
    if not text:
        raise SpecParseError("empty weight")
    terms = []
    start = 0
    depth = 0
    piece_sign = 1
    pieces: list[tuple[int, str]] = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start:
            pieces.append((piece_sign, text[start:i]))
            piece_sign = 1 if ch == "+" else -1
            start = i + 1
    pieces.append((piece_sign, text[start:]))
    for sgn, piece in pieces:
        if not piece:
            raise SpecParseError(f"dangling sign in weight {text!r}")
        coeff = Fraction(sgn)
        factors: list[WeightFactor] = []
        for element in _split_weight_elements(piece):
            if element in _FACTOR_TOKENS:
                factors.append(_FACTOR_TOKENS[element])
            elif element.endswith("/n") and element != "1/n":
                coeff *= _parse_rational(element[:-2])
                factors.append(WeightFactor.INV_N)
            else:
                coeff *= _parse_rational(element)
        if not factors:
            factors = [WeightFactor.ONE]
        terms.append((coeff, HarmonicWeight(tuple(factors))))
    return tuple(terms)


def _split_weight_elements(piece: str) -> list[str]:
    out, start, depth = [], 0, 0
    for i, ch in enumerate(piece):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(piece[start:i])
            start = i + 1
    out.append(piece[start:])
    return [e for e in out if e]


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"bad rational {text!r} in weight") from None


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _print_value(v: CertifiedReal, digits: int, fmt: str) -> None:
    with mp.workprec(int(digits * 3.33) + 32):
        value = mp.nstr(v.value, digits)
        bound = mp.nstr(v.error_bound, 6)
    if fmt == "machine":
        print(json.dumps({"value": value, "certified_bound": bound,
                          "terms_used": stats.get_terms()}))
    else:
        print(f"value           = {value}")
        print(f"certified_bound = {bound}")
        print(f"terms_used      = {stats.get_terms()}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_eval(args, ctx: PrecisionContext, fmt: str) -> int:
    spec = args.spec
    if not spec:
        raise SpecParseError("eval needs a target, e.g. 'li 2 gf'")
    head, rest = spec[0], spec[1:]
    stats.reset_terms()
    if head == "li":
        if len(rest) != 2:
            raise SpecParseError("usage: eval li K X")
        v = li(_parse_int(rest[0], "order"), parse_value(rest[1], ctx), ctx)
    elif head == "mpl":
        if len(rest) != 2:
            raise SpecParseError("usage: eval mpl K1,..,KR X1,..,XR")
        parts = tuple(_parse_int(t, "order") for t in rest[0].split(","))
        vals = tuple(parse_value(t, ctx) for t in rest[1].split(","))
        if len(vals) == 1:
            v = mpl_single(parts, vals[0], ctx)
        else:
            v = mpl(parts, MPLArgument.of(vals), ctx)
    elif head == "nielsen":
        if len(rest) != 3:
            raise SpecParseError("usage: eval nielsen A B Z")
        v = nielsen(_parse_int(rest[0], "a"), _parse_int(rest[1], "b"),
                    parse_value(rest[2], ctx), ctx)
    elif head == "word":
        if len(rest) != 1:
            raise SpecParseError("usage: eval word A1,A2,...")
        letters = tuple(parse_value(t, ctx) for t in rest[0].split(","))
        v = eval_word(IteratedWord(letters), ctx)
    elif head == "h1001":
        if len(rest) != 1:
            raise SpecParseError("usage: eval h1001 Y")
        v = h_m1001(parse_value(rest[0], ctx), ctx)
    elif head == "const":
        if len(rest) != 1:
            raise SpecParseError("usage: eval const NAME")
        v = _const_value(rest[0], ctx)
    else:
        raise SpecParseError(f"unknown eval target {head!r}")
    _print_value(v, ctx.target_digits, fmt)
    return EXIT_OK


def cmd_sum(args, ctx: PrecisionContext, fmt: str) -> int:
    try:
        u = Fraction(args.u)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"bad base {args.u!r}") from None
    weight = parse_weight(args.weight)
    stats.reset_terms()
    spec = AperySumSpec(u, args.s, weight)
    v = apery_sum(spec, ctx)
    _print_value(v, ctx.target_digits, fmt)
    return EXIT_OK


def cmd_verify(args, ctx: PrecisionContext, fmt: str) -> int:
    known = {r.id for r in builtin_registry()}
    if args.all:
        ids: Optional[list[str]] = None
    else:
        if not args.ids:
            print("verify needs identity ids or --all", file=sys.stderr)
            return EXIT_USAGE
        bad = [i for i in args.ids if i not in known]
        if bad:
            print(f"unknown identity id(s): {', '.join(bad)}", file=sys.stderr)
            return EXIT_USAGE
        ids = args.ids
    u_grid = None
    if args.u_grid:
        try:
            u_grid = [Fraction(t) for t in args.u_grid.split(",")]
        except (ValueError, ZeroDivisionError):
            print(f"bad --u-grid {args.u_grid!r}", file=sys.stderr)
            return EXIT_USAGE
    digits = ctx.target_digits
    reports = verify_all(digits, ids=ids, u_grid=u_grid)
    for r in reports:
        citation = lookup(r.id).citation
        if fmt == "machine":
            print(json.dumps(report_record(r, citation)))
        else:
            with mp.workprec(64):
                print(f"{r.label:34s} {r.verdict:9s} diff={mp.nstr(r.abs_difference, 6):14s} "
                      f"bound={mp.nstr(r.certified_bound, 6):14s} terms={r.terms_used:8d} "
                      f"t={r.elapsed_seconds:.3f}s" + (f"  [{r.detail}]" if r.detail else ""))
    overall = aggregate_verdict(reports)
    if fmt != "machine":
        print(f"aggregate: {overall} ({len(reports)} reports)")
    if overall == "FAIL":
        return EXIT_FAIL
    if overall == "UNCERTAIN":
        return EXIT_UNCERTAIN
    return EXIT_OK


def cmd_list(args, fmt: str) -> int:
    for rec in builtin_registry():
        if fmt == "machine":
            print(json.dumps({
                "id": rec.id,
                "description": rec.description,
                "paper_ref": rec.citation,
                "grid_points": len(rec.grid) if rec.build is not None else 1,
            }))
        else:
            print(f"{rec.id:4s} {rec.description}  [{rec.citation}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=30,
                        help="requested decimal digits (10..1000, default 30)")
    common.add_argument("--format", choices=("text", "machine"), default="text",
                        help="output format (machine = one JSON record per line)")

    ap = argparse.ArgumentParser(
        prog="mplcert",
        description="Certified evaluation of multiple polylogarithms and "
                    "Apery-like central-binomial sums, with an identity verifier.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate one primitive")
    p_eval.add_argument("spec", nargs=argparse.REMAINDER,
                        help="li K X | mpl K1,..,KR X1,..,XR | nielsen A B Z | "
                             "word A1,..,AN | h1001 Y | const NAME")

    p_sum = sub.add_parser("sum", parents=[common],
                           help="evaluate a central-binomial series")
    p_sum.add_argument("-u", required=True, help="series base (rational, |u| < 4)")
    p_sum.add_argument("-s", type=int, required=True, help="power of n (>= 2)")
    p_sum.add_argument("-w", "--weight", required=True,
                       help="harmonic weight, e.g. 'H2(n-1)' or '10*H(n)-3/n'")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="verify registry identities")
    p_verify.add_argument("ids", nargs="*", help="identity ids (e.g. I4 I21)")
    p_verify.add_argument("--all", action="store_true", help="verify everything")
    p_verify.add_argument("--u-grid", help="override u grid, e.g. '-1/2,-1,-2'")

    sub.add_parser("list", parents=[common], help="list the identity registry")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not 10 <= args.digits <= 1000:
        print("--digits must be in [10, 1000]", file=sys.stderr)
        return EXIT_USAGE
    fmt = args.format
    try:
        if args.command == "list":
            return cmd_list(args, fmt)
        ctx = make_context(args.digits)
        if args.command == "eval":
            return cmd_eval(args, ctx, fmt)
        if args.command == "sum":
            return cmd_sum(args, ctx, fmt)
        if args.command == "verify":
            return cmd_verify(args, ctx, fmt)
    except SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MplcertError, ZeroDivisionError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
