"""Machine-readable catalogue of the verified identities.

Each identity is stored as a pair of expression trees over the evaluator
primitives (series polylogarithms, central-binomial sums, iterated-integral
words, the quadrature oracle and the zeta/constant layer), together with a
citation to the literature where the identity comes from, an optional
parameter grid, and the verification machinery that evaluates both sides
at a requested precision and grades the outcome.

The binomial-sum identities I1-I11 keep their two sides on structurally
independent code paths: the left side only ever calls the direct
central-binomial summation, the right side only polylogarithm/zeta
primitives.  That separation is asserted by the test suite on the
expression trees themselves.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from mpmath import mp, mpf

from .errors import MplcertError
from . import stats
from .precision import (CertifiedReal, PrecisionContext, make_context, pi_const,
                        golden_ratio, golden_ratio_sq, ln_golden_ratio,
                        zeta_even, zeta_int, DEFAULT_GUARD_BITS, GUARD_BITS_PER_DEPTH)
from .polylogs import li, mpl, mpl_single, mzv, nielsen, MPLArgument
from .iterint import IteratedWord, eval_word, h_m1001, quadrature, nielsen_integrand
from .apery import AperySumSpec, HarmonicWeight, WeightFactor, apery_sum, dk_rhs
from .stuffle import quasi_shuffle, verify_stuffle_numeric, FormalSum


# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------

class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Lit(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Const(Expr):
    name: str  # pi | phi | phi2 | ln_phi | zeta31


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    args: tuple


def LIT(q) -> Lit:
    return Lit(Fraction(q))


def ADD(*terms: Expr) -> Add:
    return Add(tuple(terms))


def MUL(*factors: Expr) -> Mul:
    return Mul(tuple(factors))


def NEG(e: Expr) -> Expr:
    return MUL(LIT(-1), e)


def POW(base: Expr, n: int) -> Pow:
    return Pow(base, n)


def LI(k: int, x: Expr) -> Call:
    return Call("li", (k, x))


def MPLS(parts: Sequence[int], x: Expr) -> Call:
    return Call("mpl_single", (tuple(parts), x))


def MPLM(parts: Sequence[int], *args: Expr) -> Call:
    return Call("mpl", (tuple(parts), tuple(args)))


def NIELSEN(a: int, b: int, z: Expr) -> Call:
    return Call("nielsen", (a, b, z))


def NIELSEN_INTEGRAL(a: int, b: int, z: Expr) -> Call:
    return Call("nielsen_integral", (a, b, z))


def WORD(*letters: Expr) -> Call:
    return Call("eval_word", (tuple(letters),))


def INV(e: Expr) -> Call:
    return Call("inv", (e,))


def LN(e: Expr) -> Call:
    return Call("ln", (e,))


def H1001(y: Expr) -> Call:
    return Call("h_m1001", (y,))


def ZETA(s: int) -> Call:
    return Call("zeta", (s,))


def ZETA_EVEN(k: int) -> Call:
    return Call("zeta_even", (k,))


def weights(*terms) -> tuple:
    """Weight combination: each term is (coefficient, factor-token, ...)."""
    out = []
    for t in terms:
        coeff = Fraction(t[0])
        out.append((coeff, tuple(t[1:])))
    return tuple(out)


def APERY(u, s: int, weight) -> Call:
    if isinstance(weight, str):
        weight = weights((1, weight))
    return Call("apery_sum", (Fraction(u), s, weight))


def DKRHS(kind: str, u) -> Call:
    return Call("dk_rhs", (kind, Fraction(u)))


_FACTOR_BY_TOKEN = {f.value: f for f in WeightFactor}

PI = Const("pi")
PHI = Const("phi")
PHI2 = Const("phi2")
LNPHI = Const("ln_phi")
ZETA31 = Const("zeta31")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

class ExprEvalError(MplcertError):
    """Primitive failure, annotated with the expression path."""


def _combo_from_tokens(combo) -> tuple:
    return tuple((coeff, HarmonicWeight(tuple(_FACTOR_BY_TOKEN[t] for t in toks)))
                 for coeff, toks in combo)


def _arg_value(e, ctx) -> Union[Fraction, CertifiedReal]:
    """Evaluate an expression used as a numeric argument, keeping exactness."""
    if isinstance(e, Lit):
        return e.value
    return _eval(e, ctx)


def _eval(e: Expr, ctx: PrecisionContext) -> CertifiedReal:
    try:
        if isinstance(e, Lit):
            return CertifiedReal.exact(e.value)
        if isinstance(e, Const):
            return _eval_const(e.name, ctx)
        if isinstance(e, Add):
            out = CertifiedReal.exact(0)
            for t in e.terms:
                out = out + _eval(t, ctx)
            return out
        if isinstance(e, Mul):
            out = CertifiedReal.exact(1)
            for f in e.factors:
                out = out * _eval(f, ctx)
            return out
        if isinstance(e, Pow):
            return _eval(e.base, ctx) ** e.exponent
        if isinstance(e, Call):
            return _eval_call(e, ctx)
    except ExprEvalError:
        raise
    except (MplcertError, ZeroDivisionError, ValueError, TypeError) as exc:
        raise ExprEvalError(f"{_node_label(e)}: {exc}") from exc
    raise ExprEvalError(f"not an expression node: {e!r}")


def _node_label(e: Expr) -> str:
    if isinstance(e, Call):
        return f"call {e.fn}"
    return type(e).__name__.lower()


def _eval_const(name: str, ctx: PrecisionContext) -> CertifiedReal:
    if name == "pi":
        return pi_const(ctx)
    if name == "phi":
        return golden_ratio(ctx)
    if name == "phi2":
        return golden_ratio_sq(ctx)
    if name == "ln_phi":
        return ln_golden_ratio(ctx)
    if name == "zeta31":
        # classical weight-4 reduction: the double zeta value (3,1) equals
        # zeta(4)/4 = pi^4/360; cross-checked against the direct double
        # series in the test suite.
        return zeta_even(2, ctx) / 4
    raise ExprEvalError(f"unknown constant {name!r}")


def _eval_call(e: Call, ctx: PrecisionContext) -> CertifiedReal:
    fn, args = e.fn, e.args
    if fn == "li":
        k, x = args
        return li(k, _arg_value(x, ctx), ctx)
    if fn == "mpl_single":
        parts, x = args
        return mpl_single(parts, _arg_value(x, ctx), ctx)
    if fn == "mpl":
        parts, arg_exprs = args
        vals = tuple(_arg_value(a, ctx) for a in arg_exprs)
        return mpl(parts, MPLArgument.of(vals), ctx)
    if fn == "mzv":
        (parts,) = args
        return mzv(parts, ctx)
    if fn == "nielsen":
        a, b, z = args
        return nielsen(a, b, _arg_value(z, ctx), ctx)
    if fn == "nielsen_integral":
        a, b, z = args
        f = nielsen_integrand(a, b, _arg_value(z, ctx), ctx)
        return quadrature(f, 0, 1, ctx)
    if fn == "eval_word":
        (letter_exprs,) = args
        letters = tuple(_arg_value(l, ctx) for l in letter_exprs)
        return eval_word(IteratedWord(letters), ctx)
    if fn == "inv":
        (x,) = args
        return _eval(x, ctx).reciprocal()
    if fn == "ln":
        (x,) = args
        return _eval(x, ctx).ln()
    if fn == "h_m1001":
        (y,) = args
        return h_m1001(_arg_value(y, ctx), ctx)
    if fn == "apery_sum":
        u, s, combo = args
        return apery_sum(AperySumSpec(u, s, _combo_from_tokens(combo)), ctx)
    if fn == "dk_rhs":
        kind, u = args
        return dk_rhs(kind, u, ctx)
    if fn == "zeta":
        (s,) = args
        return zeta_int(s, ctx)
    if fn == "zeta_even":
        (k,) = args
        return zeta_even(k, ctx)
    raise ExprEvalError(f"unknown primitive {fn!r}")


def eval_expr(e: Expr, ctx: PrecisionContext) -> CertifiedReal:
    """Bottom-up evaluation with conservative bound propagation."""
    with ctx.workprec():
        return _eval(e, ctx)


def expr_depth(e: Expr) -> int:
    if isinstance(e, (Lit, Const)):
        return 1
    if isinstance(e, Add):
        return 1 + max(expr_depth(t) for t in e.terms)
    if isinstance(e, Mul):
        return 1 + max(expr_depth(f) for f in e.factors)
    if isinstance(e, Pow):
        return 1 + expr_depth(e.base)
    if isinstance(e, Call):
        sub = [expr_depth(a) for a in e.args if isinstance(a, Expr)]
        sub += [expr_depth(x) for a in e.args if isinstance(a, tuple)
                for x in a if isinstance(x, Expr)]
        return 1 + (max(sub) if sub else 0)
    raise TypeError(f"not an expression: {e!r}")


def expr_primitives(e: Expr) -> frozenset[str]:
    """Names of all primitive calls appearing in the tree."""
    out: set[str] = set()

    def walk(node):
        if isinstance(node, Call):
            out.add(node.fn)
            for a in node.args:
                walk(a)
        elif isinstance(node, Add):
            for t in node.terms:
                walk(t)
        elif isinstance(node, Mul):
            for f in node.factors:
                walk(f)
        elif isinstance(node, Pow):
            walk(node.base)
        elif isinstance(node, tuple):
            for x in node:
                walk(x)

    walk(e)
    return frozenset(out)


def count_literals(e: Expr) -> int:
    n = 0

    def walk(node):
        nonlocal n
        if isinstance(node, Lit):
            n += 1
        elif isinstance(node, Add):
            for t in node.terms:
                walk(t)
        elif isinstance(node, Mul):
            for f in node.factors:
                walk(f)
        elif isinstance(node, Pow):
            walk(node.base)
        # Call arguments are left alone: their rationals are structural
        # parameters (orders, bases), not identity coefficients.

    walk(e)
    return n


def perturb_literal(e: Expr, index: int, delta: Fraction = Fraction(1, 10 ** 6)) -> Expr:
    """Copy of the tree with the index-th rational coefficient shifted by delta."""
    counter = [0]

    def walk(node):
        if isinstance(node, Lit):
            i = counter[0]
            counter[0] += 1
            return Lit(node.value + delta) if i == index else node
        if isinstance(node, Add):
            return Add(tuple(walk(t) for t in node.terms))
        if isinstance(node, Mul):
            return Mul(tuple(walk(f) for f in node.factors))
        if isinstance(node, Pow):
            return Pow(walk(node.base), node.exponent)
        return node

    out = walk(e)
    if counter[0] <= index:
        raise ValueError(f"expression has only {counter[0]} rational coefficients")
    return out


# ---------------------------------------------------------------------------
# Identity records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityRecord:
    """One verifiable identity: LHS/RHS builders plus its parameter grid."""

    id: str
    description: str
    citation: str
    build: Optional[Callable[[dict], tuple[Expr, Expr]]]
    grid: tuple[dict, ...] = ({},)
    threshold: Optional[Callable[[dict, int], mpf]] = None
    exact_check: Optional[Callable[[], tuple[bool, int]]] = None


@dataclass
class VerificationReport:
    """Numeric verdict for one identity at one grid point."""

    id: str
    label: str
    requested_digits: int
    abs_difference: mpf
    certified_bound: mpf
    terms_used: int
    elapsed_seconds: float
    verdict: str
    detail: str = ""


U_GRID_DEFAULT = (Fraction(-1, 2), Fraction(-1), Fraction(-2), Fraction(-3))
X_GRID_DEFAULT = (Fraction(1, 5), Fraction(1, 2), "phi", Fraction(4, 5))


def _xe(x) -> Expr:
    if x == "phi":
        return PHI
    if x == "phi2":
        return PHI2
    return LIT(x)


def _one_minus(x) -> Expr:
    # 1 - phi = phi^2 and 1 - phi^2 = phi: keep golden complements exact.
    if x == "phi":
        return PHI2
    if x == "phi2":
        return PHI
    return LIT(1 - Fraction(x))


def _ln_of(x) -> Expr:
    if x == "phi":
        return LNPHI
    if x == "phi2":
        return MUL(LIT(2), LNPHI)
    return LN(LIT(x))


def _ln_one_minus(x) -> Expr:
    if x == "phi":
        return MUL(LIT(2), LNPHI)
    if x == "phi2":
        return LNPHI
    return LN(LIT(1 - Fraction(x)))


def li3_star(x: Fraction) -> Expr:
    """Landen-shifted trilogarithm: zeta(3) - Li3(1-x) + zeta(2) ln(1-x)
    - (1/2) ln(x) ln^2(1-x), for exact rational 0 < x < 1."""
    x = Fraction(x)
    return ADD(
        ZETA(3),
        NEG(LI(3, LIT(1 - x))),
        MUL(ZETA_EVEN(1), LN(LIT(1 - x))),
        MUL(LIT(Fraction(-1, 2)), LN(LIT(x)), POW(LN(LIT(1 - x)), 2)),
    )


def _pi4(coeff) -> Expr:
    return MUL(LIT(coeff), POW(PI, 4))


def _b_i1(p):
    lhs = NEG(APERY(-1, 3, weights((10, "H(n)"), (-3, "1/n"))))
    return lhs, _pi4(Fraction(1, 30))


def _b_i2(p):
    lhs = APERY(1, 2, weights((3, "H(n-1)", "H(n-1)"), (4, "1/n", "H(n-1)")))
    return lhs, _pi4(Fraction(1, 360))


def _b_i3(p):
    lhs = NEG(APERY(-1, 3, weights((1, "H(2n)"), (4, "H(n)"))))
    return lhs, _pi4(Fraction(2, 75))


def _b_i4(p):
    return APERY(1, 2, "H2(n-1)"), MUL(LIT(Fraction(5, 108)), ZETA(4))


def _b_i5(p):
    lhs = ADD(MUL(LIT(2), APERY(1, 3, "H(n-1)")),
              MUL(LIT(3), APERY(1, 2, "Z11(n-1)")))
    return lhs, MUL(LIT(Fraction(1, 18)), ZETA(4))


def _b_i6(p):
    rhs = ADD(
        MUL(LIT(Fraction(12, 5)), LI(3, PHI), LNPHI),
        MUL(LIT(Fraction(3, 20)), LI(4, PHI2)),
        MUL(LIT(Fraction(-12, 5)), LI(4, PHI)),
        MUL(LIT(Fraction(-6, 25)), ZETA(3), LNPHI),
        MUL(LIT(Fraction(13, 20)), POW(LNPHI, 4)),
        MUL(LIT(Fraction(-7, 50)), POW(PI, 2), POW(LNPHI, 2)),
        _pi4(Fraction(1, 50)),
    )
    return APERY(-1, 3, "H(n)"), rhs


def _b_i7(p):
    rhs = ADD(
        MUL(LIT(8), LI(3, PHI), LNPHI),
        MUL(LIT(Fraction(1, 2)), LI(4, PHI2)),
        MUL(LIT(-8), LI(4, PHI)),
        MUL(LIT(Fraction(-4, 5)), ZETA(3), LNPHI),
        MUL(LIT(Fraction(13, 6)), POW(LNPHI, 4)),
        MUL(LIT(Fraction(-7, 15)), POW(PI, 2), POW(LNPHI, 2)),
        _pi4(Fraction(7, 90)),
    )
    return APERY(-1, 4, "1"), rhs


def _b_i8(p):
    u = p["u"]
    return APERY(u, 3, "H(n-1)"), DKRHS("H", u)


def _b_i9(p):
    u = p["u"]
    return APERY(u, 3, "H(2n-1)"), DKRHS("H2", u)


def _b_i10(p):
    u = p["u"]
    lhs = APERY(u, 3, weights((1, "H(n-1)"), (-1, "H(2n-1)")))
    return lhs, DKRHS("DIFF", u)


def _b_i11(p):
    lhs = APERY(-1, 3, weights((1, "H(n-1)"), (-1, "H(2n-1)")))
    rhs = ADD(
        MUL(LIT(4), MPLS((3, 1), PHI2)),
        MUL(LIT(-4), LI(4, PHI2)),
        POW(LI(2, PHI2), 2),
        MUL(LIT(-8), MPLS((2, 1), PHI2), LNPHI),
        MUL(LIT(8), LI(3, PHI2), LNPHI),
        MUL(LIT(-6), LI(2, PHI2), POW(LNPHI, 2)),
        NEG(POW(LNPHI, 4)),
        MUL(LIT(-2), ZETA_EVEN(1), LI(2, PHI2)),
        MUL(LIT(-2), ZETA_EVEN(1), POW(LNPHI, 2)),
        MUL(LIT(Fraction(11, 2)), ZETA_EVEN(2)),
    )
    return lhs, rhs


def _b_i12(p):
    lhs = NEG(APERY(-1, 3, weights((1, "H(2n)"), (4, "H(n)"))))
    rhs = ADD(
        APERY(-1, 3, weights((1, "H(n-1)"), (-1, "H(2n-1)"))),
        MUL(LIT(-5), APERY(-1, 3, "H(n)")),
        MUL(LIT(Fraction(1, 2)), APERY(-1, 4, "1")),
    )
    return lhs, rhs


def _b_i13(p):
    lhs = NEG(APERY(-1, 3, weights((1, "H(2n)"), (4, "H(n)"))))
    rhs = ADD(
        MUL(LIT(-8), LI(3, PHI), LNPHI),
        MUL(LIT(Fraction(-9, 2)), LI(4, PHI2)),
        MUL(LIT(8), LI(4, PHI)),
        MUL(LIT(4), MPLS((3, 1), PHI2)),
        POW(LI(2, PHI2), 2),
        MUL(LIT(-8), MPLS((2, 1), PHI2), LNPHI),
        MUL(LIT(8), LI(3, PHI2), LNPHI),
        MUL(LIT(-6), LI(2, PHI2), POW(LNPHI, 2)),
        MUL(LIT(-2), ZETA_EVEN(1), LI(2, PHI2)),
        MUL(LIT(Fraction(4, 5)), ZETA(3), LNPHI),
        MUL(LIT(Fraction(-19, 6)), POW(LNPHI, 4)),
        MUL(LIT(Fraction(2, 15)), POW(PI, 2), POW(LNPHI, 2)),
    )
    return lhs, rhs


def _b_i14(p):
    lhs = WORD(LIT(0), INV(PHI2), INV(PHI2))
    rhs = ADD(ZETA(3), MUL(LIT(Fraction(1, 10)), POW(PI, 2), LNPHI), NEG(LI(3, PHI)))
    return lhs, rhs


def _b_i15(p):
    lhs = WORD(LIT(0), LIT(0), INV(PHI2), INV(PHI2))
    rhs = ADD(
        _pi4(Fraction(1, 90)),
        MUL(LIT(Fraction(-1, 20)), POW(PI, 2), POW(LNPHI, 2)),
        MUL(LIT(Fraction(3, 8)), POW(LNPHI, 4)),
        MUL(LIT(Fraction(9, 8)), LI(4, PHI2)),
        MUL(LIT(-2), LI(4, PHI)),
        MUL(LIT(Fraction(1, 5)), ZETA(3), LNPHI),
    )
    return lhs, rhs


def _b_i16(p):
    rhs = ADD(MUL(LIT(Fraction(1, 15)), POW(PI, 2)), NEG(POW(LNPHI, 2)))
    return LI(2, PHI2), rhs


def _b_i17(p):
    rhs = ADD(MUL(LIT(Fraction(4, 5)), ZETA(3)),
              MUL(LIT(Fraction(-2, 3)), POW(LNPHI, 3)),
              MUL(LIT(Fraction(2, 15)), POW(PI, 2), LNPHI))
    return LI(3, PHI2), rhs


def _b_i18(p):
    rhs = ADD(MUL(LIT(Fraction(1, 10)), POW(PI, 2)), NEG(POW(LNPHI, 2)))
    return LI(2, PHI), rhs


def _b_i19(p):
    x = p["x"]
    xe, om = _xe(x), _one_minus(x)
    lnx, lnom = _ln_of(x), _ln_one_minus(x)
    rhs = ADD(
        ZETA(3),
        NEG(LI(3, om)),
        MUL(lnom, LI(2, om)),
        MUL(LIT(Fraction(1, 2)), lnx, POW(lnom, 2)),
    )
    return MPLS((2, 1), xe), rhs


def _b_i20(p):
    x = p["x"]
    xe, om = _xe(x), _one_minus(x)
    lnx, lnom = _ln_of(x), _ln_one_minus(x)
    lhs = ADD(MPLS((3, 1), xe), MPLS((3, 1), om))
    rhs = ADD(
        MUL(lnx, ADD(ZETA(3), NEG(LI(3, om)), MUL(lnom, LI(2, om)))),
        ZETA31,
        MUL(lnom, MPLS((2, 1), om)),
        MUL(LIT(Fraction(1, 4)), POW(lnx, 2), POW(lnom, 2)),
    )
    return lhs, rhs


def _b_i21(p):
    lhs = ADD(MPLS((3, 1), PHI), MPLS((3, 1), PHI2))
    rhs = ADD(
        _pi4(Fraction(1, 360)),
        MUL(LIT(Fraction(1, 5)), POW(PI, 2), POW(LNPHI, 2)),
        MUL(LIT(Fraction(-1, 3)), POW(LNPHI, 4)),
        MUL(LIT(-2), LNPHI, LI(3, PHI)),
        MUL(LIT(Fraction(11, 5)), ZETA(3), LNPHI),
    )
    return lhs, rhs


def _b_i22(p):
    x, y = Fraction(p["x"]), Fraction(p["y"])
    xy = x * y
    x_shift = x * (1 - y) / (1 - xy)
    if p.get("mode") == "limit":
        lhs = ADD(li3_star(x), NEG(li3_star(x_shift)))
        rhs = MUL(ZETA_EVEN(1), LN(LIT(1 - y)))
        return lhs, rhs
    lhs = MPLM((2, 1), LIT(y), LIT(x))
    rhs = ADD(
        li3_star(x),
        NEG(li3_star(x_shift)),
        li3_star(xy),
        NEG(LI(3, LIT(y * (1 - x) / (1 - xy)))),
        LI(3, LIT(y)),
        NEG(LI(3, LIT(xy))),
        NEG(MUL(LN(LIT(1 - xy)), ADD(LI(2, LIT(x)), LI(2, LIT(y))))),
        MUL(LIT(Fraction(-1, 2)),
            POW(LN(LIT((1 - x) / (1 - xy))), 2),
            LN(LIT((1 - y) / (1 - xy)))),
    )
    return lhs, rhs


def _b_i23(p):
    a, b, z = p["a"], p["b"], p["z"]
    return NIELSEN(a, b, _xe(z)), NIELSEN_INTEGRAL(a, b, _xe(z))


def _b_i24(p):
    k = p["k"]
    return ZETA(2 * k), ZETA_EVEN(k)


def _i25_exact_check() -> tuple[bool, int]:
    n_check = 200
    expansion_ok = quasi_shuffle((1,), (1,)) == FormalSum({(1, 1): 2, (2,): 1})
    numeric_ok = verify_stuffle_numeric((1,), (1,), n_check)
    return expansion_ok and numeric_ok, n_check


def _thr_i22(p, digits: int) -> Optional[mpf]:
    if p.get("mode") != "limit":
        return None
    delta = 1 - Fraction(p["x"])
    d = mpf(delta.numerator) / delta.denominator
    return 4 * d * mp.log(d) ** 2


def _thr_i23(p, digits: int) -> mpf:
    # quadrature oracle tolerance floor: 30-digit agreement is the contract
    return max(mpf(10) ** (-(digits - 5)), mpf(10) ** (-30))


_I22_GRID = tuple({"x": x, "y": y}
                  for x in (Fraction(3, 10), Fraction(7, 10))
                  for y in (Fraction(1, 5), Fraction(1, 2)))
_I22_LIMIT_GRID = tuple({"x": 1 - d, "y": y, "mode": "limit"}
                        for d in (Fraction(1, 10 ** 4), Fraction(1, 10 ** 6))
                        for y in (Fraction(1, 5), Fraction(1, 2)))
_I23_GRID = tuple({"a": a, "b": b, "z": z}
                  for (a, b) in ((1, 2), (2, 2), (1, 3))
                  for z in (Fraction(3, 10), "phi2"))

_REGISTRY: tuple[IdentityRecord, ...] = (
    IdentityRecord(
        "I1", "sum (-1)^(n-1) (10 H_n - 3/n) / (n^3 C(2n,n)) = pi^4/30",
        "Z.-W. Sun (2015), conjectured; first proved by Chu (2020)",
        _b_i1),
    IdentityRecord(
        "I2", "sum (3 H_{n-1}^2 + (4/n) H_{n-1}) / (n^2 C(2n,n)) = pi^4/360",
        "Z.-W. Sun (2015), conjectured; first proved by Chu (2021)",
        _b_i2),
    IdentityRecord(
        "I3", "sum (-1)^(n-1) (H_{2n} + 4 H_n) / (n^3 C(2n,n)) = 2 pi^4/75",
        "Z.-W. Sun (2015), conjectured; first proved by Chu (2021)",
        _b_i3),
    IdentityRecord(
        "I4", "sum H^(2)_{n-1} / (n^2 C(2n,n)) = (5/108) zeta(4)",
        "Akhilesh, Eq. (122); also Hessami Pilehrood (2012)",
        _b_i4),
    IdentityRecord(
        "I5", "2 sum H_{n-1}/(n^3 C) + 3 sum Z11_{n-1}/(n^2 C) = (1/18) zeta(4)",
        "Akhilesh, Eq. (122)",
        _b_i5),
    IdentityRecord(
        "I6", "sum (-1)^n H_n / (n^3 C(2n,n)) in golden-ratio polylogarithms",
        "Au (2021), Example 6.16",
        _b_i6),
    IdentityRecord(
        "I7", "sum (-1)^n / (n^4 C(2n,n)) in golden-ratio polylogarithms",
        "Au (2021), Example 6.18",
        _b_i7),
    IdentityRecord(
        "I8", "sum u^n H_{n-1}/(n^3 C(2n,n)) = polylog expansion in y(u)",
        "Davydychev & Kalmykov (2004), Eq. (3.12)",
        _b_i8, grid=tuple({"u": u} for u in U_GRID_DEFAULT)),
    IdentityRecord(
        "I9", "sum u^n H_{2n-1}/(n^3 C(2n,n)) = polylog expansion in y(u)",
        "Davydychev & Kalmykov (2004), Eq. (3.13)",
        _b_i9, grid=tuple({"u": u} for u in U_GRID_DEFAULT)),
    IdentityRecord(
        "I10", "sum u^n (H_{n-1} - H_{2n-1})/(n^3 C(2n,n)), difference form",
        "difference of Davydychev & Kalmykov (2004), Eqs. (3.12)-(3.13)",
        _b_i10, grid=tuple({"u": u} for u in U_GRID_DEFAULT)),
    IdentityRecord(
        "I11", "the difference form at u = -1, reduced to the golden point",
        "Davydychev & Kalmykov difference specialized at y = phi^2",
        _b_i11),
    IdentityRecord(
        "I12", "alternating (H_{2n} + 4 H_n) sum decomposed into three series",
        "index shuffle H_{2n} = H_{2n-1} + 1/(2n), H_n = H_{n-1} + 1/n",
        _b_i12),
    IdentityRecord(
        "I13", "alternating (H_{2n} + 4 H_n) sum in golden-ratio polylogarithms",
        "combination of Au (2021) Ex. 6.16/6.18 with the u = -1 difference form",
        _b_i13),
    IdentityRecord(
        "I14", "word (0, phi^-2, phi^-2) = zeta(3) + (pi^2/10) ln(phi) - Li_3(phi)",
        "Au (2020) iterated-integral evaluation at the golden point",
        _b_i14),
    IdentityRecord(
        "I15", "word (0, 0, phi^-2, phi^-2) in zeta, pi and Li_4 terms",
        "Au (2020) iterated-integral evaluation at the golden point",
        _b_i15),
    IdentityRecord(
        "I16", "Li_2(phi^2) = pi^2/15 - ln^2(phi)",
        "Lewin (1981), Eq. (1.20)",
        _b_i16),
    IdentityRecord(
        "I17", "Li_3(phi^2) = (4/5) zeta(3) - (2/3) ln^3(phi) + (2/15) pi^2 ln(phi)",
        "Lewin (1981), Eq. (6.13)",
        _b_i17),
    IdentityRecord(
        "I18", "Li_2(phi) = pi^2/10 - ln^2(phi)",
        "Lewin (1981), Eq. (1.20)",
        _b_i18),
    IdentityRecord(
        "I19", "depth reduction of Li_{2,1}(x) to classical polylogarithms",
        "Xu (2020), Thm. 2.1 with k = r = 2",
        _b_i19, grid=tuple({"x": x} for x in X_GRID_DEFAULT)),
    IdentityRecord(
        "I20", "reflection Li_{3,1}(x) + Li_{3,1}(1-x) in depth <= 2 terms",
        "Xu (2020), Thm. 2.1 with k = 3, r = 2",
        _b_i20, grid=tuple({"x": x} for x in X_GRID_DEFAULT),
        threshold=None),
    IdentityRecord(
        "I21", "Li_{3,1}(phi) + Li_{3,1}(phi^2) = pi^4/360 + golden-log terms",
        "golden-point reflection, Xu (2020) Thm. 2.1 at x = (sqrt(5)-1)/2",
        _b_i21),
    IdentityRecord(
        "I22", "two-variable Landen-type formula for Li_{2,1}(y,x), with x->1 limit",
        "Zhao (2001), Remark 3.18",
        _b_i22, grid=_I22_GRID + _I22_LIMIT_GRID, threshold=_thr_i22),
    IdentityRecord(
        "I23", "Nielsen S_{a,b}(z) series = log-kernel integral representation",
        "Chen iterated-integral representation, Zhao (2016) Ch. 2",
        _b_i23, grid=_I23_GRID, threshold=_thr_i23),
    IdentityRecord(
        "I24", "Euler even-zeta values zeta(2k) via Bernoulli numbers, k = 1..6",
        "Euler (1775)",
        _b_i24, grid=tuple({"k": k} for k in range(1, 7))),
    IdentityRecord(
        "I25", "squared partial harmonic sum = 2 Z11_{n-1} + H^(2)_{n-1}, exact",
        "Hoffman (2000), quasi-shuffle products",
        None, exact_check=_i25_exact_check),
)


def builtin_registry() -> tuple[IdentityRecord, ...]:
    """All identity records, ids unique, ordered I1..I25."""
    ids = [r.id for r in _REGISTRY]
    assert len(ids) == len(set(ids))
    return _REGISTRY


def lookup(record_id: str) -> IdentityRecord:
    for r in _REGISTRY:
        if r.id == record_id:
            return r
    raise KeyError(f"no identity with id {record_id!r}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _param_label(rec_id: str, params: dict) -> str:
    if not params:
        return rec_id
    bits = []
    for k in sorted(params):
        if k == "mode":
            bits.append(str(params[k]))
        else:
            v = params[k]
            bits.append(f"{k}={v}" if isinstance(v, (str, int)) else f"{k}={Fraction(v)}")
    return f"{rec_id}@" + ",".join(bits)


def default_threshold(digits: int) -> mpf:
    return mpf(10) ** (-(digits - 5))


def verify(rec: IdentityRecord, digits: int,
           params_override: Optional[Sequence[dict]] = None) -> list[VerificationReport]:
    """Evaluate LHS and RHS at every grid point; never raises on evaluation
    failure (reports FAIL with the diagnostic instead)."""
    if digits < 10:
        raise ValueError("verification needs at least 10 digits")
    if rec.exact_check is not None:
        t0 = time.perf_counter()
        ok, work = rec.exact_check()
        dt = time.perf_counter() - t0
        return [VerificationReport(
            rec.id, rec.id, digits,
            mpf(0) if ok else mp.inf, mpf(0), work, dt,
            "PASS" if ok else "FAIL",
            "exact rational identity" if ok else "exact identity violated")]
    reports = []
    for params in (params_override if params_override is not None else rec.grid):
        reports.append(_verify_point(rec, digits, params))
    return reports


def _verify_point(rec: IdentityRecord, digits: int, params: dict) -> VerificationReport:
    label = _param_label(rec.id, params)
    t0 = time.perf_counter()
    stats.reset_terms()
    try:
        lhs, rhs = rec.build(params)
        depth = max(expr_depth(lhs), expr_depth(rhs))
        ctx = make_context(digits, guard_bits=DEFAULT_GUARD_BITS + GUARD_BITS_PER_DEPTH * depth)
        lv = eval_expr(lhs, ctx)
        rv = eval_expr(rhs, ctx)
        with ctx.workprec():
            diff = abs(lv.value - rv.value)
            bound = lv.error_bound + rv.error_bound
            thr = rec.threshold(params, digits) if rec.threshold else None
            if thr is None:
                thr = default_threshold(digits)
            if diff <= thr:
                verdict = "PASS"
            elif diff <= bound:
                verdict = "UNCERTAIN"
            else:
                verdict = "FAIL"
        detail = ""
    except (MplcertError, ZeroDivisionError, ValueError, TypeError) as exc:
        diff, bound, verdict = mp.inf, mp.inf, "FAIL"
        detail = f"evaluation error: {exc}"
    dt = time.perf_counter() - t0
    return VerificationReport(rec.id, label, digits, diff, bound,
                              stats.get_terms(), dt, verdict, detail)


def verify_all(digits: int, ids: Optional[Sequence[str]] = None,
               u_grid: Optional[Sequence[Fraction]] = None) -> list[VerificationReport]:
    """Verify every (or the selected) registry records; sorted by id."""
    records = builtin_registry() if ids is None else tuple(lookup(i) for i in ids)
    out: list[VerificationReport] = []
    for rec in records:
        override = None
        if u_grid is not None and rec.grid and "u" in rec.grid[0]:
            override = tuple({"u": Fraction(u)} for u in u_grid)
        out.extend(verify(rec, digits, params_override=override))
    return out


def aggregate_verdict(reports: Sequence[VerificationReport]) -> str:
    if any(r.verdict == "FAIL" for r in reports):
        return "FAIL"
    if any(r.verdict == "UNCERTAIN" for r in reports):
        return "UNCERTAIN"
    return "PASS"


def report_record(report: VerificationReport, citation: str) -> dict:
    """The machine-readable record: exactly the external schema fields."""
    return {
        "id": report.label,
        "paper_ref": citation,
        "digits": report.requested_digits,
        "abs_difference": mp.nstr(report.abs_difference, 8),
        "certified_bound": mp.nstr(report.certified_bound, 8),
        "terms_used": report.terms_used,
        "elapsed_seconds": round(report.elapsed_seconds, 6),
        "verdict": report.verdict,
    }


def mutated_record(rec: IdentityRecord, lit_index: int = 0,
                   delta: Fraction = Fraction(1, 10 ** 6)) -> IdentityRecord:
    """Copy of a record with one RHS rational coefficient perturbed."""
    if rec.build is None:
        raise ValueError("exact records have no coefficients to perturb")

    def build(params):
        lhs, rhs = rec.build(params)
        return lhs, perturb_literal(rhs, lit_index, delta)

    return IdentityRecord(rec.id, rec.description + " (perturbed)",
                          rec.citation, build, rec.grid, rec.threshold)
