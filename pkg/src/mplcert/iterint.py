"""Iterated-integral words, their polylogarithm series, and a quadrature oracle.

A word (a1, ..., an) encodes the Chen iterated integral over the simplex
1 > t1 > ... > tn > 0 with kernel dt/t for the letter 0 and dt/(a - t)
for a nonzero letter a.  Expanding each 1/(a - t) geometrically gives the
nested polylogarithm series with arguments built from consecutive-letter
ratios:

    (0^(k1-1), b1, 0^(k2-1), b2, ...)  <->  Li_{k1,k2,...}(1/b1, b1/b2, ...)

With this kernel convention the golden-ratio anchors come out with
positive sign: (0, c, c) with c = 1/x evaluates to Li_{2,1}(x) directly.
The module also houses the log-weighted trilogarithm integral
int_0^{-y} Li_3(x)/(1+x) dx (the weight-4 harmonic polylogarithm with
index (-1,0,0,1)), evaluated through its nested-series form, plus an
adaptive Gauss-Legendre quadrature used purely as a cross-check oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from mpmath import mp, mpf

from .errors import DomainError, QuadratureError
from .precision import CertifiedReal, CertifiedLike, PrecisionContext
from .polylogs import Composition, MPLArgument, li, mpl

Letter = Union[int, Fraction, float, mpf, CertifiedReal]


@dataclass(frozen=True)
class IteratedWord:
    """Kernel-node sequence for an iterated integral from 0 to 1.

    Convergence needs a1 != 1 and an != 0; the supported real-series
    branch additionally requires |a| >= 1 for every nonzero letter.
    """

    letters: tuple[Letter, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("word must be non-empty")
        vals = self.letter_values()
        if self._is_exact_one(0):
            raise ValueError("first letter 1 gives a divergent integral")
        if vals[-1].value == 0:
            raise ValueError("last letter 0 gives a divergent integral")
        for v in vals:
            if v.value != 0 and v.abs_upper() < 1:
                raise ValueError("nonzero letters must have |a| >= 1 on the series branch")

    def _is_exact_one(self, i: int) -> bool:
        a = self.letters[i]
        return (isinstance(a, (int, Fraction)) and a == 1) or \
            (isinstance(a, CertifiedReal) and a.error_bound == 0 and a.value == 1)

    def letter_values(self) -> list[CertifiedReal]:
        return [CertifiedReal.of(a) for a in self.letters]

    def letter_exact(self) -> list[Optional[Fraction]]:
        out = []
        for a in self.letters:
            if isinstance(a, int):
                out.append(Fraction(a))
            elif isinstance(a, Fraction):
                out.append(a)
            else:
                out.append(None)
        return out

    @property
    def depth(self) -> int:
        return sum(1 for a in self.letter_values() if a.value != 0)

    @property
    def weight(self) -> int:
        return len(self.letters)


def word_from_mpl(idx, x: CertifiedLike) -> IteratedWord:
    """Word for the single-variable polylogarithm Li_{k1,...,kr}(x).

    Each depth unit contributes one 1/x letter preceded by k_i - 1 zeros.
    """
    idx = Composition.of(idx)
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if x == 0:
            raise ValueError("x = 0 has no iterated-integral word")
        inv: Letter = 1 / x
    else:
        xc = CertifiedReal.of(x)
        if xc.value == 0:
            raise ValueError("x = 0 has no iterated-integral word")
        inv = xc.reciprocal()
    letters: list[Letter] = []
    for k in idx.parts:
        letters.extend([0] * (k - 1))
        letters.append(inv)
    return IteratedWord(tuple(letters))


def mpl_from_word(word: IteratedWord) -> tuple[Composition, MPLArgument]:
    """Invert the word encoding: zeros count exponents, ratios give arguments."""
    vals = word.letter_values()
    exact = word.letter_exact()
    parts: list[int] = []
    args: list[Union[Fraction, CertifiedReal]] = []
    zeros = 0
    prev: Optional[tuple[CertifiedReal, Optional[Fraction]]] = None
    for v, q in zip(vals, exact):
        if v.value == 0 and v.error_bound == 0:
            zeros += 1
            continue
        parts.append(zeros + 1)
        zeros = 0
        if prev is None:
            args.append(1 / q if q is not None else v.reciprocal())
        else:
            pv, pq = prev
            args.append(pq / q if (q is not None and pq is not None) else pv * v.reciprocal())
        prev = (v, q)
    if zeros:
        raise ValueError("word ends in 0: divergent")
    return Composition(tuple(parts)), MPLArgument.of(tuple(args))


def eval_word(word: IteratedWord, ctx: PrecisionContext) -> CertifiedReal:
    """Value of the iterated integral via its polylogarithm series."""
    idx, arg = mpl_from_word(word)
    return mpl(idx, arg, ctx)


def h_m1001(y: CertifiedLike, ctx: PrecisionContext) -> CertifiedReal:
    """The integral int_0^{-y} Li_3(x)/(1+x) dx for 0 < y < 1.

    Substituting x -> -t and integrating the product series termwise turns
    it into the depth-2 polylogarithm -Li_{1,3}(y, -1), which carries a
    certified geometric tail (validated against the quadrature oracle in
    the test suite).
    """
    yc = CertifiedReal.of(y)
    if not (0 < yc.value < 1) or yc.abs_upper() >= 1:
        raise DomainError("supported range is 0 < y < 1")
    return -mpl((1, 3), MPLArgument.of((y, -1)), ctx)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Legendre quadrature (oracle-grade error estimates)
# ---------------------------------------------------------------------------

GL_ORDER = 32
QUAD_DEFAULT_TOL = mpf("1e-35")
QUAD_PANEL_CAP = 4096
QUAD_MAX_DEPTH = 220

_node_cache: dict[tuple[int, int], tuple[list[mpf], list[mpf]]] = {}


def _legendre_nodes(order: int) -> tuple[list[mpf], list[mpf]]:
    """Gauss-Legendre nodes/weights on (-1,1) by Newton refinement."""
    key = (order, mp.prec)
    if key in _node_cache:
        return _node_cache[key]
    nodes, weights = [], []
    for k in range(1, order + 1):
        x = mpf(math.cos(math.pi * (4 * k - 1) / (4 * order + 2)))
        for _ in range(60):
            p_prev, p = mpf(1), x
            for j in range(2, order + 1):
                p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
            dp = order * (x * p - p_prev) / (x * x - 1)
            dx = p / dp
            x -= dx
            if abs(dx) < mpf(2) ** (8 - mp.prec) * (abs(x) + 1):
                break
        p_prev, p = mpf(1), x
        for j in range(2, order + 1):
            p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
        dp = order * (x * p - p_prev) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    _node_cache[key] = (nodes, weights)
    return nodes, weights


def _gl_panel(f: Callable[[mpf], mpf], a: mpf, b: mpf) -> mpf:
    nodes, weights = _legendre_nodes(GL_ORDER)
    mid = (a + b) / 2
    half = (b - a) / 2
    total = mpf(0)
    for x, w in zip(nodes, weights):
        total += w * f(mid + half * x)
    return total * half


def quadrature(f: Callable[[mpf], mpf], a, b, ctx: PrecisionContext, *,
               tol: Optional[mpf] = None) -> CertifiedReal:
    """Adaptive Gauss-Legendre integral of f over [a, b].

    Bisects panels until the whole-vs-halves discrepancy falls below a
    fixed per-panel budget (tolerance / panel cap); endpoint-concentrated
    refinement handles logarithmic singularities.  The reported bound is
    the accumulated discrepancy estimate -- oracle-grade, not a certified
    enclosure, which is why this path is only used for cross-checks.
    """
    with ctx.workprec():
        tol = mpf(tol) if tol is not None else +QUAD_DEFAULT_TOL
        need_bits = int(-mp.log(tol, 2)) + 48
        wp = max(ctx.working_bits, need_bits)
    with mp.workprec(wp):
        a, b = mpf(a), mpf(b)
        if a == b:
            return CertifiedReal(mpf(0), mpf(0))
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        budget = tol / QUAD_PANEL_CAP
        panels = 0
        total = mpf(0)
        err = mpf(0)
        stack = [(a, b, _gl_panel(f, a, b), 0)]
        while stack:
            lo, hi, whole, depth = stack.pop()
            mid_pt = (lo + hi) / 2
            left = _gl_panel(f, lo, mid_pt)
            right = _gl_panel(f, mid_pt, hi)
            disc = abs(whole - (left + right))
            if disc <= budget:
                total += left + right
                err += disc
                panels += 1
                if panels > QUAD_PANEL_CAP:
                    raise QuadratureError("panel budget exhausted before tolerance")
                continue
            if depth >= QUAD_MAX_DEPTH:
                raise QuadratureError(
                    f"refinement stalled at depth {depth} (discrepancy {mp.nstr(disc, 5)})")
            stack.append((lo, mid_pt, left, depth + 1))
            stack.append((mid_pt, hi, right, depth + 1))
        return CertifiedReal(sign * total, err + tol)


def nielsen_integrand(a: int, b: int, z, ctx: PrecisionContext) -> Callable[[mpf], mpf]:
    """Integrand of the log-kernel integral representation of S_{a,b}(z).

    S_{a,b}(z) = (-1)^(a-1+b) / ((a-1)! b!) * int_0^1 ln^(a-1)(t) ln^b(1-zt) / t dt.
    """
    if a < 1 or b < 1:
        raise ValueError("Nielsen indices must satisfy a, b >= 1")
    zc = CertifiedReal.of(z)
    zv = zc.value
    sign = (-1) ** (a - 1 + b)
    fact = math.factorial(a - 1) * math.factorial(b)

    def f(t: mpf) -> mpf:
        # divide by the exact integer factorial at call-site precision
        return sign * mp.log(t) ** (a - 1) * mp.log(1 - zv * t) ** b / (t * fact)

    return f


def h_m1001_integrand(y, ctx: PrecisionContext) -> tuple[Callable[[mpf], mpf], mpf, mpf]:
    """(integrand, lower, upper) for the defining integral of h_m1001."""
    yc = CertifiedReal.of(y)

    def f(x: mpf) -> mpf:
        return li(3, CertifiedReal(x, mpf(0)), ctx).value / (1 + x)

    return f, mpf(0), -yc.value
