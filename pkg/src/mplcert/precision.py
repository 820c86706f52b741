"""Arbitrary-precision arithmetic core: precision contexts, certified reals,
exact rationals, Bernoulli numbers, integer zeta values and the golden ratio.

All numerical results are carried as :class:`CertifiedReal` pairs
``(value, error_bound)`` with conservative absolute-error propagation.
mpmath supplies the underlying multiprecision floats; ``fractions.Fraction``
supplies exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath import mp, mpf

from .errors import CapacityError, DivergenceError
from . import stats

# Exact rationals are plain stdlib fractions: always normalized, denominator > 0.
ExactRational = Fraction

Rationalish = Union[int, Fraction]

DEFAULT_GUARD_BITS = 32
GUARD_BITS_PER_DEPTH = 8
MAX_TARGET_DIGITS = 10**6

LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision plus the certified error budget for one evaluation.

    ``working_bits`` is the binary precision of the mpmath arithmetic,
    ``epsilon`` the absolute truncation threshold every series evaluator
    must certify against.
    """

    target_digits: int
    working_bits: int
    guard_bits: int
    epsilon: mpf

    def workprec(self):
        """Context manager setting mpmath precision to ``working_bits``."""
        return mp.workprec(self.working_bits)


def make_context(target_digits: int, guard_bits: int = DEFAULT_GUARD_BITS) -> PrecisionContext:
    """Build a precision context for ``target_digits`` requested decimal digits."""
    if target_digits < 1:
        raise CapacityError("target_digits must be >= 1")
    if target_digits > MAX_TARGET_DIGITS:
        raise CapacityError(f"target_digits {target_digits} exceeds cap {MAX_TARGET_DIGITS}")
    if guard_bits < 0:
        raise CapacityError("guard_bits must be >= 0")
    working_bits = math.ceil(target_digits * LOG2_10) + guard_bits
    with mp.workprec(working_bits):
        epsilon = mpf(10) ** (-(target_digits + 2))
    return PrecisionContext(target_digits, working_bits, guard_bits, epsilon)


def _slack(v: mpf) -> mpf:
    # A few ulps at ambient precision; covers nearest-rounding of the op
    # and of the bound arithmetic itself.
    return abs(v) * mpf(2) ** (3 - mp.prec)


def _mantissa_bits(v) -> int:
    if isinstance(v, mpf):
        return v._mpf_[3]
    return 0


def _op_prec(*vals) -> int:
    # mpmath rounds every operation (negation included) to the ambient
    # precision, so certified arithmetic must never run below the
    # precision its operands actually carry.
    need = mp.prec
    for v in vals:
        b = _mantissa_bits(v) + 8
        if b > need:
            need = b
    return need


@dataclass(frozen=True)
class CertifiedReal:
    """A high-precision real together with an absolute error bound.

    Arithmetic propagates bounds conservatively at the ambient mpmath
    precision (sum of bounds for +/-, the standard product rule for *),
    plus a small rounding slack per operation.
    """

    value: mpf
    error_bound: mpf

    @staticmethod
    def exact(q: Rationalish) -> "CertifiedReal":
        """Embed an exact integer or rational; bound covers the conversion."""
        if isinstance(q, int):
            return CertifiedReal(mpf(q), mpf(0))
        v = mpf(q.numerator) / mpf(q.denominator)
        return CertifiedReal(v, _slack(v))

    @staticmethod
    def of(x: "CertifiedLike") -> "CertifiedReal":
        if isinstance(x, CertifiedReal):
            return x
        if isinstance(x, (int, Fraction)):
            return CertifiedReal.exact(x)
        v = mpf(x)
        return CertifiedReal(v, mpf(0))

    def abs_upper(self) -> mpf:
        """Upper bound on |true value|."""
        with mp.workprec(_op_prec(self.value, self.error_bound)):
            return abs(self.value) + self.error_bound

    def abs_lower(self) -> mpf:
        """Lower bound on |true value| (clamped at 0)."""
        with mp.workprec(_op_prec(self.value, self.error_bound)):
            lo = abs(self.value) - self.error_bound
            return lo if lo > 0 else mpf(0)

    def __neg__(self) -> "CertifiedReal":
        with mp.workprec(_op_prec(self.value)):
            return CertifiedReal(-self.value, self.error_bound)

    def __add__(self, other) -> "CertifiedReal":
        o = CertifiedReal.of(other)
        with mp.workprec(_op_prec(self.value, o.value)):
            v = self.value + o.value
            return CertifiedReal(v, self.error_bound + o.error_bound + _slack(v))

    __radd__ = __add__

    def __sub__(self, other) -> "CertifiedReal":
        return self + (-CertifiedReal.of(other))

    def __rsub__(self, other) -> "CertifiedReal":
        return CertifiedReal.of(other) + (-self)

    def __mul__(self, other) -> "CertifiedReal":
        o = CertifiedReal.of(other)
        with mp.workprec(_op_prec(self.value, o.value)):
            v = self.value * o.value
            b = (abs(self.value) * o.error_bound
                 + abs(o.value) * self.error_bound
                 + self.error_bound * o.error_bound
                 + _slack(v))
            return CertifiedReal(v, b)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CertifiedReal":
        # Division by exact scalars only; general division is never needed
        # in the identity expressions.
        if not isinstance(other, (int, Fraction)):
            raise TypeError("CertifiedReal division supports exact scalars only")
        if other == 0:
            raise ZeroDivisionError
        q = Fraction(1, 1) / Fraction(other)
        with mp.workprec(_op_prec(self.value)):
            return self * CertifiedReal.exact(q)

    def __pow__(self, n: int) -> "CertifiedReal":
        if not isinstance(n, int) or n < 0:
            raise TypeError("only non-negative integer powers are supported")
        out = CertifiedReal(mpf(1), mpf(0))
        for _ in range(n):
            out = out * self
        return out

    def reciprocal(self) -> "CertifiedReal":
        """1/x for an interval certified away from zero."""
        with mp.workprec(_op_prec(self.value)):
            lo = self.abs_lower()
            if lo == 0:
                raise ZeroDivisionError("interval not certified away from zero")
            v = 1 / self.value
            b = self.error_bound / (abs(self.value) * lo) + _slack(v)
            return CertifiedReal(v, b)

    def ln(self) -> "CertifiedReal":
        """Natural log with mean-value-theorem error propagation."""
        with mp.workprec(_op_prec(self.value)):
            lo = self.value - self.error_bound
            if lo <= 0:
                raise DivergenceError("ln requires a certified-positive argument")
            v = mp.log(self.value)
            b = self.error_bound / lo + _slack(v)
            return CertifiedReal(v, b)

    def agrees_with(self, other: "CertifiedReal") -> bool:
        with mp.workprec(_op_prec(self.value, other.value)):
            return abs(self.value - other.value) <= self.error_bound + other.error_bound

    def __repr__(self) -> str:
        return f"CertifiedReal({mp.nstr(self.value, 20)}, +/-{mp.nstr(self.error_bound, 3)})"


CertifiedLike = Union[CertifiedReal, int, Fraction, float, mpf]


def zero() -> CertifiedReal:
    return CertifiedReal(mpf(0), mpf(0))


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact rationals, cached)
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n from the generating function t/(e^t - 1).

    Uses the standard recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0 with the
    convention B_1 = -1/2.
    """
    if n < 0:
        raise ValueError("Bernoulli index must be >= 0")
    while len(_BERNOULLI_CACHE) <= n:
        m = len(_BERNOULLI_CACHE)
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * _BERNOULLI_CACHE[k]
        _BERNOULLI_CACHE.append(-acc / (m + 1))
    return _BERNOULLI_CACHE[n]


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------


def pi_const(ctx: PrecisionContext) -> CertifiedReal:
    """pi at working precision, error bound a couple of ulp."""
    with ctx.workprec():
        v = +mp.pi
        return CertifiedReal(v, abs(v) * mpf(2) ** (2 - mp.prec))


def golden_ratio(ctx: PrecisionContext) -> CertifiedReal:
    """The golden-section constant (sqrt(5)-1)/2, about 0.618."""
    with ctx.workprec():
        v = (mp.sqrt(5) - 1) / 2
        return CertifiedReal(v, abs(v) * mpf(2) ** (4 - mp.prec))


def golden_ratio_sq(ctx: PrecisionContext) -> CertifiedReal:
    """Square of the golden-section constant, computed as (3 - sqrt(5))/2."""
    with ctx.workprec():
        v = (3 - mp.sqrt(5)) / 2
        return CertifiedReal(v, abs(v) * mpf(2) ** (4 - mp.prec))


def ln_golden_ratio(ctx: PrecisionContext) -> CertifiedReal:
    """ln of the golden-section constant (a negative real)."""
    with ctx.workprec():
        return golden_ratio(ctx).ln()


# ---------------------------------------------------------------------------
# Integer zeta values
# ---------------------------------------------------------------------------


def zeta_even(k: int, ctx: PrecisionContext) -> CertifiedReal:
    """zeta(2k) by Euler's formula with exact Bernoulli coefficients.

    The (2*pi*i)^(2k) factor is evaluated as (-1)^k (2*pi)^(2k), so the
    result is real; the error bound is inherited from pi.
    """
    if k < 1:
        raise ValueError("zeta_even requires k >= 1")
    coef = Fraction((-1) ** (k + 1) * 2 ** (2 * k), 2 * math.factorial(2 * k)) * bernoulli(2 * k)
    with ctx.workprec():
        return pi_const(ctx) ** (2 * k) * CertifiedReal.exact(coef)


def _pochhammer_int(s: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= s + i
    return out


def zeta_int(s: int, ctx: PrecisionContext) -> CertifiedReal:
    """zeta(s) for integer s >= 2 by Euler-Maclaurin tail correction.

    Sums N direct terms and corrects the tail with Bernoulli terms.  The
    remainder after truncating the correction series is bounded by the
    first omitted term (valid because x^(-s) is completely monotone);
    we double that bound for margin.  N is doubled until the asymptotic
    correction series reaches the epsilon target before its terms start
    growing.
    """
    if not isinstance(s, int):
        raise TypeError("zeta_int takes an integer exponent")
    if s <= 1:
        raise DivergenceError("zeta(s) diverges for s <= 1")
    with ctx.workprec():
        eps = ctx.epsilon / 4
        n_direct = max(8, ctx.target_digits // 2 + 4)
        for _ in range(40):
            value, bound, ok = _zeta_em_attempt(s, n_direct, eps)
            if ok:
                stats.add_terms(n_direct)
                return CertifiedReal(value, bound)
            n_direct *= 2
    raise CapacityError("Euler-Maclaurin zeta evaluation failed to converge")


def _zeta_em_attempt(s: int, n_direct: int, eps: mpf):
    partial = mpf(0)
    for n in range(1, n_direct):
        partial += mpf(n) ** (-s)
    nf = mpf(n_direct)
    total = partial + nf ** (1 - s) / (s - 1) + nf ** (-s) / 2

    prev_mag = mp.inf
    j = 1
    while True:
        coef = bernoulli(2 * j) / math.factorial(2 * j)
        term = (mpf(coef.numerator) / coef.denominator
                * _pochhammer_int(s, 2 * j - 1)
                * nf ** (-s - 2 * j + 1))
        mag = abs(term)
        if mag <= eps:
            # First omitted term bounds the remainder; doubled for margin.
            rounding = (n_direct + 2 * j + 8) * abs(total) * mpf(2) ** (1 - mp.prec)
            return total, 2 * mag + rounding, True
        if mag >= prev_mag:
            return total, mpf(0), False  # asymptotic regime hit; need larger N
        total += term
        prev_mag = mag
        j += 1
        if j > 4 * mp.prec:
            return total, mpf(0), False
