"""Series evaluation of multiple polylogarithms with certified tail bounds.

Evaluates the nested sums

    Li_{k1,...,kr}(x1,...,xr) = sum_{n1>n2>...>nr>0} x1^n1 ... xr^nr / (n1^k1 ... nr^kr)

by inner-to-outer prefix accumulation, O(depth * N) per outer cutoff N.
Two certified truncation regimes:

* geometric -- every prefix modulus |x1...xj| is < 1; the tail after N is
  bounded by rho^(N+1) (N+1)^p / ((r-1)! (1 - rho~)) with rho the largest
  prefix modulus, p = max(0, r-1-k1) and rho~ = rho (1+1/(N+1))^p.  This
  follows from |x1|^n1...|xr|^nr = prod_j P_j^(n_j - n_{j+1}) <= rho^n1 and
  the count of inner index tuples being at most C(n1-1, r-1).

* polynomial -- some prefix modulus equals 1 exactly (zeta-like tails).
  Dropping the modulus-1 powers leaves sum_n (1+ln n)^(r-1) n^(-k1)/(r-1)!,
  bounded by integral comparison with a closed-form incomplete-gamma
  integral.  Convergence is slow; this path is honest but only practical
  at modest precision, and depth-1 arguments are routed to the accelerated
  integer-zeta evaluator instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath import mp, mpf

from .errors import AdmissibilityError, CapacityError, DivergenceError, DomainError
from .precision import CertifiedReal, CertifiedLike, PrecisionContext, zero, zeta_int
from . import stats

GEOMETRIC_MAX_TERMS = 50_000_000
POLYNOMIAL_MAX_TERMS = 4_000_000


@dataclass(frozen=True)
class Composition:
    """An admissible exponent index (k1,...,kr), every part >= 1."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("composition must be non-empty")
        if any((not isinstance(k, int)) or k < 1 for k in self.parts):
            raise ValueError(f"composition parts must be positive integers: {self.parts}")

    @classmethod
    def of(cls, parts: Union["Composition", int, Sequence[int]]) -> "Composition":
        if isinstance(parts, Composition):
            return parts
        if isinstance(parts, int):
            return cls((parts,))
        return cls(tuple(parts))

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)


@dataclass(frozen=True)
class MPLArgument:
    """Argument tuple (x1,...,xr) paired with a composition of equal depth.

    Keeps the exact rational value alongside the certified float whenever
    the caller supplied one, so unit-modulus prefixes can be recognized
    exactly rather than within rounding error.
    """

    args: tuple[CertifiedReal, ...]
    exact: tuple[Optional[Fraction], ...]

    @classmethod
    def of(cls, values: Union["MPLArgument", CertifiedLike, Sequence]) -> "MPLArgument":
        if isinstance(values, MPLArgument):
            return values
        if isinstance(values, (int, float, Fraction, CertifiedReal, mpf)):
            values = (values,)
        certs, exacts = [], []
        for v in values:
            if isinstance(v, int):
                exacts.append(Fraction(v))
            elif isinstance(v, Fraction):
                exacts.append(v)
            else:
                exacts.append(None)
            certs.append(CertifiedReal.of(v))
        return cls(tuple(certs), tuple(exacts))

    @property
    def depth(self) -> int:
        return len(self.args)

    def refreshed(self) -> "MPLArgument":
        """Re-convert exact entries at the ambient precision.

        Arguments are often built outside any workprec block; exact
        rationals must be re-embedded once the evaluation precision is
        active, or their conversion slack poisons the certified bound.
        """
        certs = tuple(CertifiedReal.exact(q) if q is not None else c
                      for c, q in zip(self.args, self.exact))
        return MPLArgument(certs, self.exact)


def _prefix_moduli(arg: MPLArgument) -> list[tuple[mpf, Optional[Fraction]]]:
    """Upper bounds on |x1...xj| for each prefix, with exact values when known."""
    out = []
    upper = mpf(1)
    exact: Optional[Fraction] = Fraction(1)
    for c, q in zip(arg.args, arg.exact):
        upper = upper * c.abs_upper()
        exact = abs(q) * exact if (q is not None and exact is not None) else None
        out.append((upper, exact))
    return out


def _geometric_tail(rho: mpf, n: int, r: int, k1: int) -> mpf:
    """Certified bound on the tail after outer cutoff n, all prefix moduli <= rho < 1."""
    p = r - 1 - k1
    lead = rho ** (n + 1) * mpf(n + 1) ** p / math.factorial(r - 1)
    if p <= 0:
        return lead / (1 - rho)
    rho_t = rho * (1 + mpf(1) / (n + 1)) ** p
    if rho_t >= 1:
        return mp.inf
    return lead / (1 - rho_t)


def _polynomial_tail(n: int, r: int, k1: int) -> mpf:
    """Certified tail bound when some prefix modulus equals 1 (k1 >= 2).

    Integral comparison for sum_{m>n} (1+ln m)^(r-1) m^(-k1) / (r-1)!;
    the integral has the closed form
    p! M^(1-k) sum_{j<=p} ((k-1)(1+ln M))^j / j! / (k-1)^(p+1).
    """
    p = r - 1
    k = k1
    m = mpf(n + 1)
    a = 1 + mp.log(m)
    lam = k - 1
    s = mpf(0)
    for j in range(p + 1):
        s += (lam * a) ** j / math.factorial(j)
    integral = math.factorial(p) * m ** (-lam) * s / mpf(lam) ** (p + 1)
    first = a ** p / m ** k
    return (first + integral) / math.factorial(p)


def mpl(idx, arg, ctx: PrecisionContext, *, cutoff: Optional[int] = None,
        max_terms: Optional[int] = None) -> CertifiedReal:
    """Multi-variable multiple polylogarithm with certified truncation error.

    ``cutoff`` forces summation of exactly that many outer terms and returns
    the partial sum with the certified tail bound at that cutoff (used by
    the tail-soundness tests).
    """
    idx = Composition.of(idx)
    arg = MPLArgument.of(arg)
    r = idx.depth
    if arg.depth != r:
        raise ValueError(f"argument depth {arg.depth} != composition depth {r}")
    k1 = idx.parts[0]

    if any(c.value == 0 and c.error_bound == 0 for c in arg.args):
        return zero()

    with ctx.workprec():
        arg = arg.refreshed()
        prefixes = _prefix_moduli(arg)
        unit = [q is not None and q == 1 for _, q in prefixes]
        for j, (upper, q) in enumerate(prefixes):
            if unit[j]:
                continue
            if (q is not None and abs(q) > 1) or (q is None and upper >= 1):
                raise DivergenceError(
                    f"prefix modulus |x1...x{j + 1}| not certified < 1 (bound {mp.nstr(upper, 8)})")
        if any(unit):
            if k1 == 1:
                raise AdmissibilityError("k1 = 1 with a unit-modulus prefix diverges")
            return _mpl_polynomial(idx, arg, ctx, cutoff, max_terms)
        rho = max(upper for upper, _ in prefixes)
        return _mpl_geometric(idx, arg, ctx, rho, cutoff, max_terms)


def _mpl_accumulate(idx: Composition, arg: MPLArgument, n_terms: int):
    """Run the prefix-accumulation recurrence for n_terms outer indices.

    Returns (value accumulator a1, absolute-value accumulator b1).  Updating
    j in increasing order uses the depth-(j+1) accumulator at outer index
    n-1, which is exactly the n_j > n_{j+1} constraint.
    """
    r = idx.depth
    ks = idx.parts
    xs = [c.value for c in arg.args]
    acc = [mpf(0)] * (r + 1)
    acc[r] = mpf(1)
    aacc = [mpf(0)] * (r + 1)
    aacc[r] = mpf(1)
    pows = [mpf(1)] * r
    apows = [mpf(1)] * r
    for n in range(1, n_terms + 1):
        for i in range(r):
            pows[i] *= xs[i]
            apows[i] = abs(pows[i])
        nk = [mpf(n) ** ks[i] for i in range(r)]
        for j in range(r):
            acc[j] += pows[j] / nk[j] * acc[j + 1]
            aacc[j] += apows[j] / nk[j] * aacc[j + 1]
    stats.add_terms(n_terms)
    return acc[0], aacc[0]


class _StreamingAccumulator:
    """Incremental version of the prefix recurrence with a stop probe."""

    def __init__(self, idx: Composition, arg: MPLArgument):
        self.r = idx.depth
        self.ks = idx.parts
        self.xs = [c.value for c in arg.args]
        self.acc = [mpf(0)] * (self.r + 1)
        self.acc[self.r] = mpf(1)
        self.aacc = [mpf(0)] * (self.r + 1)
        self.aacc[self.r] = mpf(1)
        self.pows = [mpf(1)] * self.r
        self.n = 0

    def step(self) -> None:
        self.n += 1
        n = self.n
        for i in range(self.r):
            self.pows[i] *= self.xs[i]
        for j in range(self.r):
            t = self.pows[j] / mpf(n) ** self.ks[j]
            self.acc[j] += t * self.acc[j + 1]
            self.aacc[j] += abs(t) * self.aacc[j + 1]


def _final_bound(arg: MPLArgument, n: int, r: int, abs_total: mpf, tail: mpf) -> mpf:
    rounding = 8 * r * n * abs_total * mpf(2) ** (1 - mp.prec)
    rel_in = mpf(0)
    for c in arg.args:
        if c.error_bound > 0:
            lo = c.abs_lower()
            if lo == 0:
                raise DivergenceError("argument interval contains 0 with nonzero bound")
            rel_in += c.error_bound / lo
    input_err = 2 * n * rel_in * abs_total
    return tail + rounding + input_err


def _mpl_geometric(idx, arg, ctx, rho, cutoff, max_terms) -> CertifiedReal:
    r, k1 = idx.depth, idx.parts[0]
    eps = ctx.epsilon / 2
    limit = max_terms or GEOMETRIC_MAX_TERMS
    acc = _StreamingAccumulator(idx, arg)
    if cutoff is not None:
        for _ in range(cutoff):
            acc.step()
        stats.add_terms(cutoff)
        tail = _geometric_tail(rho, cutoff, r, k1)
        if not mp.isfinite(tail):
            raise ValueError(f"cutoff {cutoff} too small to certify a tail bound")
        return CertifiedReal(acc.acc[0], _final_bound(arg, cutoff, r, acc.aacc[0], tail))
    check_every = 8
    while True:
        acc.step()
        if acc.n % check_every == 0 or acc.n <= 4:
            tail = _geometric_tail(rho, acc.n, r, k1)
            if tail <= eps:
                stats.add_terms(acc.n)
                return CertifiedReal(acc.acc[0],
                                     _final_bound(arg, acc.n, r, acc.aacc[0], tail))
        if acc.n >= limit:
            raise CapacityError(
                f"geometric MPL evaluation exceeded {limit} terms (rho={mp.nstr(rho, 8)})")


def _mpl_polynomial(idx, arg, ctx, cutoff, max_terms) -> CertifiedReal:
    r, k1 = idx.depth, idx.parts[0]
    eps = ctx.epsilon / 2
    limit = max_terms or POLYNOMIAL_MAX_TERMS
    if cutoff is not None:
        n = cutoff
    else:
        n = 64
        while _polynomial_tail(n, r, k1) > eps:
            n *= 2
            if n > limit:
                raise CapacityError(
                    f"unit-modulus MPL needs more than {limit} terms for epsilon "
                    f"{mp.nstr(ctx.epsilon, 3)}; request fewer digits")
    value, abs_total = _mpl_accumulate(idx, arg, n)
    tail = _polynomial_tail(n, r, k1)
    return CertifiedReal(value, _final_bound(arg, n, r, abs_total, tail))


def li(k: int, x: CertifiedLike, ctx: PrecisionContext) -> CertifiedReal:
    """Classical polylogarithm Li_k(x) = sum_{n>=1} x^n / n^k.

    Direct series for |x| < 1 with the geometric tail bound
    |x|^(N+1) / ((N+1)^k (1-|x|)); unit-modulus arguments (k >= 2) are
    routed through the integer-zeta evaluator via the alternating-series
    relation Li_k(-1) = (2^(1-k) - 1) zeta(k).
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("polylogarithm order must be a positive integer")
    xq = x if isinstance(x, Fraction) else (Fraction(x) if isinstance(x, int) else None)
    if (xq == 0) or (xq is None and CertifiedReal.of(x).value == 0):
        return zero()
    with ctx.workprec():
        xc = CertifiedReal.exact(xq) if xq is not None else CertifiedReal.of(x)
        if xq is not None and abs(xq) == 1:
            if k == 1:
                raise DivergenceError("Li_1 diverges on the unit boundary")
            z = zeta_int(k, ctx)
            return z if xq == 1 else z * CertifiedReal.exact(Fraction(1, 2 ** (k - 1)) - 1)
        ax = xc.abs_upper()
        if ax >= 1:
            raise DivergenceError(f"|x| >= 1 not certified convergent (bound {mp.nstr(ax, 8)})")
        eps = ctx.epsilon / 2
        total = mpf(0)
        abs_total = mpf(0)
        p = mpf(1)
        n = 0
        while True:
            n += 1
            p *= xc.value
            t = p / mpf(n) ** k
            total += t
            abs_total += abs(t)
            tail = ax ** (n + 1) / (mpf(n + 1) ** k * (1 - ax))
            if tail <= eps:
                break
            if n >= GEOMETRIC_MAX_TERMS:
                raise CapacityError("polylogarithm series exceeded term limit")
        stats.add_terms(n)
        rounding = 8 * n * abs_total * mpf(2) ** (1 - mp.prec)
        input_err = mpf(0)
        if xc.error_bound > 0:
            lo = xc.abs_lower()
            if lo == 0:
                raise DivergenceError("argument interval contains 0 with nonzero bound")
            input_err = 2 * n * (xc.error_bound / lo) * abs_total
        return CertifiedReal(total, tail + rounding + input_err)


def mpl_single(idx, x: CertifiedLike, ctx: PrecisionContext, **kw) -> CertifiedReal:
    """Single-variable MPL: Li_{k1,...,kr}(x) = Li_{k1,...,kr}(x, 1, ..., 1)."""
    idx = Composition.of(idx)
    values = (x,) + (1,) * (idx.depth - 1)
    return mpl(idx, values, ctx, **kw)


def mzv(idx, ctx: PrecisionContext, *, max_terms: Optional[int] = None) -> CertifiedReal:
    """Multiple zeta value Li_{k1,...,kr}(1,...,1), admissible only for k1 >= 2.

    Depth 1 delegates to the Euler-Maclaurin zeta evaluator; deeper values
    use the direct polynomial-tail path, which is certified but slow, so
    high-precision requests beyond the term cap raise a capacity error.
    """
    idx = Composition.of(idx)
    if idx.parts[0] == 1:
        raise AdmissibilityError("multiple zeta values require k1 >= 2")
    if idx.depth == 1:
        return zeta_int(idx.parts[0], ctx)
    return mpl(idx, (1,) * idx.depth, ctx, max_terms=max_terms)


def nielsen(a: int, b: int, z: CertifiedLike, ctx: PrecisionContext) -> CertifiedReal:
    """Nielsen generalized polylogarithm S_{a,b}(z) = Li_{a+1,1,...,1}(z).

    Supported on the real branch 0 <= z <= 1 (z = 1 is the zeta tip).
    """
    if a < 1 or b < 1:
        raise ValueError("Nielsen indices must satisfy a, b >= 1")
    zc = CertifiedReal.of(z)
    zq = z if isinstance(z, Fraction) else (Fraction(z) if isinstance(z, int) else None)
    if zc.value < 0 or (zq is not None and zq > 1) or (zq is None and zc.value > 1):
        raise DomainError(
            f"Nielsen polylogarithm supports 0 <= z <= 1, got {mp.nstr(zc.value, 8)}")
    idx = Composition((a + 1,) + (1,) * (b - 1))
    if zq == 1:
        return mzv(idx, ctx)
    return mpl_single(idx, z, ctx)
