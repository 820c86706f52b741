"""Central-binomial (Apery-like) series with harmonic-number weights.

Evaluates sums of the form

    sum_{n>=1} u^n / (n^s C(2n,n)) * w(n)

where w(n) is a product of harmonic-type factors (harmonic numbers at n-1,
n, 2n-1, 2n, the second-order harmonic number, the nested double partial
sum, or 1/n), or an integer/rational linear combination of such products.
The term ratio tends to u/4, so |u| < 4 converges geometrically; each
product component gets a certified geometric tail from an explicit
sup-ratio bound.

Also houses the conformal-style substitution u -> y mapping negative
series bases into (0,1) (Davydychev & Kalmykov 2004, Eqs. (3.12)-(3.13))
and the closed polylogarithmic right-hand sides of those two expansions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath import mp, mpf

from .errors import CapacityError, DivergenceError, DomainError
from .precision import CertifiedReal, CertifiedLike, PrecisionContext, zero, zeta_int, zeta_even
from .polylogs import li, mpl_single
from . import stats

HARMONIC_TABLE_CAP = 200_000
APERY_MAX_TERMS = 1_000_000


class WeightFactor(enum.Enum):
    """Multiplicative factors available in a harmonic weight."""

    ONE = "1"
    H_N = "H(n)"
    H_N_MINUS_1 = "H(n-1)"
    H_2N = "H(2n)"
    H_2N_MINUS_1 = "H(2n-1)"
    H2_N_MINUS_1 = "H2(n-1)"      # second-order harmonic number at n-1
    Z11_N_MINUS_1 = "Z11(n-1)"    # nested double partial sum at bound n-1
    INV_N = "1/n"


@dataclass(frozen=True)
class HarmonicWeight:
    """A product (multiset) of weight factors; ONE absorbs into products."""

    factors: tuple[WeightFactor, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("weight must contain at least one factor")
        if len(self.factors) > 1 and WeightFactor.ONE in self.factors:
            object.__setattr__(
                self, "factors",
                tuple(f for f in self.factors if f is not WeightFactor.ONE) or (WeightFactor.ONE,))
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=lambda f: f.value)))

    @classmethod
    def of(cls, spec: Union["HarmonicWeight", WeightFactor, Sequence[WeightFactor]]) -> "HarmonicWeight":
        if isinstance(spec, HarmonicWeight):
            return spec
        if isinstance(spec, WeightFactor):
            return cls((spec,))
        return cls(tuple(spec))

    def __str__(self):
        return "*".join(f.value for f in self.factors)


WeightCombo = tuple[tuple[Fraction, HarmonicWeight], ...]


def as_weight_combo(spec) -> WeightCombo:
    """Normalize a weight spec into ((coefficient, product), ...) form."""
    if isinstance(spec, (WeightFactor, HarmonicWeight)):
        return ((Fraction(1), HarmonicWeight.of(spec)),)
    if isinstance(spec, Sequence) and spec and isinstance(spec[0], WeightFactor):
        return ((Fraction(1), HarmonicWeight.of(spec)),)
    out = []
    for coeff, w in spec:
        out.append((Fraction(coeff), HarmonicWeight.of(w)))
    if not out:
        raise ValueError("empty weight combination")
    return tuple(out)


@dataclass(frozen=True)
class AperySumSpec:
    """One central-binomial series: base u, power s and a harmonic weight.

    u = -1 encodes alternating (-1)^n sums; callers wanting (-1)^(n-1)
    negate the result.
    """

    u: Union[Fraction, mpf, float]
    s: int
    weight: WeightCombo

    def __post_init__(self):
        if self.s < 2:
            raise ValueError("power s must be >= 2")
        object.__setattr__(self, "weight", as_weight_combo(self.weight))


@dataclass(frozen=True)
class HarmonicTables:
    """Exact-rational prefix tables H_n, H^(2)_n and the double sum, n <= N."""

    H: tuple[Fraction, ...]
    H2: tuple[Fraction, ...]
    Z11: tuple[Fraction, ...]


def harmonic_tables(n_max: int) -> HarmonicTables:
    """Exact tables up to n_max via the three standard recurrences."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > HARMONIC_TABLE_CAP:
        raise CapacityError(f"harmonic tables capped at {HARMONIC_TABLE_CAP}")
    h = [Fraction(0)] * (n_max + 1)
    h2 = [Fraction(0)] * (n_max + 1)
    z11 = [Fraction(0)] * (n_max + 1)
    for n in range(1, n_max + 1):
        h[n] = h[n - 1] + Fraction(1, n)
        h2[n] = h2[n - 1] + Fraction(1, n * n)
        z11[n] = z11[n - 1] + h[n - 1] / n
    return HarmonicTables(tuple(h), tuple(h2), tuple(z11))


def central_binomial(n: int) -> int:
    """Exact C(2n, n) by the multiplicative recurrence."""
    if n < 0:
        raise ValueError("central binomial needs n >= 0")
    out = 1
    for k in range(n):
        out = out * 2 * (2 * k + 1) // (k + 1)
    return out


class _HarmonicState:
    """Running harmonic quantities, updated once per outer index n."""

    __slots__ = ("h_prev", "h", "h2_prev", "z11_prev", "h_2n", "h_2n_m1", "n")

    def __init__(self):
        self.h_prev = mpf(0)      # H_{n-1}
        self.h = mpf(0)           # H_n
        self.h2_prev = mpf(0)     # H^(2)_{n-1}
        self.z11_prev = mpf(0)    # double partial sum at bound n-1
        self.h_2n = mpf(0)        # H_{2n}
        self.h_2n_m1 = mpf(0)     # H_{2n-1}
        self.n = 0

    def step(self) -> None:
        # The n-1 indexed quantities must consume H_{n-2} / old values
        # before the n-indexed ones move forward.
        n = self.n + 1
        if n >= 2:
            self.z11_prev += self.h_prev / (n - 1)
            self.h2_prev += mpf(1) / (n - 1) ** 2
        self.h_prev = self.h
        self.h += mpf(1) / n
        self.h_2n_m1 = self.h_2n + mpf(1) / (2 * n - 1)
        self.h_2n = self.h_2n_m1 + mpf(1) / (2 * n)
        self.n = n

    def factor_value(self, f: WeightFactor) -> mpf:
        if f is WeightFactor.ONE:
            return mpf(1)
        if f is WeightFactor.H_N:
            return self.h
        if f is WeightFactor.H_N_MINUS_1:
            return self.h_prev
        if f is WeightFactor.H_2N:
            return self.h_2n
        if f is WeightFactor.H_2N_MINUS_1:
            return self.h_2n_m1
        if f is WeightFactor.H2_N_MINUS_1:
            return self.h2_prev
        if f is WeightFactor.Z11_N_MINUS_1:
            return self.z11_prev
        if f is WeightFactor.INV_N:
            return mpf(1) / self.n
        raise ValueError(f"unknown weight factor {f}")


def _u_as_parts(u) -> tuple[mpf, mpf]:
    """(value, |u| upper bound) for the series base."""
    if isinstance(u, int):
        u = Fraction(u)
    if isinstance(u, Fraction):
        v = mpf(u.numerator) / u.denominator
        return v, abs(v) * (1 + mpf(2) ** (2 - mp.prec))
    v = mpf(u)
    return v, abs(v) * (1 + mpf(2) ** (2 - mp.prec))


# Sup bound on the per-factor ratio f(n+1)/f(n) for n >= RATIO_FROM:
# every factor satisfies f(n+1)/f(n) <= 1 + 3/n there (the worst case is
# the double partial sum, where H_{n-1}/Z11_{n-1} peaks at 3 for n = 3).
RATIO_FROM = 8


def _component_ratio_bound(u_abs: mpf, n_factors: int, n: int) -> mpf:
    # |t_{n+1}/t_n| = |u| (n+1)/(2(2n+1)) * (n/(n+1))^s * w(n+1)/w(n);
    # the (n/(n+1))^s factor is < 1 and everything kept decreases in n,
    # so this bounds the ratio for every index >= n.
    base = u_abs * (n + 1) / (2 * (2 * n + 1))
    return base * (1 + mpf(3) / n) ** n_factors


def apery_sum(spec: AperySumSpec, ctx: PrecisionContext, *,
              cutoff: Optional[int] = None) -> CertifiedReal:
    """Evaluate a central-binomial series with certified geometric tail.

    Each product component of the weight combination carries its own tail
    bound |t_N| * rho_N / (1 - rho_N) with rho_N the sup term-ratio bound
    from N on; the certified error is the coefficient-weighted sum.
    ``cutoff`` forces exactly that many terms (tail certified at the
    cutoff), for the tail-soundness property tests.
    """
    if cutoff is not None and cutoff < RATIO_FROM:
        raise ValueError(f"cutoff must be >= {RATIO_FROM} for a certified tail")
    with ctx.workprec():
        uv, u_abs = _u_as_parts(spec.u)
        if uv == 0:
            return zero()
        if u_abs >= 4:
            raise DivergenceError(f"|u| = {mp.nstr(u_abs, 8)} >= 4 diverges")
        eps = ctx.epsilon / 2
        combo = spec.weight
        ncomp = len(combo)
        sums = [mpf(0)] * ncomp
        last_abs = [mpf(0)] * ncomp
        abs_total = mpf(0)
        state = _HarmonicState()
        upow = mpf(1)
        binom = 1
        n = 0
        while True:
            n += 1
            state.step()
            upow *= uv
            binom = binom * 2 * (2 * n - 1) // n
            base = upow / (mpf(n) ** spec.s * binom)
            for i, (_, w) in enumerate(combo):
                wv = mpf(1)
                for f in w.factors:
                    wv *= state.factor_value(f)
                t = base * wv
                sums[i] += t
                last_abs[i] = abs(t)
                abs_total += abs(t)
            if cutoff is not None:
                if n >= cutoff:
                    break
            elif n >= RATIO_FROM:
                tail = _combo_tail(combo, last_abs, u_abs, n)
                if tail is not None and tail <= eps:
                    break
            if n > APERY_MAX_TERMS:
                raise CapacityError("central-binomial series exceeded term cap")
        stats.add_terms(n)
        tail = _combo_tail(combo, last_abs, u_abs, n)
        if tail is None:
            raise CapacityError(f"no certified tail ratio at cutoff {n}")
        value = mpf(0)
        for (coeff, _), sv in zip(combo, sums):
            value += mpf(coeff.numerator) / coeff.denominator * sv
        coeff_scale = max(abs(mpf(c.numerator) / c.denominator) for c, _ in combo)
        rounding = 32 * n * coeff_scale * abs_total * mpf(2) ** (1 - mp.prec)
        return CertifiedReal(value, tail + rounding)


def _combo_tail(combo: WeightCombo, last_abs, u_abs: mpf, n: int) -> Optional[mpf]:
    total = mpf(0)
    for (coeff, w), ta in zip(combo, last_abs):
        rho = _component_ratio_bound(u_abs, len(w.factors), n)
        if rho >= 1:
            return None
        total += abs(mpf(coeff.numerator) / coeff.denominator) * ta * rho / (1 - rho)
    return total


def y_of_u(u, ctx: PrecisionContext) -> CertifiedReal:
    """Map a negative series base u to y in (0,1) with u = -(1-y)^2/y.

    Defined through y = (1 - sqrt(u/(u-4))) / (1 + sqrt(u/(u-4))); only the
    real branch u < 0 is supported (u in [0,4] is not in the domain, and
    u > 4 would need the complex branch).
    """
    with ctx.workprec():
        uv, _ = _u_as_parts(u)
        if uv >= 0 or not mp.isfinite(uv):
            raise DomainError("the substitution requires u < 0 on the real branch")
        srt = mp.sqrt(uv / (uv - 4))
        y = (1 - srt) / (1 + srt)
        return CertifiedReal(y, abs(y) * mpf(2) ** (5 - mp.prec))


DK_KINDS = ("H", "H2", "DIFF")


def dk_rhs(kind: str, u, ctx: PrecisionContext) -> CertifiedReal:
    """Polylogarithmic right-hand side of the central-binomial expansions.

    kind="H"  : expansion of sum u^n H_{n-1} / (n^3 C(2n,n))
    kind="H2" : expansion of sum u^n H_{2n-1} / (n^3 C(2n,n))
    kind="DIFF": their difference (weight H_{n-1} - H_{2n-1})

    Everything is evaluated through the polylogarithm engine with
    propagated bounds; the H and H2 variants share the log-weighted
    trilogarithm integral term, the difference cancels it.
    """
    if kind not in DK_KINDS:
        raise ValueError(f"kind must be one of {DK_KINDS}")
    from .iterint import h_m1001  # deferred: iterint imports polylogs only

    with ctx.workprec():
        y = y_of_u(u, ctx)
        neg_y = -y
        y2 = y * y
        ln_y = y.ln()
        one_minus_y = CertifiedReal.of(1) - y
        ln_1my = one_minus_y.ln()
        z2 = zeta_even(1, ctx)
        z3 = zeta_int(3, ctx)
        z4 = zeta_even(2, ctx)

        li2_y = li(2, y, ctx)
        li2_my = li(2, neg_y, ctx)
        li3_y = li(3, y, ctx)
        li3_my = li(3, neg_y, ctx)
        li4_y = li(4, y, ctx)
        li4_my = li(4, neg_y, ctx)
        li21_y = mpl_single((2, 1), y, ctx)
        li21_my = mpl_single((2, 1), neg_y, ctx)
        li21_y2 = mpl_single((2, 1), y2, ctx)
        li31_y = mpl_single((3, 1), y, ctx)
        li31_my = mpl_single((3, 1), neg_y, ctx)
        li31_y2 = mpl_single((3, 1), y2, ctx)

        if kind == "DIFF":
            return (li31_y * 4 - li4_y * 4 + li2_y * li2_y
                    - li21_y * ln_y * 4
                    + li3_y * ln_y * 2
                    - li2_y * ln_y * ln_y / 2
                    + li3_y * ln_1my * 4
                    - li2_y * ln_y * ln_1my * 2
                    - ln_y ** 3 * ln_1my / 6
                    + ln_y ** 4 / 48
                    - z2 * li2_y * 2
                    + z2 * ln_y * ln_y / 2
                    - z2 * ln_y * ln_1my * 2
                    - z3 * ln_1my * 4
                    + z3 * ln_y * 2
                    + z4 * Fraction(11, 2))

        h4 = h_m1001(y, ctx) * 4
        shared = (h4 + li31_y2 - li31_my * 4 - li4_my * 6
                  + li21_my * ln_y * 4 - li21_y2 * ln_y * 2
                  + li3_my * ln_1my * 4 + li3_my * ln_y * 2
                  - li2_my * ln_y * ln_1my * 4)
        if kind == "H":
            return (shared
                    - li31_y * 4 - li4_y * 2
                    + li21_y * ln_y * 4
                    + li3_y * ln_y * 2
                    - li2_y * ln_y * ln_y
                    - ln_y ** 3 * ln_1my / 3
                    + ln_y ** 4 / 24
                    + z2 * li2_y * 2
                    - z2 * ln_y * ln_y / 2
                    + z2 * ln_y * ln_1my * 2
                    + z3 * ln_1my * 6
                    - z3 * ln_y * 3
                    - z4 * 4)
        return (shared
                - li31_y * 8 + li4_y * 2
                - li2_y * li2_y
                + li21_y * ln_y * 8
                + ln_y ** 4 / 48
                - li3_y * ln_1my * 4
                + li2_y * ln_y * ln_1my * 2
                - li2_y * ln_y * ln_y / 2
                - ln_y ** 3 * ln_1my / 6
                + z2 * ln_y * ln_1my * 4
                - z2 * ln_y * ln_y
                + z3 * ln_1my * 10
                - z3 * ln_y * 5
                + z2 * li2_y * 4
                - z4 * Fraction(19, 2))
