"""Precision contexts, certified arithmetic, Bernoulli numbers, zeta values."""

import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf, mpmathify

from mplcert.errors import CapacityError, DivergenceError
from mplcert.precision import (CertifiedReal, ExactRational, make_context,
                               bernoulli, zeta_even, zeta_int, pi_const,
                               golden_ratio, golden_ratio_sq, ln_golden_ratio)


def bernoulli_oracle(n_max):
    """Independent generating-function expansion of t/(e^t - 1).

    With A(t) = (e^t - 1)/t = sum t^m/(m+1)!, invert the power series:
    g_0 = 1, g_n = -sum_{j<n} g_j A_{n-j}; then B_n = n! g_n.
    """
    a = [Fraction(1, math.factorial(m + 1)) for m in range(n_max + 1)]
    g = [Fraction(1)]
    for n in range(1, n_max + 1):
        g.append(-sum(g[j] * a[n - j] for j in range(n)))
    return [math.factorial(n) * g[n] for n in range(n_max + 1)]


class TestContext:
    def test_50_digits(self):
        ctx = make_context(50)
        assert ctx.working_bits >= 167 + ctx.guard_bits
        assert ctx.epsilon <= mpf(10) ** -52

    def test_one_digit(self):
        ctx = make_context(1)
        assert ctx.working_bits >= 4 + ctx.guard_bits

    def test_capacity(self):
        with pytest.raises(CapacityError):
            make_context(10 ** 7)
        with pytest.raises(CapacityError):
            make_context(0)


class TestBernoulli:
    def test_b0_is_one(self):
        assert bernoulli(0) == 1

    def test_small_values(self):
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(4) == Fraction(-1, 30)

    def test_against_generating_function(self):
        oracle = bernoulli_oracle(14)
        for n in range(15):
            assert bernoulli(n) == oracle[n], f"B_{n} mismatch"

    def test_odd_indices_vanish(self):
        for n in range(1, 21):
            assert bernoulli(2 * n + 1) == 0

    def test_exact_rational_normalized(self):
        q = ExactRational(6, -4)
        assert q.denominator > 0 and math.gcd(q.numerator, q.denominator) == 1


class TestZetaEven:
    def test_pi2_over_6(self, ctx50):
        z = zeta_even(1, ctx50)
        with ctx50.workprec():
            assert abs(z.value - mp.pi ** 2 / 6) <= z.error_bound

    def test_pi4_over_90_vs_direct_series(self, ctx50):
        z = zeta_even(2, ctx50)
        with ctx50.workprec():
            assert abs(z.value - mp.pi ** 4 / 90) <= z.error_bound
            # direct-series enclosure: partial sum + integral tail bracket
            n_cut = 40
            partial = sum(mpf(n) ** -4 for n in range(1, n_cut + 1))
            lo = partial + mpf(n_cut + 1) ** -3 / 3 - mpf(n_cut + 1) ** -4
            hi = partial + mpf(n_cut) ** -3 / 3
            assert lo <= z.value <= hi

    def test_pi6_over_945(self, ctx50):
        z = zeta_even(3, ctx50)
        with ctx50.workprec():
            assert abs(z.value - mp.pi ** 6 / 945) <= z.error_bound


class TestZetaInt:
    def test_s2_matches_euler_formula(self, ctx50):
        a = zeta_int(2, ctx50)
        b = zeta_even(1, ctx50)
        assert a.agrees_with(b)

    def test_s3_doubled_precision_and_library_oracle(self, ctx50):
        z = zeta_int(3, ctx50)
        z_hi = zeta_int(3, make_context(100))
        with make_context(100).workprec():
            assert abs(z.value - z_hi.value) <= z.error_bound + z_hi.error_bound
            # independent algorithm: mpmath's own zeta
            assert abs(z.value - mp.zeta(3)) <= z.error_bound + mpf(10) ** -95

    def test_divergent(self, ctx30):
        with pytest.raises(DivergenceError):
            zeta_int(1, ctx30)
        with pytest.raises(DivergenceError):
            zeta_int(0, ctx30)

    def test_even_agreement_suite(self, ctx40):
        for k in range(1, 7):
            a = zeta_int(2 * k, ctx40)
            b = zeta_even(k, ctx40)
            with ctx40.workprec():
                assert abs(a.value - b.value) <= a.error_bound + b.error_bound


class TestGoldenRatio:
    def test_defining_quadratic(self, ctx50):
        phi = golden_ratio(ctx50)
        with ctx50.workprec():
            assert abs(phi.value ** 2 + phi.value - 1) < mpf(10) ** -48

    def test_complement_identity(self, ctx50):
        phi = golden_ratio(ctx50)
        phi2 = golden_ratio_sq(ctx50)
        with ctx50.workprec():
            assert abs((1 - phi2.value) - phi.value) < mpf(10) ** -48

    def test_newton_oracle(self, ctx30):
        phi = golden_ratio(ctx30)
        with mp.workprec(200):
            x = mpf(0.6)
            for _ in range(60):
                x = x - (x * x + x - 1) / (2 * x + 1)
            assert abs(phi.value - x) < mpf(10) ** -28

    def test_range_and_log_sign(self, ctx30):
        phi = golden_ratio(ctx30)
        assert 0.6 < phi.value < 0.62
        assert ln_golden_ratio(ctx30).value < 0


class TestCertifiedPropagation:
    def test_bounds_dominate_precision_gap(self, rng):
        ctx_lo = make_context(15)
        ctx_hi = make_context(30)
        for _ in range(40):
            qa = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            qb = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            with ctx_lo.workprec():
                a_lo = CertifiedReal.exact(qa)
                b_lo = CertifiedReal.exact(qb)
                r_lo = (a_lo * b_lo + a_lo) * b_lo - a_lo * a_lo
            with ctx_hi.workprec():
                a_hi = CertifiedReal.exact(qa)
                b_hi = CertifiedReal.exact(qb)
                r_hi = (a_hi * b_hi + a_hi) * b_hi - a_hi * a_hi
                observed = abs(r_lo.value - r_hi.value)
                assert observed <= r_lo.error_bound + r_hi.error_bound

    def test_ln_propagation(self, ctx30):
        with ctx30.workprec():
            x = CertifiedReal(mpf(2), mpf("1e-20"))
            lx = x.ln()
            assert abs(lx.value - mp.log(2)) <= lx.error_bound
            assert lx.error_bound >= mpf("1e-20") / 2.1

    def test_pi_bound(self, ctx30):
        p = pi_const(ctx30)
        with mp.workprec(300):
            assert abs(p.value - mp.pi) <= p.error_bound
