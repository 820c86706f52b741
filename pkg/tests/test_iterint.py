"""Iterated-integral words, the word <-> series round trip, the log-weighted
trilogarithm integral, and the adaptive quadrature oracle."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from mplcert.errors import DomainError, QuadratureError
from mplcert.precision import (make_context, golden_ratio, golden_ratio_sq,
                               ln_golden_ratio, zeta_int)
from mplcert.polylogs import li, mpl, mpl_single, nielsen, MPLArgument
from mplcert.iterint import (IteratedWord, word_from_mpl, mpl_from_word,
                             eval_word, h_m1001, quadrature,
                             nielsen_integrand, h_m1001_integrand)


class TestWordConstruction:
    def test_depth2_anchor_shape(self, ctx40):
        w = word_from_mpl((2, 1), Fraction(2, 5))
        assert w.letters == (0, Fraction(5, 2), Fraction(5, 2))

    def test_depth2_weight4_anchor_shape(self):
        w = word_from_mpl((3, 1), Fraction(1, 3))
        assert w.letters == (0, 0, Fraction(3), Fraction(3))

    def test_nielsen_chain_shape(self):
        # S_{a,b} word: a zeros then b copies of 1/z
        a, b, z = 2, 3, Fraction(1, 2)
        w = word_from_mpl((a + 1,) + (1,) * (b - 1), z)
        assert w.letters == (0, 0, Fraction(2), Fraction(2), Fraction(2))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            word_from_mpl((2, 1), Fraction(0))

    def test_word_invariants(self):
        with pytest.raises(ValueError):
            IteratedWord((1, Fraction(2)))        # leading 1 diverges
        with pytest.raises(ValueError):
            IteratedWord((Fraction(2), 0))        # trailing 0 diverges
        with pytest.raises(ValueError):
            IteratedWord((Fraction(1, 2),))       # |letter| < 1 off-branch


class TestWordRoundTrip:
    def test_anchor_inverse(self):
        idx, arg = mpl_from_word(IteratedWord((0, Fraction(5, 2), Fraction(5, 2))))
        assert idx.parts == (2, 1)
        assert arg.exact == (Fraction(2, 5), Fraction(1))

    def test_li1_word(self):
        idx, arg = mpl_from_word(IteratedWord((Fraction(13, 8),)))
        assert idx.parts == (1,)
        assert arg.exact == (Fraction(8, 13),)

    def test_randomized_round_trip(self, rng):
        for _ in range(50):
            depth = rng.randint(1, 3)
            parts = tuple(rng.randint(1, 4) for _ in range(depth))
            if parts[0] == 1:
                parts = (parts[0] + 1,) + parts[1:]
            x = Fraction(rng.randint(1, 99), 100) * (1 if rng.random() < 0.5 else -1)
            idx, arg = mpl_from_word(word_from_mpl(parts, x))
            assert idx.parts == parts
            assert arg.exact == (x,) + (Fraction(1),) * (depth - 1)


class TestEvalWord:
    def test_golden_anchor_depth2(self, ctx40):
        # the (0, phi^-2, phi^-2) word is Li_{2,1}(phi^2):
        # zeta(3) + (pi^2/10) ln(phi) - Li_3(phi)
        phi = golden_ratio(ctx40)
        phi2 = golden_ratio_sq(ctx40)
        w = word_from_mpl((2, 1), phi2)
        v = eval_word(w, ctx40)
        z3 = zeta_int(3, ctx40)
        li3 = li(3, phi, ctx40)
        lnphi = ln_golden_ratio(ctx40)
        with ctx40.workprec():
            target = z3.value + mp.pi ** 2 / 10 * lnphi.value - li3.value
            assert abs(v.value - target) < mpf(10) ** -35

    def test_golden_anchor_depth2_weight4(self, ctx40):
        phi = golden_ratio(ctx40)
        phi2 = golden_ratio_sq(ctx40)
        w = word_from_mpl((3, 1), phi2)
        v = eval_word(w, ctx40)
        direct = mpl_single((3, 1), phi2, ctx40)
        with ctx40.workprec():
            assert abs(v.value - direct.value) <= v.error_bound + direct.error_bound

    def test_log_word(self, ctx30):
        v = eval_word(IteratedWord((Fraction(2),)), ctx30)
        with ctx30.workprec():
            assert abs(v.value - mp.log(2)) < mpf(10) ** -28

    def test_matches_series_to_target_digits(self, ctx40):
        # agreement within target_digits - 5 between word evaluation and the
        # constant combination, exercised through the full constant stack
        phi2 = golden_ratio_sq(ctx40)
        v = eval_word(word_from_mpl((2, 1), phi2), ctx40)
        ref = mpl_single((2, 1), phi2, ctx40)
        with ctx40.workprec():
            assert abs(v.value - ref.value) < mpf(10) ** -(40 - 5)


class TestH1001:
    def test_near_zero(self, ctx30):
        v = h_m1001(Fraction(1, 10 ** 8), ctx30)
        assert abs(v.value) < mpf(10) ** -16

    def test_series_vs_quadrature(self, ctx40):
        ys = [Fraction(1, 5), Fraction(1, 2), golden_ratio_sq(ctx40)]
        for y in ys:
            series = h_m1001(y, ctx40)
            f, a, b = h_m1001_integrand(y, ctx40)
            quad = quadrature(f, a, b, ctx40)
            with ctx40.workprec():
                assert abs(series.value - quad.value) < mpf(10) ** -30, y

    def test_domain(self, ctx30):
        for bad in (Fraction(0), Fraction(1), Fraction(-1, 2), Fraction(3, 2)):
            with pytest.raises(DomainError):
                h_m1001(bad, ctx30)


class TestQuadrature:
    def test_log_two(self, ctx40):
        v = quadrature(lambda t: 1 / (1 - t), 0, mpf(0.5), ctx40)
        with ctx40.workprec():
            assert abs(v.value - mp.log(2)) < mpf(10) ** -30

    def test_orientation(self, ctx30):
        a = quadrature(lambda t: t * t, 0, 1, ctx30)
        b = quadrature(lambda t: t * t, 1, 0, ctx30)
        with ctx30.workprec():
            assert abs(a.value + b.value) < mpf(10) ** -25
            assert abs(a.value - mpf(1) / 3) < mpf(10) ** -25

    def test_empty_interval(self, ctx30):
        assert quadrature(lambda t: t, 1, 1, ctx30).value == 0

    def test_nielsen_oracle_cases(self, ctx30):
        # series vs defining log-kernel integral, including the ln(t)
        # endpoint singularity at a = 2
        phi2 = golden_ratio_sq(ctx30)
        for (a, b) in ((1, 2), (2, 2), (1, 3)):
            for z in (Fraction(3, 10), phi2):
                series = nielsen(a, b, z, ctx30)
                quad = quadrature(nielsen_integrand(a, b, z, ctx30), 0, 1, ctx30)
                with ctx30.workprec():
                    assert abs(series.value - quad.value) < mpf(10) ** -30, (a, b)

    def test_nonintegrable_singularity_raises(self, ctx30):
        with pytest.raises(QuadratureError):
            quadrature(lambda t: 1 / t, 0, 1, ctx30)
