"""Series polylogarithms: golden-ratio anchor values, tail soundness,
depth-1 consistency, zeta tips and the Nielsen reduction."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from mplcert.errors import AdmissibilityError, DivergenceError, DomainError
from mplcert.precision import (make_context, golden_ratio, golden_ratio_sq,
                               ln_golden_ratio, zeta_int, zeta_even)
from mplcert.polylogs import Composition, MPLArgument, li, mpl, mpl_single, mzv, nielsen
from mplcert.stuffle import quasi_shuffle


def golden(ctx):
    phi = golden_ratio(ctx)
    phi2 = golden_ratio_sq(ctx)
    lnphi = ln_golden_ratio(ctx)
    return phi, phi2, lnphi


class TestLi:
    def test_zero_argument(self, ctx40):
        assert li(5, 0, ctx40).value == 0
        assert li(2, Fraction(0), ctx40).value == 0

    def test_li2_golden(self, ctx40):
        # Li_2 at the golden section: pi^2/10 - ln^2(phi)  (Lewin (1.20))
        phi, _, lnphi = golden(ctx40)
        v = li(2, phi, ctx40)
        with ctx40.workprec():
            target = mp.pi ** 2 / 10 - lnphi.value ** 2
            assert abs(v.value - target) < mpf(10) ** -38

    def test_li2_golden_squared(self, ctx40):
        # Li_2(phi^2) = pi^2/15 - ln^2(phi)  (Lewin (1.20)/(6.13) family)
        _, phi2, lnphi = golden(ctx40)
        v = li(2, phi2, ctx40)
        with ctx40.workprec():
            target = mp.pi ** 2 / 15 - lnphi.value ** 2
            assert abs(v.value - target) < mpf(10) ** -38

    def test_li3_golden_squared(self, ctx40):
        # Li_3(phi^2) = (4/5) zeta(3) - (2/3) ln^3 phi + (2/15) pi^2 ln phi
        _, phi2, lnphi = golden(ctx40)
        v = li(3, phi2, ctx40)
        z3 = zeta_int(3, ctx40)
        with ctx40.workprec():
            target = (mpf(4) / 5 * z3.value - mpf(2) / 3 * lnphi.value ** 3
                      + mpf(2) / 15 * mp.pi ** 2 * lnphi.value)
            assert abs(v.value - target) < mpf(10) ** -38

    def test_unit_boundary(self, ctx30):
        with pytest.raises(DivergenceError):
            li(1, Fraction(1), ctx30)
        with pytest.raises(DivergenceError):
            li(2, Fraction(3, 2), ctx30)
        z = li(4, Fraction(1), ctx30)
        ref = zeta_int(4, ctx30)
        assert z.agrees_with(ref)
        # alternating tip: Li_2(-1) = -pi^2/12
        v = li(2, Fraction(-1), ctx30)
        with ctx30.workprec():
            assert abs(v.value + mp.pi ** 2 / 12) < mpf(10) ** -28

    def test_error_bound_within_epsilon(self, ctx30):
        v = li(2, Fraction(4, 5), ctx30)
        assert v.error_bound <= ctx30.epsilon


class TestMpl:
    def test_depth_one_reduces_to_li(self, ctx30):
        phi, phi2, _ = golden(ctx30)
        args = [phi, phi2, Fraction(3, 10)]
        neg = [-a for a in args]
        for x in args + neg:
            for k in (2, 3, 4):
                a = mpl((k,), MPLArgument.of((x,)), ctx30)
                b = li(k, x, ctx30)
                with ctx30.workprec():
                    assert abs(a.value - b.value) <= a.error_bound + b.error_bound

    def test_mixed_sign_depth2_vs_double_sum(self, ctx30):
        # oracle: truncated double sum at doubled precision
        phi2 = golden_ratio_sq(make_context(60))
        v = mpl((1, 3), MPLArgument.of((phi2, -1)), ctx30)
        with make_context(60).workprec():
            y = phi2.value
            total = mpf(0)
            n_cut = 300
            for n1 in range(2, n_cut):
                inner = sum(mpf(-1) ** n2 / mpf(n2) ** 3 for n2 in range(1, n1))
                total += y ** n1 / n1 * inner
            assert abs(v.value - total) < mpf(10) ** -28

    def test_fe1_value(self, ctx40):
        # Li_{2,1}(phi^2) = zeta(3) + (pi^2/10) ln(phi) - Li_3(phi)
        phi, phi2, lnphi = golden(ctx40)
        v = mpl((2, 1), MPLArgument.of((phi2, 1)), ctx40)
        z3 = zeta_int(3, ctx40)
        li3 = li(3, phi, ctx40)
        with ctx40.workprec():
            target = z3.value + mp.pi ** 2 / 10 * lnphi.value - li3.value
            assert abs(v.value - target) < mpf(10) ** -36

    def test_divergence_and_admissibility(self, ctx30):
        with pytest.raises(DivergenceError):
            mpl((2, 2), MPLArgument.of((Fraction(3, 2), 1)), ctx30)
        with pytest.raises(AdmissibilityError):
            mpl((1, 2), MPLArgument.of((1, 1)), ctx30)

    def test_depth_mismatch(self, ctx30):
        with pytest.raises(ValueError):
            mpl((2, 1), MPLArgument.of((Fraction(1, 2),)), ctx30)

    def test_tail_soundness_randomized(self, rng, ctx30):
        # partial sums at N and N+50 must differ by less than the bound at N
        for _ in range(50):
            depth = rng.randint(1, 3)
            parts = tuple(rng.randint(1, 4) for _ in range(depth))
            args = []
            prefix = 1.0
            for j in range(depth):
                hi = min(0.8 / max(prefix, 1e-9), 1.6)
                mag = rng.uniform(0.05, hi)
                prefix *= mag
                args.append(Fraction(round(mag * (1 if rng.random() < 0.5 else -1), 3)))
            if any(a == 0 for a in args):
                continue
            arg = MPLArgument.of(tuple(args))
            n0 = rng.randint(50, 120)
            a = mpl(parts, arg, ctx30, cutoff=n0)
            b = mpl(parts, arg, ctx30, cutoff=n0 + 50)
            with ctx30.workprec():
                assert abs(a.value - b.value) <= a.error_bound, (parts, args, n0)


class TestMzv:
    def test_weight_4(self, ctx40):
        z = mzv((4,), ctx40)
        ref = zeta_even(2, ctx40)
        assert z.agrees_with(ref)

    def test_zeta_3_1_reduction(self):
        # known reduction zeta(3,1) = zeta(4)/4 = pi^4/360, cross-checked
        # against the direct double series at low precision
        ctx6 = make_context(6)
        z = mzv((3, 1), ctx6)
        with mp.workprec(80):
            assert abs(z.value - mp.pi ** 4 / 360) <= z.error_bound
        total = 0.0
        for n1 in range(2, 2000):
            total += sum(1.0 / n2 for n2 in range(1, n1)) / n1 ** 3
        assert abs(float(z.value) - total) < 1e-5

    def test_inadmissible(self, ctx30):
        with pytest.raises(AdmissibilityError):
            mzv((1, 1), ctx30)


class TestMplSingle:
    def test_fe2_value(self, ctx40):
        # Li_{3,1}(phi^2) in terms of pi, ln phi, Li_4 and zeta(3)
        phi, phi2, lnphi = golden(ctx40)
        v = mpl_single((3, 1), phi2, ctx40)
        z3 = zeta_int(3, ctx40)
        li4_phi = li(4, phi, ctx40)
        li4_phi2 = li(4, phi2, ctx40)
        with ctx40.workprec():
            target = (mp.pi ** 4 / 90 - mp.pi ** 2 / 20 * lnphi.value ** 2
                      + mpf(3) / 8 * lnphi.value ** 4 + mpf(9) / 8 * li4_phi2.value
                      - 2 * li4_phi.value + mpf(1) / 5 * z3.value * lnphi.value)
            assert abs(v.value - target) < mpf(10) ** -36

    def test_zero(self, ctx30):
        assert mpl_single((2, 1), 0, ctx30).value == 0

    def test_golden_reflection(self, ctx40):
        # Li_{3,1}(phi) + Li_{3,1}(phi^2) = pi^4/360 + (pi^2/5) ln^2 phi
        #   - (1/3) ln^4 phi - 2 ln(phi) Li_3(phi) + (11/5) zeta(3) ln phi
        phi, phi2, lnphi = golden(ctx40)
        a = mpl_single((3, 1), phi, ctx40)
        b = mpl_single((3, 1), phi2, ctx40)
        z3 = zeta_int(3, ctx40)
        li3 = li(3, phi, ctx40)
        with ctx40.workprec():
            target = (mp.pi ** 4 / 360 + mp.pi ** 2 / 5 * lnphi.value ** 2
                      - lnphi.value ** 4 / 3 - 2 * lnphi.value * li3.value
                      + mpf(11) / 5 * z3.value * lnphi.value)
            assert abs(a.value + b.value - target) < mpf(10) ** -36


class TestNielsen:
    def test_reduction_s12(self, ctx40):
        phi2 = golden_ratio_sq(ctx40)
        a = nielsen(1, 2, phi2, ctx40)
        b = mpl_single((2, 1), phi2, ctx40)
        assert a.agrees_with(b)

    def test_reduction_s22(self, ctx40):
        phi2 = golden_ratio_sq(ctx40)
        a = nielsen(2, 2, phi2, ctx40)
        b = mpl_single((3, 1), phi2, ctx40)
        assert a.agrees_with(b)

    def test_zero(self, ctx30):
        assert nielsen(1, 2, 0, ctx30).value == 0
        assert nielsen(3, 1, Fraction(0), ctx30).value == 0

    def test_domain(self, ctx30):
        with pytest.raises(DomainError):
            nielsen(1, 2, Fraction(-1, 10), ctx30)
        with pytest.raises(DomainError):
            nielsen(1, 2, Fraction(11, 10), ctx30)
        # z = 1 is the zeta tip and stays supported
        v = nielsen(1, 1, Fraction(1), ctx30)
        assert v.agrees_with(zeta_int(2, ctx30))


class TestStuffleSeriesConsistency:
    def test_product_expansion(self, ctx30):
        # li(k,x) * li(m,x) must match the quasi-shuffle expansion with the
        # collision slot taking argument x^2
        x = Fraction(2, 5)
        expansion = quasi_shuffle((2,), (2,))
        assert expansion.terms == {(2, 2): 2, (4,): 1}
        lhs = li(2, x, ctx30)
        inner = mpl((2, 2), MPLArgument.of((x, x)), ctx30)
        coll = li(4, x * x, ctx30)
        with ctx30.workprec():
            rhs = 2 * inner.value + coll.value
            assert abs(lhs.value ** 2 - rhs) < mpf(10) ** -30


class TestComposition:
    def test_validation(self):
        with pytest.raises(ValueError):
            Composition(())
        with pytest.raises(ValueError):
            Composition((0, 2))
        c = Composition.of((3, 1))
        assert c.depth == 2 and c.weight == 4
