"""Quasi-shuffle algebra: expansion structure, exact numeric checks,
commutativity/associativity, weight additivity."""

import itertools
from fractions import Fraction

import pytest

from mplcert.errors import CapacityError
from mplcert.stuffle import (FormalSum, PartialSumSymbol, quasi_shuffle,
                             verify_stuffle_numeric)


def compositions_of_weight(w):
    if w == 0:
        yield ()
        return
    for first in range(1, w + 1):
        for rest in compositions_of_weight(w - first):
            yield (first,) + rest


def stuffle_sum_mul(a: FormalSum, b: FormalSum) -> FormalSum:
    out = FormalSum({})
    for ca, va in a.terms.items():
        for cb, vb in b.terms.items():
            prod = quasi_shuffle(ca, cb)
            out = out + FormalSum({k: va * vb * v for k, v in prod.terms.items()})
    return out


class TestExpansion:
    def test_harmonic_square(self):
        # the squared partial harmonic sum splits into double sum + diagonal
        assert quasi_shuffle((1,), (1,)) == FormalSum({(1, 1): 2, (2,): 1})

    def test_mixed_orders_vs_index_cases(self):
        # brute-force oracle: split sum_k 1/k * sum_j 1/j^2 by k>j, k<j, k=j
        got = quasi_shuffle((1,), (2,))
        assert got == FormalSum({(1, 2): 1, (2, 1): 1, (3,): 1})
        n = 60
        lhs = sum(Fraction(1, k) for k in range(1, n + 1)) * \
            sum(Fraction(1, j * j) for j in range(1, n + 1))
        by_cases = (
            sum(Fraction(1, k) * Fraction(1, j * j) for k in range(1, n + 1)
                for j in range(1, k))
            + sum(Fraction(1, j * j) * Fraction(1, k) for j in range(1, n + 1)
                  for k in range(1, j))
            + sum(Fraction(1, k ** 3) for k in range(1, n + 1)))
        assert lhs == by_cases

    def test_empty_is_unit(self):
        assert quasi_shuffle((4,), ()) == FormalSum({(4,): 1})
        assert quasi_shuffle((), (2, 1)) == FormalSum({(2, 1): 1})

    def test_capacity(self):
        with pytest.raises(CapacityError):
            quasi_shuffle((1, 1, 1, 1, 1), (1,))


class TestAlgebraLaws:
    def test_commutative_weight_le_5(self):
        comps = [c for w in range(1, 5) for c in compositions_of_weight(w)]
        for a, b in itertools.combinations_with_replacement(comps, 2):
            if sum(a) + sum(b) <= 5:
                assert quasi_shuffle(a, b) == quasi_shuffle(b, a), (a, b)

    def test_associative_weight_le_5(self):
        comps = [c for w in range(1, 4) for c in compositions_of_weight(w)]
        for a, b, c in itertools.product(comps, repeat=3):
            if sum(a) + sum(b) + sum(c) <= 5:
                left = stuffle_sum_mul(quasi_shuffle(a, b), FormalSum({c: 1}))
                right = stuffle_sum_mul(FormalSum({a: 1}), quasi_shuffle(b, c))
                assert left == right, (a, b, c)

    def test_weight_additive(self):
        for a, b in [((1,), (1,)), ((2, 1), (1,)), ((2,), (3, 1)), ((1, 1), (2, 2))]:
            for term in quasi_shuffle(a, b).terms:
                assert sum(term) == sum(a) + sum(b)


class TestNumericVerification:
    def test_harmonic_square_200(self):
        assert verify_stuffle_numeric((1,), (1,), 200)

    def test_mixed_100(self):
        assert verify_stuffle_numeric((1,), (2,), 100)

    def test_depth_two(self):
        assert verify_stuffle_numeric((2, 1), (1,), 40)

    def test_trivial_bound(self):
        assert verify_stuffle_numeric((1,), (1,), 1)

    def test_symbols_view(self):
        fs = quasi_shuffle((1,), (1,))
        syms = fs.symbols()
        assert (PartialSumSymbol((1, 1)), 2) in syms
        assert all(s.bound == "n-1" for s, _ in syms)
