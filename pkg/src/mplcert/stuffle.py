"""Exact quasi-shuffle (stuffle) algebra on nested partial harmonic sums.

Products of nested partial sums with a common upper bound decompose into
interleavings plus index-collision contractions, e.g.

    (1) * (1) = 2 (1,1) + (2)

which is the classical decomposition of a squared partial harmonic sum
into its double-sum and second-order pieces.  Everything here is exact
integer/rational arithmetic; the numeric verifier checks the composition
identity at every upper bound up to N with stdlib fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapacityError

MAX_STUFFLE_DEPTH = 4

CompositionTuple = tuple[int, ...]


@dataclass(frozen=True)
class PartialSumSymbol:
    """A nested partial sum symbol: composition of orders, common bound n-1."""

    composition: CompositionTuple
    bound: str = "n-1"

    def __post_init__(self):
        if not self.composition or any(k < 1 for k in self.composition):
            raise ValueError(f"invalid partial-sum composition {self.composition}")


class FormalSum:
    """Integer-coefficient formal sum of compositions (zero terms dropped)."""

    def __init__(self, terms: dict[CompositionTuple, int] | None = None):
        self.terms: dict[CompositionTuple, int] = {
            k: v for k, v in (terms or {}).items() if v != 0}

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return FormalSum(out)

    def prefixed(self, head: int) -> "FormalSum":
        return FormalSum({(head,) + k: v for k, v in self.terms.items()})

    def symbols(self) -> list[tuple[PartialSumSymbol, int]]:
        return [(PartialSumSymbol(k), v) for k, v in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "FormalSum(0)"
        bits = [f"{v}*{k}" for k, v in sorted(self.terms.items())]
        return "FormalSum(" + " + ".join(bits) + ")"


def _as_tuple(c) -> CompositionTuple:
    if hasattr(c, "parts"):
        return tuple(c.parts)
    return tuple(c)


def quasi_shuffle(a: Sequence[int], b: Sequence[int]) -> FormalSum:
    """Stuffle product of two compositions.

    Standard recursion: the leading index comes from a, from b, or from the
    collision of both (orders added).  The empty composition is the unit.
    """
    ta, tb = _as_tuple(a), _as_tuple(b)
    if len(ta) > MAX_STUFFLE_DEPTH or len(tb) > MAX_STUFFLE_DEPTH:
        raise CapacityError(f"stuffle depth limited to {MAX_STUFFLE_DEPTH}")
    if any(k < 1 for k in ta + tb):
        raise ValueError("composition parts must be >= 1")
    return _stuffle(ta, tb)


def _stuffle(a: CompositionTuple, b: CompositionTuple) -> FormalSum:
    if not a:
        return FormalSum({b: 1})
    if not b:
        return FormalSum({a: 1})
    return (_stuffle(a[1:], b).prefixed(a[0])
            + _stuffle(a, b[1:]).prefixed(b[0])
            + _stuffle(a[1:], b[1:]).prefixed(a[0] + b[0]))


def _suffix_closure(comps: Iterable[CompositionTuple]) -> list[CompositionTuple]:
    seen = set()
    for c in comps:
        for i in range(len(c)):
            seen.add(c[i:])
    return sorted(seen, key=len, reverse=True)  # deepest first: see update order


def verify_stuffle_numeric(a: Sequence[int], b: Sequence[int], n_max: int) -> bool:
    """Exact-rational check of quasi_shuffle(a, b) at bound m for all m < n_max.

    Z(c, m) = sum_{m >= i1 > ... > id > 0} prod 1/i_j^(c_j) satisfies
    Z(c, m) = Z(c, m-1) + m^(-c_1) Z(c[1:], m-1); updating deeper
    compositions first keeps the strict i1 > i2 ordering.
    """
    ta, tb = _as_tuple(a), _as_tuple(b)
    product = quasi_shuffle(ta, tb)
    comps = set(product.terms) | {ta, tb}
    order = _suffix_closure(comps)
    z = {c: Fraction(0) for c in order}
    z[()] = Fraction(1)

    if not _stuffle_holds_at(ta, tb, product, z):
        return False
    for m in range(1, n_max):
        for c in order:
            z[c] = z[c] + Fraction(1, m ** c[0]) * z[c[1:]]
        if not _stuffle_holds_at(ta, tb, product, z):
            return False
    return True


def _stuffle_holds_at(ta, tb, product: FormalSum, z) -> bool:
    rhs = sum((coeff * z[c] for c, coeff in product.terms.items()), Fraction(0))
    return z[ta] * z[tb] == rhs
