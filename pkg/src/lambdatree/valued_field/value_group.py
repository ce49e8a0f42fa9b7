"""The value group: lexicographically ordered Q^r, written additively.

A valuation v maps x to v(x), so that |x| <= |y| in multiplicative language
reads v(x) >= v(y) here.  The zero of the multiplicative group with zero is the
``bottom`` element, which behaves like +infinity additively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence


@total_ordering
@dataclass(frozen=True)
class ValueElement:
    coords: tuple
    bottom: bool = False

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not coords:
            raise ValueError("a value element needs at least one coordinate")
        if self.bottom:
            coords = tuple(Fraction(0) for _ in coords)
        object.__setattr__(self, "coords", coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    # ordering: additive order, bottom is the largest element
    def __lt__(self, other: "ValueElement") -> bool:
        if not isinstance(other, ValueElement):
            return NotImplemented
        self._check_rank(other)
        if self.bottom:
            return False
        if other.bottom:
            return True
        return self.coords < other.coords

    def _check_rank(self, other: "ValueElement") -> None:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    # group law
    def __add__(self, other: "ValueElement") -> "ValueElement":
        self._check_rank(other)
        if self.bottom or other.bottom:
            return ValueElement(self.coords, bottom=True)
        return ValueElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ValueElement":
        if self.bottom:
            raise ArithmeticError("the bottom element has no inverse")
        return ValueElement(tuple(-a for a in self.coords))

    def __sub__(self, other: "ValueElement") -> "ValueElement":
        return self + (-other)

    def __mul__(self, n) -> "ValueElement":
        n = Fraction(n)
        if self.bottom:
            if n <= 0:
                raise ArithmeticError("cannot scale bottom by a non-positive number")
            return self
        return ValueElement(tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, n) -> "ValueElement":
        return self * (Fraction(1) / Fraction(n))

    # predicates
    def is_zero(self) -> bool:
        """True for the neutral element (the multiplicative 1)."""
        return not self.bottom and all(c == 0 for c in self.coords)

    def is_top_nilpotent(self) -> bool:
        """Multiples n*self exceed every element iff the leading coordinate is positive.

        Multiplicatively: |q| with v(q) = self is a microbe.
        """
        if self.bottom:
            raise ValueError("top-nilpotence is undefined for the bottom element")
        return self.coords[0] > 0

    def is_integral(self) -> bool:
        """True when every coordinate is an integer."""
        return self.bottom or all(c.denominator == 1 for c in self.coords)

    def leading(self) -> Fraction:
        return self.coords[0]

    # multiplicative reading, for code that follows the geometric language
    def abs_le(self, other: "ValueElement") -> bool:
        """|x| <= |y| for v(x) = self, v(y) = other."""
        return self >= other

    def abs_lt(self, other: "ValueElement") -> bool:
        return self > other

    def to_json(self):
        if self.bottom:
            return None
        return [_frac_json(c) for c in self.coords]

    def __repr__(self) -> str:
        if self.bottom:
            return "V(bottom)"
        return "V(" + ", ".join(str(c) for c in self.coords) + ")"

    def __str__(self) -> str:
        if self.bottom:
            return "inf"
        return "[" + ",".join(str(c) for c in self.coords) + "]"


def _frac_json(c: Fraction):
    return int(c) if c.denominator == 1 else str(c)


def V(*coords) -> ValueElement:
    """Shorthand constructor: ``V(1)`` or ``V(0, 5)``."""
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = tuple(coords[0])
    return ValueElement(tuple(coords))


def vzero(rank: int) -> ValueElement:
    return ValueElement(tuple([0] * rank))


def vbottom(rank: int) -> ValueElement:
    return ValueElement(tuple([0] * rank), bottom=True)


def vmin(values: Iterable[ValueElement]) -> ValueElement:
    return min(values)


def vmax(values: Iterable[ValueElement]) -> ValueElement:
    return max(values)


def from_json(data: Sequence, rank: int | None = None) -> ValueElement:
    if data is None:
        if rank is None:
            raise ValueError("rank needed to decode the bottom element")
        return vbottom(rank)
    if not isinstance(data, (list, tuple)) or not data:
        raise ValueError(f"malformed value vector: {data!r}")
    value = ValueElement(tuple(Fraction(str(c)) for c in data))
    if rank is not None and value.rank != rank:
        raise ValueError(f"expected a rank-{rank} vector, got {data!r}")
    return value


def is_top_nilpotent(value: ValueElement) -> bool:
    return value.is_top_nilpotent()
