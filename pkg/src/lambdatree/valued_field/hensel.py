"""Roots of monic quadratics near 0, by contraction iteration with exact truncation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..errors import HenselFails
from .value_group import ValueElement

MAX_STEPS = 10000


@dataclass(frozen=True)
class HenselRoot:
    root: Any
    cofactor: Any  # the other root, s - root
    precision: ValueElement  # lower bound for v(root - true root); bottom when exact
    exact: bool


def hensel_fixed_root(field, s, p, precision: ValueElement) -> HenselRoot:
    """Root near 0 of f(x) = x^2 - s x + p.

    Requires v(p) - 2 v(s) to be top-nilpotent, i.e. f(0)/f'(0)^2 is a microbe.
    When the discriminant is a square in the field the exact root is returned.
    Otherwise x = s*y with y = m + y^2, m = p/s^2, is iterated with every
    iterate truncated; each step gains v(m), and the distance to the true root
    is certified as v(f(x)) - v(f'(x)).
    """
    s = field.coerce(s)
    p = field.coerce(p)
    if p == 0:
        return HenselRoot(field.zero, s, field.bottom(), True)
    if s == 0:
        raise HenselFails("f'(0) vanishes")
    vs = field.valuation(s)
    gap = field.valuation(p) - vs * 2
    if not gap.is_top_nilpotent():
        raise HenselFails(f"f(0)/f'(0)^2 has valuation {gap}, not a microbe")

    disc = s * s - p * 4
    root_disc = field.sqrt(disc)
    if root_disc is not None:
        candidates = [(s + root_disc) / 2, (s - root_disc) / 2]
        small = max(candidates, key=lambda r: field.valuation(r))
        return HenselRoot(small, s - small, field.bottom(), True)

    want = precision - vs
    if not field.in_lattice(want):
        raise HenselFails(f"precision {precision} is not attainable for this polynomial")
    den = s * s
    m = field.quotient_center(p, den, want)
    y = field.zero
    for _ in range(MAX_STEPS):
        y = field.canonical_center(m + y * y, want)
        # den * (y^2 - y + p/den) avoids forming the quotient
        value = field.valuation(den * (y * y - y) + p) - field.valuation(den)
        achieved = value - field.valuation(y * 2 - 1) + vs
        if achieved >= precision:
            x = s * y
            return HenselRoot(x, s - x, achieved, False)
    raise HenselFails("iteration did not reach the requested precision")
