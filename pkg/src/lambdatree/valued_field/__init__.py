"""Value groups and concrete valued fields."""

from .fields import (
    FuncFieldTadic,
    QuadElt,
    QuadExt,
    Rank2Composite,
    RationalPadic,
    ValuedField,
    make_field,
    truncate_padic,
    vp_fraction,
)
from .hensel import HenselRoot, hensel_fixed_root
from .polynomials import Poly, RatFunc
from .value_group import ValueElement, V, is_top_nilpotent, vbottom, vzero


def valuation(field, x):
    return field.valuation(x)


def canonical_center(field, x, rho):
    return field.canonical_center(x, rho)


def residue_representatives(field, n):
    return field.residue_representatives(n)


__all__ = [
    "FuncFieldTadic",
    "HenselRoot",
    "Poly",
    "QuadElt",
    "QuadExt",
    "Rank2Composite",
    "RatFunc",
    "RationalPadic",
    "V",
    "ValueElement",
    "ValuedField",
    "canonical_center",
    "hensel_fixed_root",
    "is_top_nilpotent",
    "make_field",
    "residue_representatives",
    "truncate_padic",
    "valuation",
    "vbottom",
    "vp_fraction",
    "vzero",
]
