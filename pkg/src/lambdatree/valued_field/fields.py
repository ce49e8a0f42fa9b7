"""Concrete valued fields: Q with a p-adic valuation, Q(t) or F_p(t) with the
t-adic valuation, Q(t) with the rank-two composite valuation, and ramified
quadratic extensions of any of these.

Every field object exposes the same small protocol (valuation, canonical
centers, residue representatives, exact square roots, parsing/formatting), so
the geometric code never inspects element payloads.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Any

from ..errors import TooFewResidues
from .polynomials import Poly, RatFunc, coeff_sqrt, poly_sqrt
from .value_group import ValueElement, vbottom


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_fraction(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def truncate_padic(x: Fraction, p: int, rho) -> Fraction:
    """Keep the p-adic digits of x whose exponent is strictly below rho."""
    if x == 0:
        return Fraction(0)
    v = vp_fraction(x, p)
    top = ceil(rho)  # digits with exponent k < rho are those with k <= top - 1
    if v >= top:
        return Fraction(0)
    unit = x / Fraction(p) ** v
    modulus = p ** (top - v)
    digits = (unit.numerator * pow(unit.denominator, -1, modulus)) % modulus
    return Fraction(digits) * Fraction(p) ** v


def _parse_expr(text: str, leaf_int, leaf_t):
    """Evaluate a small arithmetic expression in integers and the symbol t."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse element {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return leaf_int(node.value)
        if isinstance(node, ast.Name) and node.id == "t" and leaf_t is not None:
            return leaf_t()
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError(f"exponent must be an integer in {text!r}")
                return walk(node.left) ** (sign * exp.value)
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        raise ValueError(f"unsupported syntax in element {text!r}")

    return walk(tree)


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class ValuedField:
    """Common protocol; subclasses fill in the arithmetic-specific parts."""

    kind: str
    rank: int
    residue_size: Any  # int or "infinite"

    # construction helpers
    def coerce(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def is_zero(self, x) -> bool:
        return x == self.zero

    def bottom(self) -> ValueElement:
        return vbottom(self.rank)

    def is_constant(self, x) -> bool:
        """Whether x is algebraic over the prime field (always true for rational fields)."""
        return True

    def valuation(self, x) -> ValueElement:
        raise NotImplementedError

    def canonical_center(self, x, rho: ValueElement):
        raise NotImplementedError

    def element_of_valuation(self, value: ValueElement):
        raise NotImplementedError

    def quotient_center(self, num, den, rho: ValueElement):
        """canonical_center(num / den, rho), possibly without forming the quotient."""
        return self.canonical_center(self.coerce(num) / self.coerce(den), rho)

    def in_lattice(self, value: ValueElement) -> bool:
        return value.bottom or value.is_integral()

    def lattice_step(self) -> ValueElement:
        """The smallest positive value: the successor of r is r + step."""
        return ValueElement(tuple([0] * (self.rank - 1) + [1]))

    def residue_representatives(self, n: int) -> list:
        if self.residue_size != "infinite" and n > self.residue_size:
            raise TooFewResidues(f"requested {n} residue classes but the residue field has {self.residue_size}")
        return [self.coerce(i) for i in range(n)]

    def sqrt(self, x):
        """Exact square root in the field or None."""
        raise NotImplementedError

    def parse(self, data):
        raise NotImplementedError

    def format(self, x):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, ValuedField) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(repr(sorted(self.to_json().items(), key=lambda kv: kv[0])))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"

    def random_element(self, rng, min_val: int = -2, max_val: int = 4, terms: int = 3):
        """A random element with small valuation spread, for tests and experiments."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class RationalPadic(ValuedField):
    p: int
    kind = "rational-padic"
    rank = 1

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def residue_size(self):
        return self.p

    def coerce(self, x):
        return Fraction(x)

    def valuation(self, x) -> ValueElement:
        if x == 0:
            return vbottom(1)
        return ValueElement((vp_fraction(Fraction(x), self.p),))

    def canonical_center(self, x, rho: ValueElement):
        if rho.bottom:
            return Fraction(x)
        return truncate_padic(Fraction(x), self.p, rho.coords[0])

    def element_of_valuation(self, value: ValueElement):
        k = value.coords[0]
        if k.denominator != 1:
            raise ValueError(f"{value} is not attained in this field")
        return Fraction(self.p) ** int(k)

    def sqrt(self, x):
        return coeff_sqrt(Fraction(x), 0)

    def parse(self, data):
        if isinstance(data, int) and not isinstance(data, bool):
            return Fraction(data)
        if not isinstance(data, str):
            raise ValueError(f"expected a rational string, got {data!r}")
        val = _parse_expr(data, Fraction, None)
        return Fraction(val)

    def format(self, x) -> str:
        return _fmt_frac(Fraction(x))

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p}

    def random_element(self, rng, min_val=-2, max_val=4, terms=3):
        if rng.random() < 0.05:
            return Fraction(0)
        v = rng.randint(min_val, max_val)
        x = Fraction(0)
        for k in range(terms):
            digit = rng.randrange(1 if k == 0 else 0, self.p)
            x += digit * Fraction(self.p) ** (v + k)
        if rng.random() < 0.5:
            x = -x
        if rng.random() < 0.3:
            x /= rng.choice([q for q in range(1, 8) if q % self.p])
        return x


class _TFieldBase(ValuedField):
    """Shared plumbing for fields whose elements are RatFunc in t."""

    modulus: int

    def coerce(self, x):
        if isinstance(x, RatFunc):
            return x
        return RatFunc(Poly.constant(x, self.modulus), _reduced=True)

    def is_constant(self, x) -> bool:
        # the prime field is algebraically closed in k(t)
        x = self.coerce(x)
        return x.num.degree <= 0 and x.den.degree <= 0

    @property
    def t(self) -> RatFunc:
        return RatFunc(Poly.monomial(1, 1, self.modulus), _reduced=True)

    def monomial(self, degree: int, coeff=1) -> RatFunc:
        if degree >= 0:
            return RatFunc(Poly.monomial(degree, coeff, self.modulus), _reduced=True)
        return RatFunc(Poly.constant(coeff, self.modulus), Poly.monomial(-degree, 1, self.modulus))

    def laurent_coeffs(self, x: RatFunc, upto: int):
        """Return (start, coeffs) with x = sum coeffs[i] t^(start+i) + O(t^upto)."""
        return self._laurent_pair(x.num, x.den, upto)

    def _laurent_pair(self, num: Poly, den: Poly, upto: int):
        """Laurent expansion of num/den for polynomials that need not be coprime."""
        num_order = num.order()
        den_order = den.order()
        start = num_order - den_order
        n_terms = upto - start
        if n_terms <= 0:
            return start, []
        nc = num.coeffs[num_order:]
        uc = den.coeffs[den_order:]
        m = self.modulus
        inv_u0 = pow(uc[0], -1, m) if m else 1 / uc[0]
        out = []
        for k in range(n_terms):
            acc = nc[k] if k < len(nc) else 0
            for j in range(1, min(k, len(uc) - 1) + 1):
                acc -= uc[j] * out[k - j]
            acc = acc * inv_u0
            if m:
                acc %= m
            out.append(acc)
        return start, out

    def _pair(self, num, den):
        num, den = self.coerce(num), self.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("quotient by zero")
        return num.num * den.den, num.den * den.num

    def quotient_center(self, num, den, rho: ValueElement):
        if self.coerce(num).is_zero():
            return self.zero
        p, q = self._pair(num, den)
        return self._truncate_pair(p, q, rho)

    def canonical_center(self, x, rho: ValueElement):
        x = self.coerce(x)
        if rho.bottom or x.is_zero():
            return x
        return self._truncate_pair(x.num, x.den, rho)

    def series_truncate(self, x: RatFunc, upto_exclusive: int) -> RatFunc:
        """Sum of the terms of degree < upto_exclusive of x's Laurent expansion."""
        if x.is_zero():
            return x
        start, coeffs = self.laurent_coeffs(x, upto_exclusive)
        return self._from_laurent(start, coeffs)

    def _from_laurent(self, start: int, coeffs) -> RatFunc:
        if not coeffs:
            return self.zero
        poly = Poly(list(coeffs), self.modulus)
        if poly.is_zero():
            return self.zero
        if start >= 0:
            return RatFunc(poly.shift(start), _reduced=True)
        poly_order = poly.order()
        # divide by t^-start, cancelling powers of t already present
        cancel = min(poly_order, -start)
        poly = poly.shift(-cancel)
        den_deg = -start - cancel
        if den_deg == 0:
            return RatFunc(poly, _reduced=True)
        return RatFunc(poly, Poly.monomial(den_deg, 1, self.modulus), _reduced=True)

    def sqrt(self, x):
        if x.is_zero():
            return x
        rn = poly_sqrt(x.num)
        if rn is None:
            return None
        rd = poly_sqrt(x.den)
        if rd is None:
            return None
        return RatFunc(rn, rd)

    def parse(self, data):
        if isinstance(data, int) and not isinstance(data, bool):
            return self.coerce(data)
        if not isinstance(data, str):
            raise ValueError(f"expected an element string, got {data!r}")
        val = _parse_expr(data, self.coerce, lambda: self.t)
        return self.coerce(val)

    def _fmt_coeff(self, c):
        return str(c) if self.modulus else _fmt_frac(c)

    def _fmt_poly(self, poly: Poly) -> str:
        if poly.is_zero():
            return "0"
        parts = []
        for deg, c in enumerate(poly.coeffs):
            if c == 0:
                continue
            neg = (not self.modulus) and c < 0
            mag = -c if neg else c
            if deg == 0:
                body = self._fmt_coeff(mag)
            elif mag == 1:
                body = f"t^{deg}"
            else:
                body = f"{self._fmt_coeff(mag)}*t^{deg}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("-" if neg else "+") + body)
        return "".join(parts)

    def format(self, x) -> str:
        x = self.coerce(x)
        if x.den.is_one():
            return self._fmt_poly(x.num)
        return f"({self._fmt_poly(x.num)})/({self._fmt_poly(x.den)})"

    def _random_poly_elt(self, rng, min_val, max_val, terms, coeff):
        if rng.random() < 0.05:
            return self.zero
        v = rng.randint(min_val, max_val)
        cs = [coeff(rng, k == 0) for k in range(terms)]
        x = self._from_laurent(v, cs)
        if rng.random() < 0.25:
            # a unit denominator keeps the valuation but exercises reduction
            x = x / (self.one + self.t * self.coerce(rng.randint(1, 3)))
        return x


@dataclass(frozen=True, eq=False)
class FuncFieldTadic(_TFieldBase):
    """Q(t) or F_p(t) with the t-adic valuation (rank one)."""

    base_p: int = 0  # 0 means the base field is Q
    kind = "funcfield-tadic"
    rank = 1

    @property
    def modulus(self) -> int:
        return self.base_p

    @property
    def residue_size(self):
        return self.base_p if self.base_p else "infinite"

    def residue_representatives(self, n: int) -> list:
        if self.base_p and n > self.base_p:
            raise TooFewResidues(f"requested {n} residue classes but the residue field has {self.base_p}")
        return [self.coerce(i) for i in range(n)]

    def valuation(self, x) -> ValueElement:
        x = self.coerce(x)
        if x.is_zero():
            return vbottom(1)
        return ValueElement((x.order(),))

    def _truncate_pair(self, num: Poly, den: Poly, rho: ValueElement) -> RatFunc:
        start, coeffs = self._laurent_pair(num, den, ceil(rho.coords[0]))
        return self._from_laurent(start, coeffs)

    def element_of_valuation(self, value: ValueElement):
        k = value.coords[0]
        if k.denominator != 1:
            raise ValueError(f"{value} is not attained in this field")
        return self.monomial(int(k))

    def to_json(self) -> dict:
        if self.base_p:
            return {"kind": self.kind, "base": "F_p", "p": self.base_p}
        return {"kind": self.kind, "base": "Q"}

    def random_element(self, rng, min_val=-2, max_val=4, terms=3):
        m = self.base_p
        if m:
            terms = max(terms, 6)  # small residue fields need longer expansions for variety

        def coeff(r, first):
            if m:
                return r.randrange(1 if first else 0, m)
            c = Fraction(r.randint(-3, 3), r.randint(1, 3))
            return c if (c != 0 or not first) else Fraction(1)

        return self._random_poly_elt(rng, min_val, max_val, terms, coeff)


@dataclass(frozen=True, eq=False)
class Rank2Composite(_TFieldBase):
    """Q(t) with v(x) = (ord_t x, v_p of the lowest t-coefficient)."""

    p: int = 3
    kind = "rank2-composite"
    rank = 2
    modulus = 0

    @property
    def residue_size(self):
        return self.p

    def valuation(self, x) -> ValueElement:
        x = self.coerce(x)
        if x.is_zero():
            return vbottom(2)
        k = x.order()
        lead = x.num.coeffs[x.num.order()] / x.den.coeffs[x.den.order()]
        return ValueElement((k, vp_fraction(lead, self.p)))

    def _truncate_pair(self, num: Poly, den: Poly, rho: ValueElement) -> RatFunc:
        r1, r2 = rho.coords
        if r1.denominator != 1:
            start, coeffs = self._laurent_pair(num, den, ceil(r1))
            return self._from_laurent(start, coeffs)
        r1 = int(r1)
        start, coeffs = self._laurent_pair(num, den, r1 + 1)
        if coeffs and start <= r1:
            coeffs = list(coeffs)
            coeffs[-1] = truncate_padic(Fraction(coeffs[-1]), self.p, r2)
        return self._from_laurent(start, coeffs)

    def element_of_valuation(self, value: ValueElement):
        k, j = value.coords
        if k.denominator != 1 or j.denominator != 1:
            raise ValueError(f"{value} is not attained in this field")
        return self.monomial(int(k), Fraction(self.p) ** int(j))

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p}

    def random_element(self, rng, min_val=-2, max_val=3, terms=3):
        p = self.p

        def coeff(r, first):
            if not first and r.random() < 0.3:
                return Fraction(0)
            num = r.choice([1, 2, 4, 5, 7]) * p ** r.randint(0, 2)
            den = r.choice([1, 2, 5]) * p ** r.randint(0, 1)
            return Fraction(num * r.choice([1, -1]), den)

        return self._random_poly_elt(rng, min_val, max_val, terms, coeff)


class QuadElt:
    """a + b*sqrt(pi) over a base field; pi is carried for arithmetic."""

    __slots__ = ("a", "b", "pi", "_hash")

    def __init__(self, a, b, pi):
        self.a = a
        self.b = b
        self.pi = pi
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, QuadElt):
            return other
        return QuadElt(self.a * 0 + other, self.a * 0, self.pi)

    def __eq__(self, other):
        if not isinstance(other, QuadElt):
            if isinstance(other, (int, Fraction)):
                other = self._coerce(other)
            else:
                return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b))
        return self._hash

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElt(self.a + o.a, self.b + o.b, self.pi)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(-self.a, -self.b, self.pi)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadElt(self.a * o.a + self.b * o.b * self.pi, self.a * o.b + self.b * o.a, self.pi)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.pi * self.b * self.b

    def conjugate(self):
        return QuadElt(self.a, -self.b, self.pi)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElt(self.a / n, -self.b / n, self.pi)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self._coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a != 0 or self.b != 0)

    def __repr__(self):
        return f"QuadElt({self.a!r}, {self.b!r})"


@dataclass(frozen=True, eq=False)
class QuadExt(ValuedField):
    """K(sqrt(pi)) for a ramifier pi whose valuation is not divisible by 2."""

    base: ValuedField
    ramifier: Any
    kind = "quad-ext"

    def __post_init__(self):
        pi = self.base.coerce(self.ramifier)
        object.__setattr__(self, "ramifier", pi)
        vpi = self.base.valuation(pi)
        if vpi.bottom or (vpi / 2).is_integral():
            raise ValueError("the ramifier must have a valuation outside 2 * lattice")

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def residue_size(self):
        return self.base.residue_size

    @property
    def half_pi(self) -> ValueElement:
        return self.base.valuation(self.ramifier) / 2

    @property
    def sqrt_pi(self) -> QuadElt:
        return QuadElt(self.base.zero, self.base.one, self.ramifier)

    def coerce(self, x):
        if isinstance(x, QuadElt):
            return x
        return QuadElt(self.base.coerce(x), self.base.zero, self.ramifier)

    def is_constant(self, x) -> bool:
        x = self.coerce(x)
        if not (self.base.is_constant(x.a) and self.base.is_constant(x.b)):
            return False
        return self.base.is_zero(x.b) or self.base.is_constant(self.ramifier)

    def make(self, a, b) -> QuadElt:
        return QuadElt(self.base.coerce(a), self.base.coerce(b), self.ramifier)

    def valuation(self, x) -> ValueElement:
        x = self.coerce(x)
        va = self.base.valuation(x.a)
        vb = self.base.valuation(x.b)
        if vb.bottom:
            return va
        return min(va, vb + self.half_pi)

    def canonical_center(self, x, rho: ValueElement):
        x = self.coerce(x)
        if rho.bottom:
            return x
        return QuadElt(
            self.base.canonical_center(x.a, rho),
            self.base.canonical_center(x.b, rho - self.half_pi),
            self.ramifier,
        )

    def in_lattice(self, value: ValueElement) -> bool:
        return value.bottom or value.is_integral() or (value - self.half_pi).is_integral()

    def lattice_step(self) -> ValueElement:
        half = ValueElement(tuple([0] * (self.rank - 1) + [Fraction(1, 2)]))
        return half if self.in_lattice(half) else self.base.lattice_step()

    def element_of_valuation(self, value: ValueElement):
        if value.is_integral():
            return self.coerce(self.base.element_of_valuation(value))
        rest = value - self.half_pi
        return QuadElt(self.base.zero, self.base.element_of_valuation(rest), self.ramifier)

    def residue_representatives(self, n: int) -> list:
        return [self.coerce(x) for x in self.base.residue_representatives(n)]

    def sqrt(self, x):
        x = self.coerce(x)
        B = self.base
        if x.b == 0:
            r = B.sqrt(x.a)
            if r is not None:
                return QuadElt(r, B.zero, self.ramifier)
            r = B.sqrt(x.a / self.ramifier)
            if r is not None:
                return QuadElt(B.zero, r, self.ramifier)
            return None
        # (u + w s)^2 = u^2 + pi w^2 + 2uw s
        disc = B.sqrt(x.a * x.a - self.ramifier * x.b * x.b)
        if disc is None:
            return None
        for sign in (1, -1):
            u = B.sqrt((x.a + disc * sign) / 2)
            if u is None or u == 0:
                continue
            w = x.b / (u * 2)
            cand = QuadElt(u, w, self.ramifier)
            if cand * cand == x:
                return cand
        return None

    def parse(self, data):
        if isinstance(data, (list, tuple)) and len(data) == 2:
            return QuadElt(self.base.parse(data[0]), self.base.parse(data[1]), self.ramifier)
        return self.coerce(self.base.parse(data))

    def format(self, x):
        x = self.coerce(x)
        return [self.base.format(x.a), self.base.format(x.b)]

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json(), "ramifier": self.base.format(self.ramifier)}

    def random_element(self, rng, min_val=-2, max_val=4, terms=3):
        a = self.base.random_element(rng, min_val, max_val, terms)
        b = self.base.random_element(rng, min_val, max_val, terms) if rng.random() < 0.7 else self.base.zero
        return QuadElt(a, b, self.ramifier)


def make_field(spec) -> ValuedField:
    """Build a field from its JSON description."""
    if isinstance(spec, ValuedField):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"malformed field spec: {spec!r}")
    kind = spec["kind"]
    if kind == "rational-padic":
        return RationalPadic(int(spec["p"]))
    if kind == "rank2-composite":
        return Rank2Composite(int(spec.get("p", 3)))
    if kind == "funcfield-tadic":
        base = spec.get("base", "Q")
        if base == "Q":
            return FuncFieldTadic(0)
        if base == "F_p":
            return FuncFieldTadic(int(spec["p"]))
        if isinstance(base, str) and base.startswith("F_"):
            return FuncFieldTadic(int(base[2:]))
        raise ValueError(f"unknown base field {base!r}")
    if kind == "quad-ext":
        base = make_field(spec["base"])
        return QuadExt(base, base.parse(spec["ramifier"]))
    raise ValueError(f"unknown field kind {kind!r}")
