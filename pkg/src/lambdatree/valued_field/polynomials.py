"""Dense univariate polynomials and reduced rational functions in t.

Coefficients live in Q (``modulus == 0``, stored as Fraction) or in F_p
(``modulus == p``, stored as ints in 0..p-1).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence


def _norm_coeff(c, modulus: int):
    if modulus:
        if isinstance(c, Fraction):
            return (c.numerator * pow(c.denominator, -1, modulus)) % modulus
        return int(c) % modulus
    return Fraction(c)


def _inv_coeff(c, modulus: int):
    if modulus:
        return pow(c, -1, modulus)
    return 1 / c


class Poly:
    """Polynomial with coefficients listed from degree 0 upwards."""

    __slots__ = ("coeffs", "modulus", "_hash")

    def __init__(self, coeffs: Sequence, modulus: int = 0, _normalized: bool = False):
        if not _normalized:
            coeffs = [_norm_coeff(c, modulus) for c in coeffs]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.modulus = modulus
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list, modulus: int) -> "Poly":
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(coeffs, modulus, _normalized=True)

    @classmethod
    def constant(cls, c, modulus: int = 0) -> "Poly":
        return cls([c], modulus)

    @classmethod
    def monomial(cls, degree: int, c=1, modulus: int = 0) -> "Poly":
        return cls([0] * degree + [c], modulus)

    # basic structure
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def lead(self):
        return self.coeffs[-1]

    def order(self) -> int:
        """Lowest degree with nonzero coefficient (the t-adic order)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ValueError("zero polynomial has no order")

    def is_monomial(self) -> bool:
        return bool(self.coeffs) and all(c == 0 for c in self.coeffs[:-1])

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs and self.modulus == other.modulus

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.coeffs, self.modulus))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r}, modulus={self.modulus})"

    # arithmetic
    def _fix(self, c):
        return _norm_coeff(c, self.modulus)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        if self.modulus:
            out = [c % self.modulus for c in out]
        return Poly._raw(out, self.modulus)

    def __neg__(self) -> "Poly":
        if self.modulus:
            return Poly._raw([(-c) % self.modulus for c in self.coeffs], self.modulus)
        return Poly._raw([-c for c in self.coeffs], self.modulus)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([], self.modulus)
        if len(b) == 1:
            return self.scale(b[0])
        if len(a) == 1:
            return other.scale(a[0])
        if self.modulus:
            out = _int_convolve(a, b)
            return Poly._raw([c % self.modulus for c in out], self.modulus)
        # clear denominators so the quadratic loop runs on Python ints
        da, ia = _integerize(a)
        db, ib = _integerize(b)
        out = _int_convolve(ia, ib)
        den = da * db
        return Poly._raw([Fraction(c, den) for c in out], 0)

    def scale(self, c) -> "Poly":
        c = self._fix(c)
        if c == 0:
            return Poly._raw([], self.modulus)
        if self.modulus:
            return Poly._raw([(x * c) % self.modulus for x in self.coeffs], self.modulus)
        return Poly._raw([x * c for x in self.coeffs], self.modulus)

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k (k >= 0) or divide exactly by t^-k."""
        if self.is_zero():
            return self
        if k >= 0:
            return Poly._raw([0] * k + list(self.coeffs), self.modulus)
        if self.order() < -k:
            raise ValueError("inexact shift")
        return Poly._raw(list(self.coeffs[-k:]), self.modulus)

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = _inv_coeff(other.lead(), self.modulus)
        if len(rem) - 1 < db:
            return Poly._raw([], self.modulus), self
        quot = [0] * (len(rem) - db)
        bc = other.coeffs
        m = self.modulus
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv_lead
            if m:
                c %= m
            quot[k] = c
            if c != 0:
                for j, y in enumerate(bc):
                    rem[k + j] -= c * y
                    if m:
                        rem[k + j] %= m
        return Poly._raw(quot, m), Poly._raw(rem[:db], m)

    def monic(self) -> "Poly":
        return self.scale(_inv_coeff(self.lead(), self.modulus))

    def content_primitive(self):
        """Over Q: split into (positive rational content, primitive integer polynomial)."""
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        return Fraction(g, den), Poly._raw([Fraction(c // g) for c in ints], 0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.modulus)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.constant(1, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def _integerize(coeffs):
    """(d, ints) with coeffs[i] = ints[i] / d."""
    d = 1
    for c in coeffs:
        q = c.denominator
        if q != 1 and d % q:
            d = d * q // gcd(d, q)
    if d == 1:
        return 1, [c.numerator for c in coeffs]
    return d, [c.numerator * (d // c.denominator) for c in coeffs]


def _int_convolve(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd.  Over Q uses primitive remainders to keep coefficients small."""
    m = a.modulus
    if a.is_zero():
        return b.monic() if not b.is_zero() else b
    if b.is_zero():
        return a.monic()
    # cheap special cases: constants and monomials
    if a.degree == 0 or b.degree == 0:
        return Poly.constant(1, m)
    if a.is_monomial() or b.is_monomial():
        k = min(a.order(), b.order())
        return Poly.monomial(k, 1, m)
    k = min(a.order(), b.order())
    a = a.shift(-a.order())
    b = b.shift(-b.order())
    if m == 0:
        a = a.content_primitive()[1]
        b = b.content_primitive()[1]
    while not b.is_zero():
        r = a.divmod(b)[1]
        if m == 0 and not r.is_zero():
            r = r.content_primitive()[1]
        a, b = b, r
    return a.monic().shift(k)


def poly_sqrt(a: Poly):
    """Exact square root of a polynomial, or None when it is not a square."""
    m = a.modulus
    if a.is_zero():
        return a
    if a.degree % 2:
        return None
    lead_root = coeff_sqrt(a.lead(), m)
    if lead_root is None:
        return None
    n = a.degree // 2
    # solve for root coefficients from the top down
    root = [0] * (n + 1)
    root[n] = lead_root
    two_lead_inv = _inv_coeff(_norm_coeff(2 * lead_root, m), m) if (m != 2) else None
    if m == 2:
        # in characteristic 2 squares only have even-degree terms
        coeffs = a.coeffs
        if any(coeffs[i] for i in range(1, len(coeffs), 2)):
            return None
        cand = Poly([coeffs[i] for i in range(0, len(coeffs), 2)], m)
        return cand if cand * cand == a else None
    for k in range(n - 1, -1, -1):
        # coefficient of t^(n+k) in root^2
        acc = a.coeffs[n + k]
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                acc -= root[i] * root[j]
        if m:
            acc %= m
        root[k] = _norm_coeff(acc * two_lead_inv, m)
    cand = Poly(root, m)
    return cand if cand * cand == a else None


def coeff_sqrt(c, modulus: int):
    """Square root of a coefficient in Q or F_p, or None."""
    if modulus:
        c %= modulus
        for r in range(modulus):
            if (r * r - c) % modulus == 0:
                return r
        return None
    c = Fraction(c)
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class RatFunc:
    """A reduced quotient num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced: bool = False):
        if den is None:
            den = Poly.constant(1, num.modulus)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.constant(1, num.modulus)
            else:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
                lc = den.lead()
                if lc != 1:
                    inv = _inv_coeff(lc, num.modulus)
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def modulus(self) -> int:
        return self.num.modulus

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.constant(other, self.modulus), _reduced=True)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def _t_power(self) -> int:
        """k when the denominator is t^k, else -1."""
        c = self.den.coeffs
        if c[-1] == 1 and not any(c[:-1]):
            return len(c) - 1
        return -1

    @classmethod
    def _over_t_power(cls, num: Poly, k: int) -> "RatFunc":
        # num / t^k, cancelling common powers of t
        m = num.modulus
        if num.is_zero():
            return cls(num, Poly.constant(1, m), _reduced=True)
        s = min(num.order(), k)
        if s:
            num = Poly._raw(list(num.coeffs[s:]), m)
        return cls(num, Poly.monomial(k - s, 1, m), _reduced=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den, _reduced=self.den.is_one())
        a, b = self._t_power(), other._t_power()
        if a >= 0 and b >= 0:
            # Laurent polynomials: shift to the common power of t
            k = max(a, b)
            m = self.modulus
            x = Poly._raw([0] * (k - a) + list(self.num.coeffs), m)
            y = Poly._raw([0] * (k - b) + list(other.num.coeffs), m)
            return RatFunc._over_t_power(x + y, k)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, self.den, _reduced=True)
        a, b = self._t_power(), other._t_power()
        if a >= 0 and b >= 0:
            return RatFunc._over_t_power(self.num * other.num, a + b)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def order(self) -> int:
        """t-adic order; raises on zero."""
        return self.num.order() - self.den.order()

    def __repr__(self) -> str:
        return f"RatFunc({self.num.coeffs!r}/{self.den.coeffs!r})"
