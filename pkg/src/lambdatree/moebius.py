"""Moebius transformations: action on the projective line and on the tree of
balls, hyperbolicity, fixed points, stabilizer of the unit ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .ball_tree import INF, Ball, Region, complement_region, distance, unit_ball
from .errors import HenselFails, IdentityInput, NotNilpotentDistance, PoleInput
from .valued_field.hensel import hensel_fixed_root
from .valued_field.value_group import ValueElement


class Moebius:
    """z -> (a z + b) / (c z + d), stored with integral entries and one unit entry."""

    __slots__ = ("a", "b", "c", "d", "field", "_key", "_det", "_vdet")

    def __init__(self, field, a, b, c, d, normalize: bool = True):
        a, b, c, d = (field.coerce(x) for x in (a, b, c, d))
        if a * d - b * c == 0:
            raise ValueError("singular matrix")
        if normalize:
            m = min(field.valuation(x) for x in (a, b, c, d))
            if not m.is_zero():
                s = field.element_of_valuation(-m)
                a, b, c, d = a * s, b * s, c * s, d * s
        self.a, self.b, self.c, self.d = a, b, c, d
        self.field = field
        self._key = None
        self._det = None
        self._vdet = None

    @classmethod
    def identity(cls, field) -> "Moebius":
        return cls(field, 1, 0, 0, 1)

    @classmethod
    def scaling(cls, field, q) -> "Moebius":
        return cls(field, q, 0, 0, 1)

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def det(self):
        if self._det is None:
            self._det = self.a * self.d - self.b * self.c
        return self._det

    def det_valuation(self) -> ValueElement:
        if self._vdet is None:
            self._vdet = self.field.valuation(self.det())
        return self._vdet

    def trace(self):
        return self.a + self.d

    def projective_key(self) -> tuple:
        """Entries divided by the first nonzero one: equal keys iff equal in PGL2."""
        if self._key is None:
            lead = next(x for x in self.entries if x != 0)
            self._key = tuple(x / lead for x in self.entries)
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Moebius) and self.projective_key() == other.projective_key()

    def __hash__(self) -> int:
        return hash(self.projective_key())

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __matmul__(self, other: "Moebius") -> "Moebius":
        """Composition: (self @ other)(z) = self(other(z))."""
        a1, b1, c1, d1 = self.entries
        a2, b2, c2, d2 = other.entries
        return Moebius(
            self.field,
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        )

    def inverse(self) -> "Moebius":
        return Moebius(self.field, self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Moebius":
        if n < 0:
            return self.inverse() ** (-n)
        result = Moebius.identity(self.field)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __call__(self, z):
        return apply(self, z)

    def to_json(self) -> dict:
        f = self.field
        return {"a": f.format(self.a), "b": f.format(self.b), "c": f.format(self.c), "d": f.format(self.d)}

    def __repr__(self) -> str:
        f = self.field
        return "Moebius[[{}, {}], [{}, {}]]".format(*(f.format(x) for x in self.entries))


def apply(g: Moebius, z):
    if z is INF:
        return INF if g.c == 0 else g.a / g.c
    den = g.c * z + g.d
    if den == 0:
        return INF
    return (g.a * z + g.b) / den


def pole(g: Moebius):
    """The point sent to infinity."""
    if g.c == 0:
        return INF
    return -g.d / g.c


def derivative_valuation(g: Moebius, p) -> ValueElement:
    """v(g'(p)), with g'(inf) = (bc - ad) / c^2."""
    f = g.field
    if p is INF:
        if g.c == 0:
            raise PoleInput("infinity is the pole of this transformation")
        return g.det_valuation() - f.valuation(g.c) * 2
    den = g.c * p + g.d
    if den == 0:
        raise PoleInput("the point is the pole of this transformation")
    return g.det_valuation() - f.valuation(den) * 2


def infinity_in_image(g: Moebius, B: Ball) -> bool:
    """True when the pole lies in B, i.e. the image of B contains infinity."""
    if g.c == 0:
        return False
    f = g.field
    return not (f.valuation(g.c * B.center + g.d) < B.radius + f.valuation(g.c))


def act_on_region(g: Moebius, B: Ball) -> Region:
    f = g.field
    if not infinity_in_image(g, B):
        p = B.center
        radius = B.radius + derivative_valuation(g, p)
        center = f.quotient_center(g.a * p + g.b, g.c * p + g.d, radius)
        return Region(Ball(center, radius, f))
    # the image is the closed complement of an open ball around g(inf)
    radius = derivative_valuation(g, INF) - B.radius
    return complement_region(f, g.a / g.c, radius)


def act_on_tree(g: Moebius, B: Ball) -> Ball:
    return act_on_region(g, B).ball


def varpi(g: Moebius):
    return g.trace() * g.trace() / g.det()


@dataclass(frozen=True)
class FixedPoint:
    point: Any
    exact: bool
    precision: Optional[ValueElement]  # None when exact
    attracting: Optional[bool]  # None when neither attracts


@dataclass(frozen=True)
class Classification:
    kind: str  # "hyperbolic" | "finite-order-candidate" | "non-hyperbolic-infinite"
    varpi: Any
    multiplier_valuation: Optional[ValueElement]
    fixed_points: tuple

    @property
    def hyperbolic(self) -> bool:
        return self.kind == "hyperbolic"

    def attracting(self):
        for fp in self.fixed_points:
            if fp.attracting:
                return fp
        return None

    def repelling(self):
        for fp in self.fixed_points:
            if fp.attracting is False:
                return fp
        return None


FINITE_ORDER_SEARCH = 12


def _fixed_points(g: Moebius, precision: ValueElement, hyperbolic: bool) -> tuple:
    f = g.field
    a, b, c, d = g.entries
    if c == 0:
        lam_inf, lam_fin = a, d  # eigenvalue attached to infinity and to the finite point
        pts = [(INF, lam_inf)]
        if a != d:
            pts.append((b / (d - a), lam_fin))
        return _tag(f, pts, hyperbolic, exact=True)
    tr, det = g.trace(), g.det()
    root = f.sqrt(tr * tr - det * 4)
    if root is not None:
        lams = [(tr + root) / 2, (tr - root) / 2]
        pts = [((lam - d) / c, lam) for lam in dict.fromkeys(lams)]
        return _tag(f, pts, hyperbolic, exact=True)
    if not hyperbolic:
        return ()
    # eigenvalues: the small root of x^2 - tr x + det, and tr minus it
    shift = f.valuation(c)
    h = hensel_fixed_root(f, tr, det, precision + shift)
    got = h.precision - shift
    att = f.quotient_center(h.cofactor - d, c, got)
    rep = f.quotient_center(h.root - d, c, got)
    return (FixedPoint(att, False, got, True), FixedPoint(rep, False, got, False))


def _tag(f, pts, hyperbolic, exact):
    if len(pts) == 2 and hyperbolic:
        (z1, l1), (z2, l2) = pts
        first_attracts = f.valuation(l1) < f.valuation(l2)
        out = [FixedPoint(z1, True, None, first_attracts), FixedPoint(z2, True, None, not first_attracts)]
        out.sort(key=lambda fp: not fp.attracting)
        return tuple(out)
    return tuple(FixedPoint(z, True, None, None) for z, _ in pts)


def _finite_order(f, w) -> bool:
    """Whether g^n is scalar for some 2 <= n <= FINITE_ORDER_SEARCH, from varpi alone.

    With s = tr and d = det, g^n = a_n g + b_n with a_1 = 1, a_2 = s and
    a_(n+1) = s a_n - d a_(n-1).  For s != 0, a_n = s^(n-1) P_n(d / s^2) where
    P_1 = P_2 = 1 and P_(n+1) = P_n - y P_(n-1), so only y = 1 / varpi is needed.
    """
    # P_n has integer coefficients, so a root is algebraic over the prime field
    if not f.is_constant(w):
        return False
    y = f.one / w
    prev, cur = f.one, f.one
    for _ in range(2, FINITE_ORDER_SEARCH):
        if f.is_zero(cur):
            return True
        prev, cur = cur, cur - y * prev
    return f.is_zero(cur)


def classify(g: Moebius, precision: Optional[ValueElement] = None) -> Classification:
    """Hyperbolic iff varpi != 0 and 1/varpi is a microbe; fixed points attracting first."""
    if g.is_identity():
        raise IdentityInput("the identity has no classification")
    f = g.field
    if precision is None:
        precision = ValueElement(tuple([16] + [0] * (f.rank - 1)))
    w = varpi(g)
    if w == 0:
        return Classification("finite-order-candidate", w, None, _fixed_points(g, precision, False))
    mult = -f.valuation(w)
    if mult.is_top_nilpotent():
        return Classification("hyperbolic", w, mult, _fixed_points(g, precision, True))
    kind = "finite-order-candidate" if _finite_order(f, w) else "non-hyperbolic-infinite"
    return Classification(kind, w, None, _fixed_points(g, precision, False))


def is_hyperbolic(g: Moebius) -> bool:
    w = varpi(g)
    return w != 0 and (-g.field.valuation(w)).is_top_nilpotent()


def multiplier_valuation(g: Moebius) -> ValueElement:
    return -g.field.valuation(varpi(g))


def hyperbolic_from_balls(B: Ball, B2: Ball, q=None) -> Moebius:
    """A hyperbolic transformation sending B to B2 on the tree, with multiplier q.

    For disjoint balls the pole is placed inside B, so the open complement of
    B is mapped into B2.
    """
    f = B.field
    d = distance(B, B2)
    if d.is_zero() or not d.is_top_nilpotent():
        raise NotNilpotentDistance(f"distance {d} has no top-nilpotent inverse")
    if q is None:
        q = f.element_of_valuation(d)
    q = f.coerce(q)
    if f.valuation(q) != d:
        raise ValueError(f"multiplier has valuation {f.valuation(q)}, expected {d}")
    c, c2 = B.center, B2.center
    if B.contains_ball(B2):
        return Moebius(f, q, c2 - q * c2, 0, 1)
    if B2.contains_ball(B):
        return Moebius(f, 1, c * q - c, 0, q)
    # tau(z) = (z - c2)/(z - c); gamma = tau^-1 mu_q tau
    tau = Moebius(f, 1, -c2, 1, -c)
    return tau.inverse() @ Moebius.scaling(f, q) @ tau


def stabilizes_t0(g: Moebius) -> bool:
    """Membership in PGL2 of the valuation ring: integral entries, unit determinant."""
    f = g.field
    if any(not (f.valuation(x) >= f.valuation(f.one)) for x in g.entries):
        return False
    return f.valuation(g.det()).is_zero()


def t0(field) -> Ball:
    return unit_ball(field)


@dataclass(frozen=True)
class OrbitReport:
    points: tuple  # (exponent, point) pairs
    pairwise_valuations: tuple  # sorted distinct v(x - y) over distinct finite pairs
    all_pairwise_equal: bool
    separation: Optional[ValueElement]  # largest pairwise valuation, a uniform lower bound on |x - y|
    hyperbolic: bool
    convergence: tuple  # for hyperbolic maps: (exponent, v(x - attracting fixed point)) pairs

    def residue_disc_counts(self, field, radius: ValueElement) -> dict:
        counts = {}
        for _, z in self.points:
            if z is INF:
                key = "inf"
            else:
                key = field.format(field.canonical_center(z, radius))
                key = str(key)
            counts[key] = counts.get(key, 0) + 1
        return counts


def orbit_report(g: Moebius, p, n: int, two_sided: bool = True) -> OrbitReport:
    """Sample the orbit {g^k(p)} for |k| <= n (or 0 <= k < n when one-sided)."""
    f = g.field
    exps = list(range(-n, n + 1)) if two_sided else list(range(n))
    pts = []
    inv = g.inverse()
    fwd, back = p, p
    cache = {0: p}
    for k in range(1, max(exps) + 1 if exps and max(exps) > 0 else 1):
        fwd = apply(g, fwd)
        cache[k] = fwd
    for k in range(1, -min(exps) + 1 if exps and min(exps) < 0 else 1):
        back = apply(inv, back)
        cache[-k] = back
    pts = [(k, cache[k]) for k in exps]
    finite = [z for _, z in pts if z is not INF]
    vals = set()
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            if finite[i] != finite[j]:
                vals.add(f.valuation(finite[i] - finite[j]))
    vals = tuple(sorted(vals))
    hyper = (not g.is_identity()) and is_hyperbolic(g)
    conv = ()
    if hyper:
        att = classify(g).attracting()
        if att is not None and att.exact:
            conv = tuple(
                (k, f.valuation(z - att.point) if (z is not INF and att.point is not INF) else None)
                for k, z in pts
            )
    return OrbitReport(
        points=tuple(pts),
        pairwise_valuations=vals,
        all_pairwise_equal=len(vals) <= 1,
        separation=vals[-1] if vals else None,
        hyperbolic=hyper,
        convergence=conv,
    )
