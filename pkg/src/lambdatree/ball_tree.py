"""Closed balls of a valued field as points of a Lambda-tree.

Radii are additive: the ball B(c, r) is {z : v(z - c) >= r}.  Larger r means
a smaller ball.  A ball stores the canonical center for its radius, so two
balls are equal exactly when they are equal as sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Iterable, Optional, Sequence

from .errors import DegeneratePair, DegenerateTriple
from .valued_field.value_group import ValueElement


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(z) -> bool:
    return z is INF


@dataclass(frozen=True)
class Ball:
    center: Any
    radius: ValueElement
    field: Any = dc_field(compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.radius.bottom:
            raise ValueError("balls must have a proper radius")
        if not self.field.in_lattice(self.radius):
            raise ValueError(f"radius {self.radius} is not attained in the field")
        object.__setattr__(self, "center", self.field.canonical_center(self.field.coerce(self.center), self.radius))

    def contains_point(self, z) -> bool:
        if z is INF:
            return False
        return self.field.valuation(z - self.center) >= self.radius

    def contains_ball(self, other: "Ball") -> bool:
        """True when ``other`` is a subset of ``self``."""
        return other.radius >= self.radius and self.contains_point(other.center)

    def disjoint(self, other: "Ball") -> bool:
        return not (self.contains_ball(other) or other.contains_ball(self))

    def sort_key(self):
        fmt = self.field.format(self.center)
        return (self.radius.coords, str(fmt))

    def label(self) -> str:
        fmt = self.field.format(self.center)
        if isinstance(fmt, list):
            fmt = "(" + ",".join(fmt) + ")"
        return f"B({fmt};{self.radius})"

    def __repr__(self) -> str:
        return self.label()

    def to_json(self) -> dict:
        return {"center": self.field.format(self.center), "radius": self.radius.to_json()}


def make_ball(field, center, radius: ValueElement) -> Ball:
    return Ball(field.coerce(center), radius, field)


def unit_ball(field) -> Ball:
    """The ball t0 = O of integral elements."""
    from .valued_field.value_group import vzero

    return Ball(field.zero, vzero(field.rank), field)


@dataclass(frozen=True)
class Region:
    """A closed ball, or the complement of an open ball together with infinity.

    For a complement, ``ball`` is the closed ball B(c, r) naming the tree
    point, and ``hole`` is the removed open ball {v(z - c) > r}, stored as the
    closed ball of the next lattice radius so that its residue disc is kept.
    """

    ball: Ball
    complement: bool = False
    hole: Optional[Ball] = None

    def __post_init__(self):
        if self.complement and self.hole is None:
            b = self.ball
            object.__setattr__(self, "hole", Ball(b.center, b.radius + b.field.lattice_step(), b.field))
        if not self.complement and self.hole is not None:
            raise ValueError("only complements have a hole")

    def contains(self, z) -> bool:
        if z is INF:
            return self.complement
        if not self.complement:
            return self.ball.contains_point(z)
        return not self.hole.contains_point(z)

    def to_json(self) -> dict:
        if not self.complement:
            return self.ball.to_json()
        return {"center": self.ball.field.format(self.hole.center), "radius": self.ball.radius.to_json(), "complement": True}


def complement_region(field, center, radius: ValueElement) -> Region:
    """{v(z - center) <= radius} together with infinity."""
    center = field.coerce(center)
    return Region(Ball(center, radius, field), True, Ball(center, radius + field.lattice_step(), field))


def contains(region, z) -> bool:
    if isinstance(region, Ball):
        return region.contains_point(z)
    return region.contains(z)


def join(b1: Ball, b2: Ball) -> Ball:
    """Smallest ball containing both."""
    f = b1.field
    r = min(b1.radius, b2.radius, f.valuation(b1.center - b2.center))
    return Ball(b1.center, r, f)


def distance(b1: Ball, b2: Ball) -> ValueElement:
    """Additive Lambda-distance: the sum of the two legs up to the join."""
    j = join(b1, b2)
    return (b1.radius - j.radius) + (b2.radius - j.radius)


def t_map(field, p1, p2, p3) -> Ball:
    """The median ball of three distinct points of the projective line."""
    pts = [p1, p2, p3]
    for i in range(3):
        for j in range(i + 1, 3):
            if _same_point(pts[i], pts[j]):
                raise DegenerateTriple("t-map needs three distinct points")
    finite = [p for p in pts if p is not INF]
    if len(finite) == 2:
        x, y = finite
        return Ball(x, field.valuation(x - y), field)
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = field.valuation(pts[i] - pts[j])
        if best is None or v > best[0]:
            best = (v, pts[i])
    return Ball(best[1], best[0], field)


def _same_point(a, b) -> bool:
    if a is INF or b is INF:
        return a is b
    return a == b


@dataclass(frozen=True)
class PathSegment:
    """The set {B(anchor, r) : lo <= r <= hi}; None marks an unbounded end."""

    anchor: Any
    lo: Optional[ValueElement]
    hi: Optional[ValueElement]
    field: Any = dc_field(compare=False, hash=False, repr=False)

    def contains(self, ball: Ball) -> bool:
        if self.lo is not None and ball.radius < self.lo:
            return False
        if self.hi is not None and ball.radius > self.hi:
            return False
        return ball.contains_point(self.anchor)

    def ball_at(self, radius: ValueElement) -> Ball:
        return Ball(self.anchor, radius, self.field)


def path_between(field, p, q) -> tuple:
    """The geodesic between two points, as one or two symbolic segments.

    For finite p, q the path is two rays from the meeting ball B(p, v(p - q))
    down to p and to q.  A path to infinity is a single segment unbounded on
    both ends.
    """
    if _same_point(p, q):
        raise DegeneratePair("path needs two distinct points")
    if q is INF:
        return (PathSegment(p, None, None, field),)
    if p is INF:
        return (PathSegment(q, None, None, field),)
    m = field.valuation(p - q)
    return (PathSegment(p, m, None, field), PathSegment(q, m, None, field))


def path_coordinate(field, p1, p2, q) -> ValueElement:
    """Additive coordinate of t(p1, p2, q) on the path from p1 to p2.

    Multiplicatively this is |q - p1| / |q - p2|, with |q - inf| read as 1.
    """
    if _same_point(p1, p2) or _same_point(p1, q) or _same_point(p2, q):
        raise DegenerateTriple("path coordinate needs three distinct points")
    if p2 is INF:
        return field.valuation(q - p1)
    if p1 is INF:
        return -field.valuation(q - p2)
    return field.valuation(q - p1) - field.valuation(q - p2)


def direction_count(ball: Ball, points: Iterable) -> int:
    """Number of directions at ``ball`` that contain points of the set.

    The upward direction holds infinity and every point outside the ball; the
    downward directions are the residue discs of the ball.
    """
    field = ball.field
    up = False
    reps = []
    for q in points:
        if q is INF or not ball.contains_point(q):
            up = True
            continue
        if not any(field.valuation(q - r) > ball.radius for r in reps):
            reps.append(q)
    return len(reps) + (1 if up else 0)


def is_vertex(ball: Ball, points: Iterable) -> bool:
    return direction_count(ball, points) >= 3


def segment_vertices(b1: Ball, b2: Ball, points: Sequence) -> list:
    """Vertices of the tree spanned by ``points`` that lie on [b1, b2], in order from b1."""
    field = b1.field
    top = join(b1, b2)
    finite = [q for q in points if q is not INF]

    def leg(b: Ball) -> list:
        radii = {b.radius, top.radius}
        for q in finite:
            v = field.valuation(q - b.center)
            if top.radius <= v <= b.radius:
                radii.add(v)
        return [Ball(b.center, r, field) for r in sorted(radii, reverse=True)]

    up = leg(b1)  # from b1 upward to the join
    down = list(reversed(leg(b2)))  # from the join down to b2
    ordered = []
    seen = set()
    for b in up + down:
        if b not in seen:
            seen.add(b)
            ordered.append(b)
    return [b for b in ordered if is_vertex(b, points)]
