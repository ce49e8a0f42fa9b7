"""The finite simplicial tree T(L) spanned by a finite set L of projective points.

Vertices are the median balls t(p, q, r) of triples of L; two vertices are
joined by an edge when no other vertex lies between them.  The production
construction inserts points one at a time; ``build_tree_batch`` is the slow
reference built straight from the triple definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Any, Iterable, Optional, Sequence

from .ball_tree import INF, Ball, distance, join
from .errors import DuplicatePoint, NotNested, TooFewPoints, UnknownVertex
from .valued_field.value_group import ValueElement


@dataclass(frozen=True)
class Edge:
    u: Ball
    v: Ball
    weight: ValueElement

    @staticmethod
    def make(a: Ball, b: Ball) -> "Edge":
        if b.sort_key() < a.sort_key():
            a, b = b, a
        return Edge(a, b, distance(a, b))

    def other(self, x: Ball) -> Ball:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class SimplicialTree:
    vertices: frozenset
    edges: frozenset
    field: Any = dc_field(compare=False, hash=False, repr=False)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        return adj

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, key=Ball.sort_key)

    def sorted_edges(self) -> list:
        return sorted(self.edges, key=lambda e: (e.u.sort_key(), e.v.sort_key()))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for e in adj[x]:
                y = e.other(x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == max(len(self.vertices) - 1, 0)

    def to_json(self) -> dict:
        verts = self.sorted_vertices()
        index = {v: i for i, v in enumerate(verts)}
        return {
            "vertices": [v.to_json() for v in verts],
            "edges": [[index[e.u], index[e.v], e.weight.to_json()] for e in self.sorted_edges()],
        }


def canonical_points(field, points: Iterable) -> list:
    """Deduplicate and order points deterministically (infinity last)."""
    seen = {}
    for p in points:
        key = "inf" if p is INF else p
        seen.setdefault(key, p)
    finite = [p for k, p in seen.items() if k != "inf"]
    finite.sort(key=lambda p: str(field.format(p)))
    return finite + ([INF] if "inf" in seen else [])


def _finite_join(field, finite: Sequence) -> Ball:
    top = Ball(finite[0], field.valuation(finite[0] - finite[1]), field)
    for q in finite[2:]:
        if not top.contains_point(q):
            top = Ball(top.center, field.valuation(q - top.center), field)
    return top


def attachment_ball(field, points: Sequence, p, top: Optional[Ball] = None) -> Ball:
    """Where the path from p first meets the convex hull of ``points``.

    ``top`` is the join of the finite points, when the caller already has it.
    """
    finite = [q for q in points if q is not INF]
    has_inf = any(q is INF for q in points)
    if top is None:
        top = _finite_join(field, finite)
    if p is INF:
        return top
    m = max(field.valuation(p - q) for q in finite)
    x = Ball(p, m, field)
    if has_inf or top.contains_ball(x):
        return x
    return top


def _on_segment(a: Ball, x: Ball, b: Ball) -> bool:
    return distance(a, x) + distance(x, b) == distance(a, b)


def insert_point(tree: Optional[SimplicialTree], points: Sequence, p, field=None, top: Optional[Ball] = None) -> SimplicialTree:
    """T(L + {p}) from T(L): at most one new vertex, splitting an edge or extending a leaf."""
    field = field or (tree.field if tree is not None else None)
    if any((q is INF and p is INF) or (q is not INF and p is not INF and q == p) for q in points):
        raise DuplicatePoint(f"{p!r} is already in the point set")
    if len(points) < 2:
        raise TooFewPoints("insertion needs at least two existing points")
    if len(points) == 2:
        from .ball_tree import t_map

        return SimplicialTree(frozenset([t_map(field, points[0], points[1], p)]), frozenset(), field)
    x = attachment_ball(field, points, p, top)
    if x in tree.vertices:
        return tree
    for e in tree.edges:
        if _on_segment(e.u, x, e.v):
            edges = set(tree.edges)
            edges.discard(e)
            edges.add(Edge.make(e.u, x))
            edges.add(Edge.make(x, e.v))
            return SimplicialTree(tree.vertices | {x}, frozenset(edges), field)
    nearest = min(tree.vertices, key=lambda v: (distance(v, x), v.sort_key()))
    return SimplicialTree(tree.vertices | {x}, tree.edges | {Edge.make(nearest, x)}, field)


def _insert_all(field, pts: list) -> SimplicialTree:
    """Insert pts[2:] one at a time, keeping the join of the finite points current."""
    tree = None
    top = None
    finite = [q for q in pts[:2] if q is not INF]
    for k in range(2, len(pts)):
        if top is None and len(finite) >= 2:
            top = _finite_join(field, finite)
        tree = insert_point(tree, pts[:k], pts[k], field, top)
        q = pts[k]
        if q is not INF:
            finite.append(q)
            if top is not None and not top.contains_point(q):
                top = Ball(top.center, field.valuation(q - top.center), field)
    return tree


def build_tree(field, points: Iterable) -> SimplicialTree:
    """T(L) by successive insertion (the production path)."""
    pts = canonical_points(field, points)
    if len(pts) < 3:
        raise TooFewPoints("a tree needs at least three distinct points")
    return _insert_all(field, pts)


def build_tree_incremental(field, points: Sequence) -> SimplicialTree:
    """Insertion in the given order, without canonical reordering."""
    pts = list(points)
    if len(pts) < 3:
        raise TooFewPoints("a tree needs at least three distinct points")
    return _insert_all(field, pts)


def tree_vertices_batch(field, points: Sequence) -> set:
    """All median balls t(p, q, r) over triples, via a pairwise valuation table."""
    pts = list(points)
    n = len(pts)
    val = {}
    for i, j in combinations(range(n), 2):
        if pts[i] is INF or pts[j] is INF:
            val[i, j] = None
        else:
            val[i, j] = field.valuation(pts[i] - pts[j])
    cache = {}
    verts = set()
    for i, j, k in combinations(range(n), 3):
        pairs = [(val[i, j], i, j), (val[i, k], i, k), (val[j, k], j, k)]
        finite_pairs = [(v, a) for v, a, b in pairs if v is not None]
        if len(finite_pairs) == 1:
            v, a = finite_pairs[0]
        else:
            v, a = max(finite_pairs, key=lambda t: t[0])
        key = (a, v)
        if key not in cache:
            cache[key] = Ball(pts[a], v, field)
        verts.add(cache[key])
    return verts


def build_tree_batch(field, points: Iterable) -> SimplicialTree:
    """Reference construction: triples for vertices, containment for edges."""
    pts = canonical_points(field, points)
    if len(pts) < 3:
        raise TooFewPoints("a tree needs at least three distinct points")
    verts = tree_vertices_batch(field, pts)
    ordered = sorted(verts, key=lambda b: b.radius)
    edges = set()
    tops = []
    for v in ordered:
        parents = [w for w in ordered if w.radius < v.radius and w.contains_ball(v)]
        if parents:
            edges.add(Edge.make(max(parents, key=lambda w: w.radius), v))
        else:
            tops.append(v)
    # without infinity the hull may peak at a non-vertex ball with two branches
    if len(tops) == 2:
        edges.add(Edge.make(tops[0], tops[1]))
    elif len(tops) > 2:
        raise AssertionError("more than two maximal vertices")
    return SimplicialTree(frozenset(verts), frozenset(edges), field)


def star(tree: SimplicialTree, v: Ball) -> frozenset:
    if v not in tree.vertices:
        raise UnknownVertex(repr(v))
    return frozenset(e for e in tree.edges if e.u == v or e.v == v)


NOT_RESOLVED = "not-yet-resolved"


@dataclass(frozen=True)
class RayPrefix:
    balls: tuple
    direction: str = "inward"  # or "outward"


def evaluate_ray(ray: RayPrefix, points: Sequence):
    """The end of T(L) a nested ball sequence converges to, once it is determined.

    Inward prefixes resolve to the unique point of L left in the deepest ball;
    outward prefixes resolve to infinity.  Otherwise ``NOT_RESOLVED``.
    """
    balls = list(ray.balls)
    if not balls:
        raise NotNested("empty ray prefix")
    for a, b in zip(balls, balls[1:]):
        inner, outer = (b, a) if ray.direction == "inward" else (a, b)
        if not (outer.contains_ball(inner) and outer != inner):
            raise NotNested(f"{a!r} and {b!r} are not strictly nested")
    if ray.direction == "outward":
        return INF
    inside = [q for q in points if q is not INF and balls[-1].contains_point(q)]
    if len(inside) == 1:
        return inside[0]
    return NOT_RESOLVED


def _dot_id(b: Ball) -> str:
    return '"' + b.label().replace('"', '\\"') + '"'


def to_dot(tree: SimplicialTree, name: str = "T") -> str:
    lines = [f"graph {name} {{"]
    for v in tree.sorted_vertices():
        lines.append(f"  {_dot_id(v)};")
    for e in tree.sorted_edges():
        lines.append(f'  {_dot_id(e.u)} -- {_dot_id(e.v)} [label="{e.weight}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
