"""Schottky groups given by ping-pong data: verification, words, the balls
B(w), the fundamental domain, limit-set samples and the quotient graph.

Letters are signed generator indices: +i is gamma_i and -i its inverse.
For a letter psi, B(psi) is the ball psi maps the outside of B(psi^-1) into:
B(+i) = B_{i+g} and B(-i) = B_i (1-based).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from typing import Any, Optional

from .ball_tree import INF, Ball, distance, join, make_ball, segment_vertices, t_map
from .errors import EmptyWord, NotStabilized
from .moebius import (
    Moebius,
    act_on_tree,
    apply,
    classify,
    hyperbolic_from_balls,
    infinity_in_image,
)
from .valued_field.value_group import ValueElement
from .weighted_graph import WeightedGraph, signature


# ---------------------------------------------------------------- words


def reduce_word(letters) -> tuple:
    """Free reduction of a letter sequence; the empty tuple is the identity."""
    out = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(w) -> tuple:
    return tuple(-x for x in reversed(w))


def is_reduced(w) -> bool:
    return all(w[i + 1] != -w[i] for i in range(len(w) - 1))


def letters(g: int) -> list:
    """S in shortlex letter order: +1, -1, +2, -2, ..."""
    out = []
    for i in range(1, g + 1):
        out += [i, -i]
    return out


def reduced_words(g: int, length: int):
    """All reduced words of exactly the given length, shortlex order."""
    if length == 0:
        yield ()
        return
    alphabet = letters(g)
    # depth-first generation over the ordered alphabet keeps shortlex order
    def rec(prefix):
        if len(prefix) == length:
            yield prefix
            return
        for x in alphabet:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + (x,))

    yield from rec(())


def words_up_to(g: int, n: int, include_empty: bool = False):
    for k in range(0 if include_empty else 1, n + 1):
        yield from reduced_words(g, k)


def shortlex_key(w):
    order = {x: i for i, x in enumerate(letters(max((abs(x) for x in w), default=1)))}
    return (len(w), [order.get(x, 2 * abs(x) + (x < 0)) for x in w])


# ---------------------------------------------------------------- data


@dataclass(frozen=True)
class SchottkyData:
    field: Any
    generators: tuple  # g Moebius transformations
    balls: tuple  # 2g balls B_1 .. B_2g
    verified: bool = False
    rho: Optional[ValueElement] = None  # smallest pairwise ball distance (additive)
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def g(self) -> int:
        return len(self.generators)

    def letter(self, x: int) -> Moebius:
        key = ("letter", x)
        if key not in self._cache:
            m = self.generators[abs(x) - 1]
            self._cache[key] = m if x > 0 else m.inverse()
        return self._cache[key]

    def ball_of_letter(self, x: int) -> Ball:
        i = abs(x)
        return self.balls[i + self.g - 1] if x > 0 else self.balls[i - 1]

    def matrix(self, w) -> Moebius:
        """The product psi_1 ... psi_s for w = (psi_1, ..., psi_s)."""
        w = tuple(w)
        key = ("word", w)
        if key in self._cache:
            return self._cache[key]
        if not w:
            m = Moebius.identity(self.field)
        elif len(w) == 1:
            m = self.letter(w[0])
        else:
            m = self.matrix(w[:-1]) @ self.letter(w[-1])
        self._cache[key] = m
        return m

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "generators": [m.to_json() for m in self.generators],
            "balls": [b.to_json() for b in self.balls],
        }


@dataclass(frozen=True)
class Violation:
    kind: str  # "count" | "overlap" | "distance" | "pairing" | "pole" | "not-hyperbolic"
    indices: tuple
    detail: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "detail": self.detail}


@dataclass(frozen=True)
class PingPongReport:
    ok: bool
    violations: tuple
    data: SchottkyData

    def to_json(self) -> dict:
        doc = {"verified": self.ok, "violations": [v.to_json() for v in self.violations]}
        if self.ok:
            doc["rho"] = self.data.rho.to_json()
        return doc


def verify_ping_pong(data: SchottkyData) -> PingPongReport:
    """Check the ping-pong hypotheses; indices in violations are 1-based."""
    g = data.g
    bad = []
    if g < 2:
        bad.append(Violation("count", (g,), "a Schottky group needs at least two generators"))
    if len(data.balls) != 2 * g:
        bad.append(Violation("count", (len(data.balls),), f"expected {2 * g} balls"))
        return PingPongReport(False, tuple(bad), data)
    dists = []
    for i in range(2 * g):
        for j in range(i + 1, 2 * g):
            bi, bj = data.balls[i], data.balls[j]
            if not bi.disjoint(bj):
                bad.append(Violation("overlap", (i + 1, j + 1), f"{bi.label()} meets {bj.label()}"))
                continue
            d = distance(bi, bj)
            dists.append(d)
            if not d.is_top_nilpotent():
                bad.append(Violation("distance", (i + 1, j + 1), f"distance {d} is not a microbe inverse"))
    for i, gamma in enumerate(data.generators):
        src, dst = data.balls[i], data.balls[i + g]
        img = act_on_tree(gamma, src)
        if img != dst:
            bad.append(Violation("pairing", (i + 1, i + 1 + g), f"gamma_{i + 1}[B_{i + 1}] = {img.label()}"))
        if not infinity_in_image(gamma, src):
            bad.append(Violation("pole", (i + 1,), f"the pole of gamma_{i + 1} is outside B_{i + 1}"))
    if bad:
        return PingPongReport(False, tuple(bad), data)
    verified = replace(data, verified=True, rho=min(dists), _cache={})
    return PingPongReport(True, (), verified)


def require_verified(data: SchottkyData) -> SchottkyData:
    if data.verified:
        return data
    report = verify_ping_pong(data)
    if not report.ok:
        raise ValueError("ping-pong data failed verification: " + "; ".join(v.detail for v in report.violations))
    return report.data


# ---------------------------------------------------------------- balls of words


def ball_of_word(data: SchottkyData, w) -> Ball:
    """B(w) = w'[B(psi_s)] for w = w' psi_s."""
    w = tuple(w)
    if not w:
        raise EmptyWord("B(w) is undefined for the empty word")
    key = ("ball", w)
    if key not in data._cache:
        if len(w) == 1:
            b = data.ball_of_letter(w[0])
        else:
            b = act_on_tree(data.matrix(w[:-1]), data.ball_of_letter(w[-1]))
        data._cache[key] = b
    return data._cache[key]


def word_is_hyperbolic(data: SchottkyData, w, precision: Optional[ValueElement] = None):
    if not w:
        raise EmptyWord("the empty word is the identity")
    return classify(data.matrix(w), precision)


def in_fundamental_domain(data: SchottkyData, z) -> bool:
    """z lies in F iff psi(z) lies in B(psi) for every letter psi."""
    for x in letters(data.g):
        y = apply(data.letter(x), z)
        if not data.ball_of_letter(x).contains_point(y):
            return False
    return True


# ---------------------------------------------------------------- limit set


def _max_radius(data: SchottkyData) -> ValueElement:
    return max(b.radius for b in data.balls)


def _max_translation(data: SchottkyData) -> ValueElement:
    return max(distance(data.ball_of_letter(-x), data.ball_of_letter(x)) for x in letters(data.g))


def sample_precision(data: SchottkyData, depth: int) -> ValueElement:
    """A precision fine enough to separate the attracting points of words of length <= depth."""
    return _max_radius(data) + _max_translation(data) * (2 * depth + 2)


def limit_set_sample(data: SchottkyData, depth: int, precision: Optional[ValueElement] = None) -> list:
    """Attracting fixed points of all reduced words of length <= depth, shortlex, deduplicated."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if precision is None:
        precision = sample_precision(data, depth)
    f = data.field
    seen = set()
    out = []
    for w in words_up_to(data.g, depth):
        att = attracting_point(data, w, precision)
        key = "inf" if att is INF else f.canonical_center(att, precision)
        if key not in seen:
            seen.add(key)
            out.append(att)
    return out


def attracting_point(data: SchottkyData, w, precision: ValueElement):
    key = ("att", tuple(w), precision)
    if key not in data._cache:
        cls = classify(data.matrix(w), precision)
        if not cls.hyperbolic:
            raise ValueError(f"word {w} is not hyperbolic")
        data._cache[key] = cls.attracting().point
    return data._cache[key]


# ---------------------------------------------------------------- quotient graph


@dataclass(frozen=True)
class QuotientGraph:
    graph: WeightedGraph
    edge_words: tuple  # per edge: the reduced word carrying the base lift of its head class
    vertex_balls: tuple  # representative ball per vertex label
    genus: int
    depth: int
    stabilized: bool

    def to_json(self) -> dict:
        edges = []
        for (u, v, w), word in zip(self.graph.edges, self.edge_words):
            edges.append([u, v, w.to_json(), list(word)])
        return {
            "vertices": list(self.graph.vertices),
            "vertex_balls": [b.to_json() for b in self.vertex_balls],
            "edges": edges,
            "genus": self.genus,
            "depth": self.depth,
            "stabilized": self.stabilized,
        }

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for label, ball in zip(self.graph.vertices, self.vertex_balls):
            lines.append(f'  "{label}" [label="{ball.label()}"];')
        for (u, v, w), word in zip(self.graph.edges, self.edge_words):
            lines.append(f'  "{u}" -- "{v}" [label="{w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def default_base(data: SchottkyData, precision: ValueElement) -> Ball:
    """t over the first generator's fixed points and the second generator's attracting point."""
    f = data.field
    c1 = classify(data.generators[0], precision)
    c2 = classify(data.generators[1], precision)
    return t_map(f, c1.attracting().point, c1.repelling().point, c2.attracting().point)


def subtree_vertices(data: SchottkyData, base: Ball, sample: list) -> tuple:
    """Vertices and edges of the union of the segments [base, psi[base]] over the letters."""
    verts = {base}
    edges = set()
    for x in letters(data.g):
        end = act_on_tree(data.letter(x), base)
        chain = segment_vertices(base, end, sample)
        if not chain or chain[0] != base:
            chain = [base] + chain
        if chain[-1] != end:
            chain = chain + [end]
        verts.update(chain)
        for a, b in zip(chain, chain[1:]):
            edges.add(frozenset((a, b)))
    return verts, edges


GLUE_LENGTH = 4


def _glue(data: SchottkyData, verts: set, base: Ball):
    """For every vertex x choose a reduced word u with u[rep] = x, rep the class representative.

    Orbits are explored through reduced words of length <= GLUE_LENGTH.
    """
    order = sorted(verts, key=Ball.sort_key)
    order.sort(key=lambda b: b != base)  # the base vertex first
    lift = {}  # x -> (rep, word)
    glue_words = [w for w in words_up_to(data.g, GLUE_LENGTH)]
    for x in order:
        if x in lift:
            continue
        lift[x] = (x, ())
        queue = [x]
        while queue:
            y = queue.pop(0)
            rep, word = lift[y]
            for u in glue_words:
                z = act_on_tree(data.matrix(u), y)
                if z in verts and z not in lift:
                    lift[z] = (rep, reduce_word(u + word))
                    queue.append(z)
    return order, lift


def quotient_precision(data: SchottkyData, base: Ball) -> ValueElement:
    """Sample precision for the quotient: finer than every ball on the segments [base, psi[base]]."""
    deepest = max([base.radius] + [act_on_tree(data.letter(x), base).radius for x in letters(data.g)])
    return deepest + _max_translation(data)


def _quotient_once(data: SchottkyData, base: Ball, depth: int):
    sample = limit_set_sample(data, depth, quotient_precision(data, base))
    verts, edges = subtree_vertices(data, base, sample)
    order, lift = _glue(data, verts, base)
    reps = []
    for x in order:
        if lift[x][0] == x:
            reps.append(x)
    label = {r: f"v{i}" for i, r in enumerate(reps)}
    orbit_edges = {}
    for e in edges:
        a, b = sorted(e, key=Ball.sort_key)
        ra, wa = lift[a]
        rb, wb = lift[b]
        voltage = reduce_word(inverse_word(wa) + wb)
        la, lb = label[ra], label[rb]
        if (la, lb) > (lb, la) or (la == lb and shortlex_key(inverse_word(voltage)) < shortlex_key(voltage)):
            la, lb, voltage = lb, la, inverse_word(voltage)
        key = (la, lb, voltage)
        orbit_edges.setdefault(key, distance(a, b))
    keys = sorted(orbit_edges, key=lambda k: (k[0], k[1], shortlex_key(k[2])))
    graph = WeightedGraph(tuple(label[r] for r in reps), tuple((k[0], k[1], orbit_edges[k]) for k in keys))
    return graph, tuple(k[2] for k in keys), tuple(reps)


def quotient_graph(
    data: SchottkyData,
    base: Optional[Ball] = None,
    depth: int = 4,
    max_depth: int = 10,
) -> QuotientGraph:
    """The finite weighted graph T/Gamma, computed from a depth-limited limit-set sample.

    The computation at depth n is accepted when it agrees (up to weighted
    isomorphism) with the one at depth n + 2.
    """
    data = require_verified(data)
    if base is None:
        base = default_base(data, sample_precision(data, 1))
    n = depth
    current = _quotient_once(data, base, n)
    while n + 2 <= max_depth:
        nxt = _quotient_once(data, base, n + 2)
        if signature(current[0]) == signature(nxt[0]):
            graph, words, reps = current
            return QuotientGraph(graph, words, reps, graph.genus(), n, True)
        n += 2
        current = nxt
    raise NotStabilized(n)


# ---------------------------------------------------------------- documented examples


def rank1_example():
    """g = 2 over Q_3: gamma_1 fixes 0 (attracting) and 1 with multiplier 81,
    gamma_2 is its conjugate by z -> z + 3.  Balls of radius 2 around the
    fixed points."""
    from .valued_field.fields import RationalPadic
    from .valued_field.value_group import V

    f = RationalPadic(3)
    g1 = Moebius(f, 81, 0, 80, 1)
    shift = Moebius(f, 1, 3, 0, 1)
    g2 = shift @ g1 @ shift.inverse()
    r = V(2)
    balls = (make_ball(f, 1, r), make_ball(f, 4, r), make_ball(f, 0, r), make_ball(f, 3, r))
    return SchottkyData(f, (g1, g2), balls)


def rank2_example():
    """The same configuration over Q(t) with the rank-two valuation, t playing the role of 3."""
    from .valued_field.fields import Rank2Composite
    from .valued_field.value_group import V

    f = Rank2Composite(3)
    t = f.t
    q = t ** 4
    g1 = Moebius(f, q, 0, q - 1, 1)
    shift = Moebius(f, 1, t, 0, 1)
    g2 = shift @ g1 @ shift.inverse()
    r = V(2, 0)
    balls = (make_ball(f, 1, r), make_ball(f, 1 + t, r), make_ball(f, 0, r), make_ball(f, t, r))
    return SchottkyData(f, (g1, g2), balls)


def far_example():
    """g = 2 over Q_5 with four balls in distinct residue discs of the unit ball."""
    from .valued_field.fields import RationalPadic
    from .valued_field.value_group import V

    f = RationalPadic(5)
    r = V(1)
    balls = tuple(make_ball(f, c, r) for c in (0, 1, 2, 3))
    gens = (hyperbolic_from_balls(balls[0], balls[2]), hyperbolic_from_balls(balls[1], balls[3]))
    return SchottkyData(f, gens, balls)
