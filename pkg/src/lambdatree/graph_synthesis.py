"""From a weighted graph to a Schottky group whose quotient graph is that graph.

The spanning tree of the graph is embedded as nested balls: each tree vertex
becomes a ball and each tree edge a pair of nested balls at the prescribed
distance.  Every cotree edge contributes two half-edges, realised as small
balls hanging below its endpoints at half the edge weight; the generator for
that edge pairs the two small balls.  Gluing the two leaves of the convex
hull recovers the cotree edge with its full weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .ball_tree import Ball, make_ball, unit_ball
from .errors import NoNilpotentEdgeInCycle, UnsupportedExtension
from .moebius import hyperbolic_from_balls
from .schottky import SchottkyData, quotient_graph, verify_ping_pong
from .valued_field.fields import QuadExt, ValuedField, make_field
from .valued_field.value_group import ValueElement
from .weighted_graph import WeightedGraph, find_isomorphism


# ---------------------------------------------------------------- cotree


def _find_cycle(vertices, edges, alive) -> Optional[list]:
    """Edge indices of some cycle among the alive edges, or None."""
    for i in alive:
        u, v, _ = edges[i]
        if u == v:
            return [i]
    adj = {x: [] for x in vertices}
    for i in alive:
        u, v, _ = edges[i]
        adj[u].append((v, i))
        adj[v].append((u, i))
    seen = {}
    for root in vertices:
        if root in seen:
            continue
        seen[root] = (None, None)
        stack = [root]
        while stack:
            x = stack.pop()
            via = seen[x][1]
            for y, i in adj[x]:
                if i == via:
                    continue
                if y in seen:
                    # close the cycle through the two parent chains
                    return _cycle_edges(seen, x, y, i)
                seen[y] = (x, i)
                stack.append(y)
    return None


def _cycle_edges(seen, x, y, closing) -> list:
    def chain(z):
        out = [z]
        while seen[z][0] is not None:
            z = seen[z][0]
            out.append(z)
        return out

    cx, cy = chain(x), chain(y)
    common = set(cx) & set(cy)
    cyc = [closing]
    for c in (cx, cy):
        for z in c:
            if z in common:
                break
            cyc.append(seen[z][1])
    return cyc


def nilpotent_cotree(G: WeightedGraph):
    """(tree edge indices, cotree edge indices) with every cotree weight top-nilpotent.

    Repeatedly finds a cycle and removes its latest edge of top-nilpotent
    weight, so earlier edges are preferred for the spanning tree.
    """
    alive = list(range(len(G.edges)))
    removed = []
    while True:
        cyc = _find_cycle(G.vertices, G.edges, alive)
        if cyc is None:
            break
        good = [i for i in cyc if G.edges[i][2].is_top_nilpotent()]
        if not good:
            labels = ", ".join(f"{G.edges[i][0]}-{G.edges[i][1]}" for i in sorted(cyc))
            raise NoNilpotentEdgeInCycle(f"no edge of top-nilpotent weight in the cycle {labels}")
        drop = max(good)
        alive.remove(drop)
        removed.append(drop)
    return tuple(alive), tuple(sorted(removed))


# ---------------------------------------------------------------- sub-balls


def place_subballs(B: Ball, distances, field: Optional[ValuedField] = None) -> list:
    """Pairwise disjoint sub-balls of B, the i-th at distance distances[i] from B.

    Centers are B's center plus residue representatives scaled to B's radius,
    so any two of them join exactly at B.
    """
    f = field if field is not None else B.field
    distances = list(distances)
    if not distances:
        return []
    for d in distances:
        if d.bottom or not d > d - d:
            raise ValueError(f"sub-ball distance {d} must be positive")
    reps = f.residue_representatives(len(distances))
    unit = f.element_of_valuation(B.radius)
    return [make_ball(f, B.center + unit * r, B.radius + d) for r, d in zip(reps, distances)]


# ---------------------------------------------------------------- synthesis


@dataclass
class Synthesis:
    data: SchottkyData
    root: str
    vertex_balls: dict
    cotree: tuple  # edge indices, in generator order
    notes: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        doc = self.data.to_json()
        doc["root"] = self.root
        doc["vertex_balls"] = {k: b.to_json() for k, b in sorted(self.vertex_balls.items())}
        doc["cotree_edges"] = list(self.cotree)
        doc["notes"] = list(self.notes)
        return doc


def check_synthesis_input(G: WeightedGraph) -> None:
    if not G.vertices:
        raise ValueError("the graph has no vertices")
    if not G.is_connected():
        raise ValueError("the graph must be connected")
    for u, v, w in G.edges:
        if w.bottom or not w > w - w:
            raise ValueError(f"edge {u}-{v} has non-positive weight {w}")
    for x in G.vertices:
        if G.valence(x) <= 2:
            raise ValueError(f"vertex {x} has valence {G.valence(x)}; contract valence-2 vertices first")


def _ramifier(base: ValuedField, halves) -> Optional[object]:
    """An element of the base whose square root supplies the missing half values."""
    if all(base.in_lattice(h) for h in halves):
        return None
    classes = set()
    for h in halves:
        if not base.in_lattice(h):
            classes.add(tuple(c.denominator != 1 for c in h.coords))
    if len(classes) > 1:
        raise UnsupportedExtension("half weights need more than one square root; only one quadratic extension is supported")
    (mask,) = classes
    v = ValueElement(tuple(1 if m else 0 for m in mask))
    return base.element_of_valuation(v)


def synthesize_report(G: WeightedGraph, field) -> Synthesis:
    base = make_field(field)
    check_synthesis_input(G)
    tree, cotree = nilpotent_cotree(G)
    notes = []

    halves = [G.edges[i][2] / 2 for i in cotree]
    for u, v, w in G.edges:
        if not base.in_lattice(w):
            raise ValueError(f"edge weight {w} is not in the value group of the field")
    pi = _ramifier(base, halves)
    f = base
    if pi is not None:
        f = QuadExt(base, pi)
        notes.append(f"odd weight: half-edge midpoints need sqrt({base.format(pi)}); working over quad-ext")

    # root: minimum valence, ties by label
    root = min(G.vertices, key=lambda x: (G.valence(x), str(x)))
    adj = {x: [] for x in G.vertices}
    for i in tree:
        u, v, _ = G.edges[i]
        adj[u].append((v, i))
        adj[v].append((u, i))
    half_at = {x: [] for x in G.vertices}  # (cotree position, side)
    for k, i in enumerate(cotree):
        u, v, _ = G.edges[i]
        half_at[u].append((k, 0))
        half_at[v].append((k, 1))

    g = len(cotree)
    vertex_balls = {root: unit_ball(f)}
    leaf = [None] * (2 * g)
    queue = [(root, None)]
    while queue:
        x, via = queue.pop(0)
        B = vertex_balls[x]
        children = [(y, i) for y, i in adj[x] if i != via]
        dists = [G.edges[i][2] for _, i in children] + [halves[k] for k, _ in half_at[x]]
        subs = place_subballs(B, dists, f)
        for (y, i), b in zip(children, subs):
            vertex_balls[y] = b
            queue.append((y, i))
        for (k, side), b in zip(half_at[x], subs[len(children):]):
            leaf[k + side * g] = b

    gens = tuple(hyperbolic_from_balls(leaf[k], leaf[k + g]) for k in range(g))
    report = verify_ping_pong(SchottkyData(f, gens, tuple(leaf)))
    if not report.ok:
        detail = "; ".join(v.detail for v in report.violations)
        raise ValueError(f"synthesized data failed verification: {detail}")
    labels = {x: str(x) for x in G.vertices}
    return Synthesis(report.data, labels[root], vertex_balls, cotree, notes)


def synthesize(G: WeightedGraph, field) -> SchottkyData:
    """Verified ping-pong data whose quotient graph is G."""
    return synthesize_report(G, field).data


# ---------------------------------------------------------------- round trip


@dataclass(frozen=True)
class RoundTripReport:
    isomorphic: bool
    genus_input: int
    genus_quotient: int
    quotient: WeightedGraph
    mapping: Optional[dict]
    mismatch: Optional[dict]
    notes: tuple

    def to_json(self) -> dict:
        doc = {
            "isomorphic": self.isomorphic,
            "genus_input": self.genus_input,
            "genus_quotient": self.genus_quotient,
            "quotient": self.quotient.to_json(),
            "notes": list(self.notes),
        }
        if self.mapping is not None:
            doc["mapping"] = {str(k): str(v) for k, v in sorted(self.mapping.items(), key=lambda kv: str(kv[0]))}
        if self.mismatch is not None:
            doc["mismatch"] = self.mismatch
        return doc


def _signature_json(G: WeightedGraph) -> dict:
    degs = sorted(G.valence(x) for x in G.vertices)
    weights = sorted(w for _, _, w in G.edges)
    return {"valences": degs, "weights": [w.to_json() for w in weights], "genus": G.genus()}


def round_trip(G: WeightedGraph, field, depth: int = 4, max_depth: int = 10) -> RoundTripReport:
    syn = synthesize_report(G, field)
    q = quotient_graph(syn.data, depth=depth, max_depth=max_depth).graph
    mapping = find_isomorphism(G, q)
    mismatch = None
    if mapping is None:
        mismatch = {"input": _signature_json(G), "quotient": _signature_json(q)}
    return RoundTripReport(mapping is not None, G.genus(), q.genus(), q, mapping, mismatch, tuple(syn.notes))


# ---------------------------------------------------------------- corpus


def _graph(vertices, edges) -> WeightedGraph:
    return WeightedGraph(tuple(vertices), tuple(edges))


def theta_graph(w1: ValueElement, w2: Optional[ValueElement] = None, w3: Optional[ValueElement] = None) -> WeightedGraph:
    w2 = w1 if w2 is None else w2
    w3 = w1 if w3 is None else w3
    return _graph(["a", "b"], [("a", "b", w1), ("a", "b", w2), ("a", "b", w3)])


def dumbbell_graph(bridge: ValueElement, loop_a: ValueElement, loop_b: Optional[ValueElement] = None) -> WeightedGraph:
    loop_b = loop_a if loop_b is None else loop_b
    return _graph(["a", "b"], [("a", "b", bridge), ("a", "a", loop_a), ("b", "b", loop_b)])


def k4_graph(w: ValueElement) -> WeightedGraph:
    vs = ["a", "b", "c", "d"]
    return _graph(vs, [(vs[i], vs[j], w) for i in range(4) for j in range(i + 1, 4)])
