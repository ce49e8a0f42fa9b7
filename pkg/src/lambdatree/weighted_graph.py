"""Finite multigraphs with value-group weights, plus isomorphism by canonical form."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Any, Optional

from .valued_field.value_group import ValueElement, from_json


@dataclass(frozen=True)
class WeightedGraph:
    vertices: tuple  # labels (str)
    edges: tuple  # (u, v, weight) triples; loops allowed, parallel edges allowed

    def __post_init__(self):
        labels = set(self.vertices)
        if len(labels) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        for u, v, w in self.edges:
            if u not in labels or v not in labels:
                raise ValueError(f"edge ({u}, {v}) uses an unknown vertex")
            if not isinstance(w, ValueElement):
                raise ValueError("edge weights must be value elements")

    @property
    def rank(self) -> int:
        return self.edges[0][2].rank if self.edges else 1

    def valence(self, x) -> int:
        """Number of half-edges at x; a loop counts twice."""
        return sum((u == x) + (v == x) for u, v, _ in self.edges)

    def components(self) -> int:
        parent = {x: x for x in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            parent[find(u)] = find(v)
        return len({find(x) for x in self.vertices})

    def is_connected(self) -> bool:
        return self.components() <= 1

    def genus(self) -> int:
        """First Betti number."""
        return len(self.edges) - len(self.vertices) + self.components()

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[u, v, w.to_json()] for u, v, w in self.edges],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "WeightedGraph":
        if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
            raise ValueError("a weighted graph needs 'vertices' and 'edges'")
        verts = tuple(str(v) for v in doc["vertices"])
        edges = []
        for e in doc["edges"]:
            if not isinstance(e, (list, tuple)) or len(e) < 3:
                raise ValueError(f"malformed edge {e!r}")
            edges.append((str(e[0]), str(e[1]), from_json(e[2])))
        return cls(verts, tuple(edges))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in sorted(self.vertices):
            lines.append(f'  "{v}";')
        for u, v, w in sorted(self.edges, key=lambda e: (e[0], e[1], e[2].coords)):
            lines.append(f'  "{u}" -- "{v}" [label="{w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _refine(graph: WeightedGraph) -> dict:
    """Colour refinement: start from weighted degree data, iterate on neighbourhoods."""
    colour = {}
    for x in graph.vertices:
        inc = sorted(
            (w.coords, u == v) for u, v, w in graph.edges if x in (u, v)
        )
        colour[x] = repr(inc)
    while True:
        sig = {}
        for x in graph.vertices:
            nb = []
            for u, v, w in graph.edges:
                if u == x:
                    nb.append((w.coords, colour[v]))
                if v == x and u != x:
                    nb.append((w.coords, colour[u]))
            sig[x] = (colour[x], tuple(sorted(nb)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
        new = {x: str(ranks[sig[x]]) for x in graph.vertices}
        if len(set(new.values())) == len(set(colour.values())):
            return {x: ranks[sig[x]] for x in graph.vertices}
        colour = new


def _encode(graph: WeightedGraph, order: list) -> tuple:
    pos = {x: i for i, x in enumerate(order)}
    return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v]), w.coords) for u, v, w in graph.edges))


def canonical_form(graph: WeightedGraph, limit: int = 200000):
    """Smallest edge encoding over vertex orders compatible with the refined colouring.

    Returns (code, order).  Exhaustive within colour classes, so it is exact;
    ``limit`` guards against pathological symmetric inputs.
    """
    colour = _refine(graph)
    classes = {}
    for x in sorted(graph.vertices):
        classes.setdefault(colour[x], []).append(x)
    keys = sorted(classes)
    count = 1
    for k in keys:
        for i in range(2, len(classes[k]) + 1):
            count *= i
    if count > limit:
        raise ValueError("graph too symmetric for exhaustive canonical form")
    best = None
    for combo in product(*(permutations(classes[k]) for k in keys)):
        order = [x for block in combo for x in block]
        code = _encode(graph, order)
        if best is None or code < best[0]:
            best = (code, order)
    head = tuple((k, len(classes[k])) for k in keys)
    return (head, best[0] if best else ()), (best[1] if best else [])


def find_isomorphism(g1: WeightedGraph, g2: WeightedGraph) -> Optional[dict]:
    """A vertex bijection carrying g1's weighted edge multiset onto g2's, or None."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    c1, o1 = canonical_form(g1)
    c2, o2 = canonical_form(g2)
    if c1 != c2:
        return None
    return dict(zip(o1, o2))


def isomorphic(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    return find_isomorphism(g1, g2) is not None


def signature(graph: WeightedGraph):
    """Hashable isomorphism invariant (complete, via the canonical form)."""
    return canonical_form(graph)[0]
