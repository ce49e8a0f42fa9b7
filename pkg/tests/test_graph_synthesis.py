import random

import pytest

from lambdatree.ball_tree import distance, join, make_ball, unit_ball
from lambdatree.errors import NoNilpotentEdgeInCycle, TooFewResidues
from lambdatree.graph_synthesis import (
    dumbbell_graph,
    k4_graph,
    nilpotent_cotree,
    place_subballs,
    round_trip,
    synthesize,
    synthesize_report,
    theta_graph,
)
from lambdatree.schottky import verify_ping_pong
from lambdatree.valued_field.fields import FuncFieldTadic, QuadExt, RationalPadic, Rank2Composite
from lambdatree.valued_field.value_group import V
from lambdatree.weighted_graph import WeightedGraph

Q3 = RationalPadic(3)


def G(vertices, edges):
    return WeightedGraph(tuple(vertices), tuple((u, v, V(*w) if isinstance(w, tuple) else V(w)) for u, v, w in edges))


def residual_is_spanning_tree(graph, tree):
    sub = WeightedGraph(graph.vertices, tuple(graph.edges[i] for i in tree))
    return sub.is_connected() and sub.genus() == 0


# ---------------------------------------------------------------- cotree


def test_cotree_examples():
    theta = theta_graph(V(2))
    tree, cotree = nilpotent_cotree(theta)
    assert len(cotree) == 2 and len(tree) == 1
    path = G("abc", [("a", "b", 1), ("b", "c", 1)])
    assert nilpotent_cotree(path) == ((0, 1), ())
    with pytest.raises(NoNilpotentEdgeInCycle):
        nilpotent_cotree(G("ab", [("a", "b", (0, 4)), ("a", "b", (0, 4))]))


def test_cotree_prefers_nilpotent_edge():
    # the cycle has weight (1, -3) + (0, 4) > 0 but only the first edge is top-nilpotent
    g = G("ab", [("a", "b", (1, -3)), ("a", "b", (0, 4))])
    tree, cotree = nilpotent_cotree(g)
    assert cotree == (0,) and tree == (1,)


def test_cotree_properties_on_random_graphs():
    r = random.Random(13)
    for _ in range(80):
        n = r.randint(1, 6)
        vs = [f"v{i}" for i in range(n)]
        edges = [(vs[i], vs[r.randrange(i)], r.randint(1, 4)) for i in range(1, n)]
        edges += [(r.choice(vs), r.choice(vs), r.randint(1, 4)) for _ in range(r.randint(0, 5))]
        g = G(vs, edges)
        tree, cotree = nilpotent_cotree(g)
        assert len(cotree) == g.genus()
        assert residual_is_spanning_tree(g, tree)
        assert all(g.edges[i][2].is_top_nilpotent() for i in cotree)


# ---------------------------------------------------------------- sub-balls


def test_place_subballs_examples():
    B = make_ball(Q3, 0, V(1))
    subs = place_subballs(B, [V(2)] * 3)
    assert {b.radius for b in subs} == {V(3)}
    assert all(distance(B, b) == V(2) for b in subs)
    for i in range(3):
        for j in range(i + 1, 3):
            assert subs[i].disjoint(subs[j]) and join(subs[i], subs[j]) == B
    (one,) = place_subballs(B, [V(5)])
    assert distance(B, one) == V(5)
    with pytest.raises(TooFewResidues):
        place_subballs(unit_ball(Q3), [V(1)] * 4)


@pytest.mark.parametrize("field", [RationalPadic(5), FuncFieldTadic(), Rank2Composite(3)], ids=str)
def test_place_subballs_exact_distances(field):
    r = random.Random(17)
    for _ in range(20):
        B = make_ball(field, field.random_element(r), V(*([r.randint(-2, 3)] + [0] * (field.rank - 1))))
        k = r.randint(1, 3)
        ds = [V(*([r.randint(1, 4)] + [r.randint(-2, 2) for _ in range(field.rank - 1)])) for _ in range(k)]
        subs = place_subballs(B, ds)
        assert [distance(B, b) for b in subs] == ds
        for i in range(k):
            for j in range(i + 1, k):
                assert join(subs[i], subs[j]) == B


# ---------------------------------------------------------------- synthesis


def test_synthesize_examples():
    for graph in (theta_graph(V(2)), dumbbell_graph(V(2), V(2))):
        data = synthesize(graph, Q3)
        assert data.g == 2 and verify_ping_pong(data).ok
    syn = synthesize_report(theta_graph(V(1)), Q3)
    assert isinstance(syn.data.field, QuadExt)
    assert any("quad-ext" in n for n in syn.notes)
    assert verify_ping_pong(syn.data).ok
    even = synthesize_report(theta_graph(V(2)), Q3)
    assert even.notes == [] and even.data.field == Q3


def test_synthesis_rejects_bad_input():
    with pytest.raises(ValueError):
        synthesize(G("abc", [("a", "b", 2), ("b", "c", 2), ("c", "a", 2)]), Q3)  # valence 2
    with pytest.raises(ValueError):
        synthesize(G("ab", [("a", "a", 2), ("a", "a", 2), ("b", "b", 2), ("b", "b", 2)]), Q3)  # disconnected
    with pytest.raises(TooFewResidues):
        # a valence-5 vertex needs four sub-balls plus the upward direction over F_3
        synthesize(G("ab", [("a", "b", 2)] * 5), Q3)


def test_synthesis_json():
    doc = synthesize_report(theta_graph(V(2)), Q3).to_json()
    assert doc["root"] in ("a", "b") and len(doc["cotree_edges"]) == 2
    assert set(doc["vertex_balls"]) == {"a", "b"}


# ---------------------------------------------------------------- round trip


@pytest.mark.parametrize(
    "graph,field",
    [
        (theta_graph(V(2)), RationalPadic(3)),
        (dumbbell_graph(V(2), V(2)), RationalPadic(3)),
        (theta_graph(V(2), V(4), V(6)), RationalPadic(3)),
        (dumbbell_graph(V(4), V(2), V(6)), RationalPadic(3)),
        (theta_graph(V(1)), RationalPadic(3)),
    ],
    ids=["theta", "dumbbell", "theta-246", "dumbbell-426", "theta-odd"],
)
def test_round_trip_rank1(graph, field):
    rep = round_trip(graph, field)
    assert rep.isomorphic and rep.mismatch is None
    assert rep.genus_quotient == rep.genus_input == graph.genus()


@pytest.mark.slow
def test_round_trip_k4():
    rep = round_trip(k4_graph(V(2)), RationalPadic(5))
    assert rep.isomorphic and rep.genus_quotient == 3


@pytest.mark.slow
@pytest.mark.parametrize(
    "graph,field",
    [(theta_graph(V(2, 0)), Rank2Composite(3)), (theta_graph(V(2)), FuncFieldTadic())],
    ids=["rank2-theta", "Qt-theta"],
)
def test_round_trip_t_weights(graph, field):
    rep = round_trip(graph, field)
    assert rep.isomorphic


def test_round_trip_reports_mismatch_json():
    rep = round_trip(theta_graph(V(2)), Q3)
    doc = rep.to_json()
    assert doc["isomorphic"] and doc["genus_input"] == doc["genus_quotient"] == 2
    assert set(doc["mapping"]) == {"a", "b"}
