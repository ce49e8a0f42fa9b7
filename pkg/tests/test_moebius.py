import random
from fractions import Fraction

import pytest

from lambdatree.ball_tree import INF, Region, distance, make_ball, t_map, unit_ball
from lambdatree.errors import DegenerateTriple, IdentityInput, NotNilpotentDistance, PoleInput
from lambdatree.moebius import (
    Moebius,
    act_on_region,
    act_on_tree,
    apply,
    classify,
    derivative_valuation,
    hyperbolic_from_balls,
    infinity_in_image,
    orbit_report,
    stabilizes_t0,
    t0,
    varpi,
)
from lambdatree.valued_field.fields import FuncFieldTadic, RationalPadic, Rank2Composite
from lambdatree.valued_field.value_group import V, ValueElement

from conftest import FIELD_FACTORIES

Q3 = RationalPadic(3)


def M(a, b, c, d, f=Q3):
    return Moebius(f, a, b, c, d)


def random_moebius(f, r, lo=-2, hi=3):
    while True:
        a, b, c, d = (f.random_element(r, lo, hi) for _ in range(4))
        if a * d - b * c != 0:
            return Moebius(f, a, b, c, d)


def random_ball(f, r):
    rad = [r.randint(-2, 4)] + [r.randint(-2, 2) for _ in range(f.rank - 1)]
    return make_ball(f, f.random_element(r), ValueElement(tuple(rad)))


# ---------------------------------------------------------------- examples


def test_apply_examples():
    assert apply(M(3, 0, 0, 1), 2) == 6
    assert apply(M(3, 0, 2, 1), 1) == 1
    assert apply(M(0, -1, 1, 0), 0) is INF
    assert apply(M(0, -1, 1, 0), INF) == 0
    assert apply(M(3, 0, 0, 1), INF) is INF


def test_derivative_valuation_examples():
    assert derivative_valuation(M(3, 0, 0, 1), 0) == V(1)
    assert derivative_valuation(M(3, 0, 2, 1), 0) == V(1)
    assert derivative_valuation(M(3, 0, 2, 1), INF) == V(1)
    with pytest.raises(PoleInput):
        derivative_valuation(M(0, -1, 1, 0), 0)
    with pytest.raises(PoleInput):
        derivative_valuation(M(3, 0, 0, 1), INF)


def test_act_on_region_examples():
    O = unit_ball(Q3)
    assert act_on_region(M(3, 0, 0, 1), O) == Region(make_ball(Q3, 0, V(1)))
    inv = M(0, 1, 1, 0)
    assert act_on_region(inv, O) == Region(O, True)
    img = act_on_region(M(1, 0, 1, 1), O)  # z / (z + 1) sends infinity to 1
    assert img.complement and img.ball == O and img != Region(O, True)
    assert img.hole == make_ball(Q3, 1, V(1))
    assert act_on_region(M(1, 1, 0, 1), O) == Region(O)


def test_act_on_tree_examples():
    O = unit_ball(Q3)
    assert act_on_tree(M(0, 1, 1, 0), O) == O
    assert act_on_tree(M(3, 0, 0, 1), O) == make_ball(Q3, 0, V(1))
    b = make_ball(Q3, 7, V(3))
    assert act_on_tree(Moebius.identity(Q3), b) == b


def test_region_images_match_point_sampling():
    # oracle: the image region must contain the images of points of B and only those
    r = random.Random(31)
    for _ in range(60):
        g = random_moebius(Q3, r)
        B = random_ball(Q3, r)
        img = act_on_region(g, B)
        unit = Q3.element_of_valuation(B.radius)
        for k in range(-6, 12):
            z = B.center + Fraction(r.randint(-50, 50), r.choice([1, 2, 4])) * unit * Fraction(3) ** (k // 3)
            w = apply(g, z)
            assert img.contains(w) == B.contains_point(z)


def test_varpi_examples():
    q = Fraction(3)
    assert varpi(M(q, 0, 0, 1)) == (q + 1) ** 2 / q
    assert Q3.valuation(varpi(M(q, 0, 0, 1))) == V(-1)
    assert varpi(M(0, -1, 1, 0)) == 0
    assert varpi(M(2, 1, 1, 2)) == Fraction(16, 3)


def test_classify_examples():
    c = classify(M(3, 0, 0, 1))
    assert c.hyperbolic and c.multiplier_valuation == V(1)
    assert c.attracting().point == 0 and c.repelling().point is INF
    r2 = Rank2Composite(3)
    assert not classify(Moebius(r2, 3, 0, 0, 1)).hyperbolic
    assert -r2.valuation(varpi(Moebius(r2, 3, 0, 0, 1))) == V(0, 1)
    assert classify(Moebius(r2, r2.t, 0, 0, 1)).hyperbolic
    par = classify(M(1, 1, 0, 1))
    assert par.kind == "non-hyperbolic-infinite" and varpi(M(1, 1, 0, 1)) == 4
    assert classify(M(0, -1, 1, 0)).kind == "finite-order-candidate"
    with pytest.raises(IdentityInput):
        classify(Moebius.identity(Q3))


def test_classify_approximate_fixed_points():
    # trace^2 - 4 det = 13^2 - 4*3 = 157 is not a rational square
    g = M(10, 1, 3, 3)
    c = classify(g, V(20))
    assert c.hyperbolic
    for fp in c.fixed_points:
        assert not fp.exact and fp.precision >= V(20)
        z = fp.point
        # g(z) - z = -(c z^2 + (d - a) z - b) / (c z + d)
        resid = 3 * z * z + (3 - 10) * z - 1
        assert Q3.valuation(resid) >= V(20)
    att = c.attracting().point
    assert Q3.valuation(apply(g, att) - att) >= V(19)


def test_hyperbolic_from_balls_examples():
    B, B2 = make_ball(Q3, 1, V(1)), make_ball(Q3, 0, V(1))
    g = hyperbolic_from_balls(B, B2, 9)  # |q| = 1/9, i.e. v(q) = 2 = d(B, B2)
    assert act_on_tree(g, B) == B2
    assert infinity_in_image(g, B)
    assert classify(g).hyperbolic and classify(g).multiplier_valuation == V(2)
    outer, inner = make_ball(Q3, 4, V(0)), make_ball(Q3, 4, V(3))
    h = hyperbolic_from_balls(outer, inner)
    assert act_on_tree(h, outer) == inner
    assert classify(h).multiplier_valuation == V(3)
    with pytest.raises(NotNilpotentDistance):
        hyperbolic_from_balls(B, B)
    r2 = Rank2Composite(3)
    with pytest.raises(NotNilpotentDistance):
        hyperbolic_from_balls(make_ball(r2, 0, V(0, 0)), make_ball(r2, 0, V(0, 3)))


def test_stabilizer_examples():
    assert stabilizes_t0(M(1, 1, 0, 1))
    assert not stabilizes_t0(M(3, 0, 0, 1))
    assert act_on_tree(M(3, 0, 0, 1), t0(Q3)) == make_ball(Q3, 0, V(1))
    assert stabilizes_t0(M(0, -1, 1, 0))


def test_orbit_report_examples():
    rep = orbit_report(M(3, 0, 0, 1), 1, 5)
    for k, z in rep.points:
        assert Q3.valuation(z) == V(k)
    assert rep.hyperbolic
    shift = orbit_report(M(1, 1, 0, 1), 0, 27, two_sided=False)
    counts = shift.residue_disc_counts(Q3, V(3))
    assert len(counts) == 27 and set(counts.values()) == {1}
    assert all(unit_ball(Q3).contains_point(z) for _, z in shift.points)


def test_projective_equality():
    assert M(2, 4, 6, 8) == M(1, 2, 3, 4)
    assert hash(M(2, 4, 6, 8)) == hash(M(1, 2, 3, 4))
    assert M(1, 2, 3, 4) != M(1, 2, 3, 5)
    g = M(3, 1, 2, 1)
    assert (g @ g.inverse()).is_identity()


# ---------------------------------------------------------------- properties


@pytest.mark.parametrize("name", ["Q3", "Qt", "rank2", "quad"])
def test_taylor_identity(name):
    f = FIELD_FACTORIES[name]()
    r = random.Random(37)
    done = 0
    while done < 60:
        g = random_moebius(f, r)
        B = random_ball(f, r)
        if infinity_in_image(g, B):
            continue
        p = B.center
        q = p + f.random_element(r, 0, 4) * f.element_of_valuation(B.radius)
        if q == p:
            continue
        lhs = f.valuation(apply(g, p) - apply(g, q))
        assert lhs == derivative_valuation(g, p) + f.valuation(p - q)
        done += 1


@pytest.mark.parametrize("name", ["Q3", "Qt", "rank2", "quad"])
def test_isometry_and_equivariance(name):
    f = FIELD_FACTORIES[name]()
    r = random.Random(41)
    branches = set()
    for _ in range(60):
        g = random_moebius(f, r)
        b1, b2 = random_ball(f, r), random_ball(f, r)
        assert distance(act_on_tree(g, b1), act_on_tree(g, b2)) == distance(b1, b2)
        branches.add(infinity_in_image(g, b1))
        pts = [f.random_element(r) for _ in range(3)]
        if r.random() < 0.3:
            pts[0] = INF
        try:
            t = t_map(f, *pts)
        except DegenerateTriple:
            continue
        assert act_on_tree(g, t) == t_map(f, *(apply(g, z) for z in pts))
    assert branches == {True, False}


@pytest.mark.parametrize("name", ["Q3", "Qt", "rank2"])
def test_varpi_conjugation_invariant(name):
    f = FIELD_FACTORIES[name]()
    r = random.Random(43)
    for _ in range(40):
        g, tau = random_moebius(f, r), random_moebius(f, r)
        assert varpi(tau @ g @ tau.inverse()) == varpi(g)


@pytest.mark.parametrize("name", ["Q3", "Qt", "rank2"])
def test_hyperbolic_ball_criterion_and_no_fixed_vertex(name):
    f = FIELD_FACTORIES[name]()
    r = random.Random(47)
    micro = ValueElement(tuple([1] + [0] * (f.rank - 1)))
    for _ in range(30):
        q = f.element_of_valuation(micro * r.randint(1, 3)) * r.choice([1, 2, -1])
        tau = random_moebius(f, r)
        g = tau @ Moebius.scaling(f, q) @ tau.inverse()
        cls = classify(g)
        assert cls.hyperbolic and cls.multiplier_valuation == f.valuation(q)
        for _ in range(4):
            B = random_ball(f, r)
            d = distance(B, act_on_tree(g, B))
            assert d.is_top_nilpotent()
            assert d >= cls.multiplier_valuation
        # a ball on the axis moves by exactly the multiplier
        z0, z1 = cls.fixed_points[0].point, cls.fixed_points[1].point
        on_axis = t_map(f, z0, z1, f.random_element(r))
        assert distance(on_axis, act_on_tree(g, on_axis)) == cls.multiplier_valuation


@pytest.mark.parametrize("name", ["Q3", "Qt", "rank2"])
def test_stabilizer_agrees_with_action(name):
    f = FIELD_FACTORIES[name]()
    r = random.Random(53)
    seen = set()
    for _ in range(60):
        g = random_moebius(f, r, -1, 2)
        s = stabilizes_t0(g)
        seen.add(s)
        assert s == (act_on_tree(g, t0(f)) == t0(f))
    for _ in range(30):
        a, b, c, d = (f.random_element(r, 0, 3) for _ in range(4))
        g = Moebius(f, f.one + a * f.element_of_valuation(V(*([1] + [0] * (f.rank - 1)))), b, c, f.one)
        if g.det() != 0 and f.valuation(g.det()) == V(*[0] * f.rank):
            assert stabilizes_t0(g) and act_on_tree(g, t0(f)) == t0(f)
    assert True in seen or name


def test_unit_scaling_separation_over_function_field():
    # over Q(t) the constants form the residue field, so 2^n - 2^m is a unit for n != m
    f = FuncFieldTadic()
    rep = orbit_report(Moebius.scaling(f, 2), f.one, 10)
    assert rep.all_pairwise_equal and rep.pairwise_valuations == (V(0),)


def test_finite_order_detection():
    # varpi = 1, 2, 3 give projective orders 3, 4, 6
    for a, b, c, d, n in [(0, -1, 1, 1, 3), (1, -1, 1, 1, 4), (2, -1, 1, 1, 6)]:
        g = M(a, b, c, d)
        assert classify(g).kind == "finite-order-candidate"
        power = g
        for _ in range(n - 1):
            power = power @ g
        assert power.is_identity()
    assert classify(M(2, 1, 1, 1)).kind == "non-hyperbolic-infinite"
    # over Q(t) a non-constant varpi cannot satisfy an integer polynomial
    f = FuncFieldTadic()
    g = Moebius(f, 1, 1, f.t, 1)
    assert f.valuation(varpi(g)) == V(0) and classify(g).kind == "non-hyperbolic-infinite"
    h = Moebius(f, 0, -1, 1, 1)
    assert classify(h).kind == "finite-order-candidate"
