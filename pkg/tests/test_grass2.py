import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from tropsection import grass2
from tropsection.grass2 import (
    PlueckerPoint,
    build_grass_section,
    compatible_trees,
    decompose,
    eval_grass_section,
    eval_with_gauge,
    line_through_zero_check,
    membership_trop_gr2,
    support,
)
from tropsection.linsection import NotInTropicalisation
from tropsection.matroids import Matroid
from tropsection.tropcore import INF
from tropsection.valfield import dot_weight

F = Fraction
XI = PlueckerPoint.from_sequence(4, [3, 1, 1, 3, 2, 0])


def all_inf(m):
    return PlueckerPoint(m, {p: INF for p in grass2.pairs(m)})


def test_support_examples():
    assert support(all_inf(4)) == ()
    only = PlueckerPoint(4, {**all_inf(4).values, (0, 1): F(5)})
    assert support(only) == (0, 1)
    assert support(XI) == (0, 1, 2, 3)


def test_membership_examples():
    assert membership_trop_gr2(XI) == (True, None)
    assert membership_trop_gr2(PlueckerPoint.from_sequence(4, [0, 0, 0, 0, 0, 1]))[0]
    assert membership_trop_gr2(PlueckerPoint.from_sequence(4, [0, 0, 0, 0, 1, 2])) == (False, (0, 1, 2, 3))


def test_line_through_zero_examples():
    assert line_through_zero_check(PlueckerPoint.from_sequence(4, [0] * 6))
    k4 = Matroid.complete_graph(4)
    eta = k4.extend_weights_from_basis([(0, 1), (1, 2), (2, 3)], {(0, 1): F(0), (1, 2): F(1), (2, 3): F(0)})
    assert line_through_zero_check(PlueckerPoint(4, eta))
    assert not line_through_zero_check(PlueckerPoint.from_sequence(3, [0, 1, 1]))


def test_decompose_examples():
    tau, eta, J = decompose(XI)
    assert tau == (1, 2, 0, 0)
    assert eta.as_sequence() == (0, 0, 0, 1, 0, 0)
    assert J == (0, 1, 2, 3)
    only = PlueckerPoint(4, {**all_inf(4).values, (0, 1): F(5)})
    tau, eta, J = decompose(only)
    assert tau == (5, 5, INF, INF) and eta[0, 1] == -5
    zero = PlueckerPoint.from_sequence(4, [0] * 6)
    tau, eta, _ = decompose(zero)
    assert tau == (0, 0, 0, 0) and eta == zero


def test_decompose_rejects_non_members():
    with pytest.raises(NotInTropicalisation):
        decompose(PlueckerPoint.from_sequence(4, [0, 0, 0, 0, 1, 2]))


def test_section_examples():
    sp = build_grass_section(XI)
    assert eval_grass_section(sp, grass2.coordinate(4, 0, 1)) == 3
    assert eval_grass_section(sp, grass2.pluecker_quadric(4, 0, 1, 2, 3)) is INF
    assert eval_grass_section(sp, grass2.coordinate(4, 0, 1) * grass2.coordinate(4, 2, 3)) == 3


def test_all_infinite_point():
    sp = build_grass_section(all_inf(4))
    assert sp.inner is None
    assert eval_grass_section(sp, grass2.coordinate(4, 0, 1)) is INF
    names = grass2.var_names(4)
    f = grass2.coordinate(4, 0, 1) + gen.Polynomial.constant(names, gen.ValuedScalar.t(F(3, 2)))
    assert eval_grass_section(sp, f) == F(3, 2)


def test_tree_argument_checked():
    sp = build_grass_section(XI)
    with pytest.raises(ValueError):
        build_grass_section(XI, tree=[(0, 1), (0, 2), (0, 3)][:2] + [(1, 2)])
    assert build_grass_section(XI, tree=sp.tree).tree == sp.tree


seeds = st.integers(0, 10**9)
sizes = st.sampled_from([4, 5, 6])


@settings(max_examples=60, deadline=None)
@given(sizes, seeds)
def test_round_trip_and_ideal(m, seed):
    rng = random.Random(seed)
    xi = gen.random_pluecker(m, rng, boundary=0.5)
    sp = build_grass_section(xi)
    for i, j in grass2.pairs(m):
        assert eval_grass_section(sp, grass2.coordinate(m, i, j)) == xi[i, j]
    for q in gen.grass_ideal(m)[:5]:
        assert eval_grass_section(sp, q) is INF


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([4, 5]), seeds)
def test_tree_independence(m, seed):
    rng = random.Random(seed)
    xi = gen.random_pluecker(m, rng, boundary=0.0)
    if rng.random() < 0.5:
        # coarse weights give many compatible trees
        xi = PlueckerPoint(m, {p: F(rng.randint(0, 1)) for p in grass2.pairs(m)})
        if not membership_trop_gr2(xi)[0]:
            xi = PlueckerPoint.from_sequence(m, [0] * len(grass2.pairs(m)))
    sp = build_grass_section(xi)
    polys = gen.corpus(grass2.var_names(m), rng, size=10)
    ref = [eval_grass_section(sp, f) for f in polys]
    trees = compatible_trees(sp.eta, sp.J)
    assert sp.tree in [tuple(sorted(t)) for t in trees]
    for t in trees:
        other = build_grass_section(xi, tree=t)
        assert [eval_grass_section(other, f) for f in polys] == ref


@settings(max_examples=40, deadline=None)
@given(sizes, seeds)
def test_equivariance(m, seed):
    rng = random.Random(seed)
    xi = gen.random_pluecker(m, rng)
    shift = [gen.rand_q(rng) for _ in range(m)]
    moved = PlueckerPoint(m, {(i, j): xi[i, j] + shift[i] + shift[j] for i, j in grass2.pairs(m)})
    a, b = build_grass_section(xi), build_grass_section(moved)
    f = gen.random_polynomial(grass2.var_names(m), rng)
    for beta, part in f.weight_decompose(grass2.torus_weights(m)).items():
        e0, e1 = eval_grass_section(a, part), eval_grass_section(b, part)
        if e0 is INF:
            assert e1 is INF
        else:
            assert e1 - e0 == dot_weight(beta, shift)


@settings(max_examples=40, deadline=None)
@given(sizes, seeds, st.integers(-5, 5))
def test_scaling_consistency(m, seed, c):
    rng = random.Random(seed)
    sp = build_grass_section(gen.random_pluecker(m, rng))
    for f in gen.corpus(grass2.var_names(m), rng, size=6):
        assert eval_with_gauge(sp, f, F(c)) == eval_grass_section(sp, f)


@settings(max_examples=40, deadline=None)
@given(sizes, seeds)
def test_multiplicative_on_homogeneous(m, seed):
    rng = random.Random(seed)
    sp = build_grass_section(gen.random_pluecker(m, rng))
    w = grass2.torus_weights(m)
    names = grass2.var_names(m)
    f = next(iter(gen.random_polynomial(names, rng).weight_decompose(w).values()))
    g = next(iter(gen.random_polynomial(names, rng).weight_decompose(w).values()))
    ef, eg = eval_grass_section(sp, f), eval_grass_section(sp, g)
    assert eval_grass_section(sp, f * g) == ef + eg
    assert eval_grass_section(sp, f + g) >= min(ef, eg)


def leave_support(xi: PlueckerPoint, i: int, k) -> PlueckerPoint:
    return PlueckerPoint(xi.m, {p: (v + k if i in p else v) for p, v in xi.values.items()})


@settings(max_examples=25, deadline=None)
@given(sizes, seeds)
def test_boundary_continuity(m, seed):
    rng = random.Random(seed)
    xi = gen.random_pluecker(m, rng, boundary=0.3)
    J = support(xi)
    if len(J) < 3:
        return
    i = rng.choice(J)
    limit = PlueckerPoint(m, {p: (INF if i in p else v) for p, v in xi.values.items()})
    at_limit = build_grass_section(limit)
    names = grass2.var_names(m)
    polys = gen.corpus(names, rng, size=6)
    seq = [build_grass_section(leave_support(xi, i, k)) for k in (1000, 1001, 1002)]
    for f in polys:
        assert gen.converges([eval_grass_section(sp, f) for sp in seq], eval_grass_section(at_limit, f))
