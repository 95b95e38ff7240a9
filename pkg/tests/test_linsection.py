import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from tropsection.linsection import (
    LinearSpaceParam,
    NotInTropicalisation,
    build_lin_section,
    eval_lin_section,
    shilov_sample_oracle,
    trop_membership_linear,
)
from tropsection.tropcore import INF
from tropsection.valfield import Polynomial, ValuedScalar

F = Fraction

DIAG = LinearSpaceParam.from_equations([[1, -1]])  # x1 = x2
SUM_ZERO = LinearSpaceParam.from_equations([[1, 1, 1]])


def var(Y, k):
    return Polynomial.var(Y.names, Y.names[k])


def test_membership_examples():
    assert trop_membership_linear(DIAG, [3, 3]) == (True, None)
    ok, wit = trop_membership_linear(DIAG, [0, 1])
    assert not ok and wit == {0, 1}
    assert trop_membership_linear(SUM_ZERO, [0, 0, 1])[0]


def test_section_examples():
    sp = build_lin_section(DIAG, [0, 0])
    assert sp.zero == frozenset() and sp.basis == (0,) and sp.rewrite[1] == {0: 1}
    sp = build_lin_section(DIAG, [INF, INF])
    assert sp.zero == {0, 1} and sp.basis == ()
    sp = build_lin_section(SUM_ZERO, [0, 0, 1])
    assert sp.basis == (0, 2)
    assert sp.rewrite[1] == {0: -1, 2: -1}


def test_section_rejects_non_members():
    with pytest.raises(NotInTropicalisation) as err:
        build_lin_section(DIAG, [0, 1])
    assert err.value.witness == {0, 1}


def test_eval_examples():
    x1, x2 = var(DIAG, 0), var(DIAG, 1)
    assert eval_lin_section(build_lin_section(DIAG, [0, 0]), x1 - x2) is INF
    assert eval_lin_section(build_lin_section(DIAG, [1, 1]), x1 + x2) == 1
    f = x1 * x1 * ValuedScalar.t(1)
    assert eval_lin_section(build_lin_section(DIAG, [F(1, 2), F(1, 2)]), f) == 2


def test_oracle_examples():
    sp = build_lin_section(DIAG, [0, 0])
    x1, x2 = var(DIAG, 0), var(DIAG, 1)
    assert set(shilov_sample_oracle(sp, x1, 10, 0).values) == {0}
    assert set(shilov_sample_oracle(sp, x1 - x2, 10, 0).values) == {INF}
    assert set(shilov_sample_oracle(sp, x1 + x2, 10, 0).values) == {0}


def test_supplied_basis_must_be_compatible():
    with pytest.raises(ValueError):
        build_lin_section(SUM_ZERO, [0, 0, 1], basis=[0, 1])


def test_vanishing_coordinate_with_finite_value():
    Y = LinearSpaceParam(((F(1),), (F(0),)))
    with pytest.raises(NotInTropicalisation):
        build_lin_section(Y, [0, 0])


seeds = st.integers(0, 10**9)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_round_trip(seed):
    rng = random.Random(seed)
    Y = gen.random_linear_space(rng)
    eta = gen.random_linear_member(Y, rng)
    assert trop_membership_linear(Y, eta)[0]
    sp = build_lin_section(Y, eta)
    for i in range(Y.n):
        assert eval_lin_section(sp, var(Y, i)) == eta[i]
    for f in gen.linear_ideal(Y):
        assert eval_lin_section(sp, f) is INF


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_basis_independence(seed):
    rng = random.Random(seed)
    Y = gen.random_linear_space(rng, n=rng.randint(2, 6))
    eta = gen.random_linear_member(Y, rng)
    sp = build_lin_section(Y, eta)
    m = Y.matroid(sp.zero)
    w = {i: eta[i] for i in m.ground}
    polys = gen.corpus(Y.names, rng, size=12)
    ref = [eval_lin_section(sp, f) for f in polys]
    for b in m.bases():
        if m.is_compatible(b, w):
            other = build_lin_section(Y, eta, basis=b)
            assert [eval_lin_section(other, f) for f in polys] == ref


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_valuation_axioms(seed):
    rng = random.Random(seed)
    Y = gen.random_linear_space(rng, n=rng.randint(2, 5))
    sp = build_lin_section(Y, gen.random_linear_member(Y, rng))
    f = gen.random_polynomial(Y.names, rng, terms=3, degree=2)
    g = gen.random_polynomial(Y.names, rng, terms=3, degree=2)
    ef, eg = eval_lin_section(sp, f), eval_lin_section(sp, g)
    assert eval_lin_section(sp, f * g) == ef + eg
    assert eval_lin_section(sp, f + g) >= min(ef, eg)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_oracle_dominates_and_is_attained(seed):
    rng = random.Random(seed)
    Y = gen.random_linear_space(rng, n=rng.randint(2, 5))
    sp = build_lin_section(Y, gen.random_linear_member(Y, rng))
    f = gen.random_polynomial(Y.names, rng, terms=3, degree=2)
    value = eval_lin_section(sp, f)
    samples = shilov_sample_oracle(sp, f, 8, seed)
    assert all(s >= value for s in samples.values)
    assert samples.minimum == value


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_boundary_continuity(seed):
    rng = random.Random(seed)
    Y = gen.random_linear_space(rng, n=rng.randint(3, 6), d=rng.randint(2, 3))
    flats = [f for level in gen._flats_of(Y, frozenset())[:-1] for f in level]
    if not flats:
        return
    flat = rng.choice(flats)
    # a chain compatible with the flat, so adding k·e_flat stays in the same Bergman cone
    base = gen.random_flag_point(Y, frozenset(), rng, through=flat)
    limit = tuple(INF if i in flat else base[i] for i in range(Y.n))
    sp_lim = build_lin_section(Y, limit)
    polys = gen.corpus(Y.names, rng, size=8)
    for f in polys:
        vals = [
            eval_lin_section(build_lin_section(Y, [base[i] + (k if i in flat else 0) for i in range(Y.n)]), f)
            for k in (1000, 1001, 1002)
        ]
        assert gen.converges(vals, eval_lin_section(sp_lim, f))
