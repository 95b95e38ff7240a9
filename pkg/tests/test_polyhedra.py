from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from tropsection import hyperdet
from tropsection.polyhedra import (
    Constraint,
    LinearProgram,
    RationalCone,
    cone_hull_sum,
    cover_equality_check,
    double_description,
    fourier_motzkin_feasible,
    lp_feasible,
    lp_maximize,
    verify_certificate,
)

F = Fraction
C = Constraint.make


def test_lp_examples():
    res = lp_feasible(LinearProgram(1, (C([1], ">=", 1), C([1], "<=", 0))))
    assert not res.feasible and verify_certificate(LinearProgram(1, (C([1], ">=", 1), C([1], "<=", 0))), res.certificate)
    res = lp_feasible(LinearProgram(1, (C([1], ">=", 1),)))
    assert res.feasible and res.witness[0] >= 1
    res = lp_feasible(LinearProgram(1, (C([1], ">", 0), C([1], "<", 1), C([2], "==", 1))))
    assert res.feasible and res.witness == (F(1, 2),)


def test_strict_infeasible_needs_strict_multiplier():
    lp = LinearProgram(1, (C([1], ">", 0), C([1], "<=", 0)))
    res = lp_feasible(lp)
    assert not res.feasible
    assert verify_certificate(lp, res.certificate)
    assert not fourier_motzkin_feasible(lp)


def test_empty_program():
    assert lp_feasible(LinearProgram(2)).feasible


def test_maximize():
    lp = LinearProgram(2, (C([1, 0], "<=", 3), C([0, 1], "<=", 2), C([1, 1], "<=", 4)), objective=(F(1), F(1)))
    assert lp_maximize(lp).value == 4
    unb = LinearProgram(1, (C([1], ">=", 0),), objective=(F(1),))
    assert lp_maximize(unb).value is None
    with pytest.raises(ValueError):
        lp_maximize(LinearProgram(1, (C([1], ">", 0),), objective=(F(1),)))


ops = st.sampled_from(["<=", ">=", "<", ">", "=="])


@st.composite
def programs(draw, max_vars=4, max_cons=6):
    n = draw(st.integers(1, max_vars))
    k = draw(st.integers(0, max_cons))
    cons = []
    for _ in range(k):
        coeffs = draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
        op = draw(ops)
        if op == "==" and draw(st.booleans()):
            op = "<="
        cons.append(C(coeffs, op, draw(st.integers(-4, 4))))
    return LinearProgram(n, tuple(cons))


@settings(max_examples=300, deadline=None)
@given(programs())
def test_lp_agrees_with_fourier_motzkin(lp):
    res = lp_feasible(lp)
    assert res.feasible == fourier_motzkin_feasible(lp)
    if res.feasible:
        assert all(c.holds(res.witness) for c in lp.constraints)
    else:
        assert verify_certificate(lp, res.certificate)
        mult = res.certificate.multipliers
        for y, c in zip(mult, lp.constraints):
            if c.op != "==":
                assert y >= 0


@settings(max_examples=100, deadline=None)
@given(programs(max_vars=3, max_cons=5), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_maximize_matches_scipy(lp, obj):
    cons = tuple(c if c.op not in ("<", ">") else C(c.coeffs, c.op + "=", c.rhs) for c in lp.constraints)
    lp = LinearProgram(lp.nvars, cons, tuple(F(x) for x in obj[: lp.nvars]))
    res = lp_maximize(lp)
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for c in cons:
        a, op, b = c.normalized()
        (a_eq if op == "==" else a_ub).append([float(x) for x in a])
        (b_eq if op == "==" else b_ub).append(float(b))
    ref = linprog(
        [-float(x) for x in lp.objective],
        A_ub=a_ub or None,
        b_ub=b_ub or None,
        A_eq=a_eq or None,
        b_eq=b_eq or None,
        bounds=[(None, None)] * lp.nvars,
        method="highs",
    )
    if not res.feasible:
        assert ref.status == 2
    elif res.value is None:
        assert ref.status == 3
    else:
        assert ref.status == 0
        assert abs(float(res.value) + ref.fun) < 1e-7
        assert all(c.holds(res.witness) for c in cons)


# --- cones ------------------------------------------------------------------


def test_double_description_orthant():
    n = 3
    ineqs = [tuple(F(int(i == j)) for j in range(n)) for i in range(n)]
    rays, lin = double_description(ineqs, [], n)
    assert sorted(rays) == sorted(ineqs)
    assert lin == []


def test_hull_sum_examples():
    zero_cone = RationalCone.from_generators(3, [])
    full = cone_hull_sum([[1, 0, 0], [0, 1, 0], [0, 0, 1]], zero_cone)
    assert full.dimension() == 3 and full.lineality_dimension() == 3
    ray = RationalCone.from_generators(2, [[1, 2]])
    same = cone_hull_sum([[0, 0]], ray)
    assert same.contains([2, 4]) and not same.contains([-1, -2])
    ctx = hyperdet.default_context()
    one = RationalCone.from_generators(8, [[1] * 8])
    summed = cone_hull_sum(ctx.a_cols, one)
    assert summed.dimension() == 4
    assert summed.contains([-1] * 8)
    # the all-one array lies in im A
    assert summed.lineality_dimension() == 4


def test_cover_check_examples():
    a = RationalCone.from_generators(2, [[1, 0]])
    b = RationalCone.from_generators(2, [[0, 1]])
    assert cover_equality_check([[0, 0]], a, a).equal
    assert cover_equality_check([[0, 0]], a, b).equal
    # modulo the z-axis the ray (1, 1, 5) lands inside the quadrant cone, but the cones meet only at 0
    c1 = RationalCone.from_generators(3, [[1, 0, 0], [0, 1, 0]])
    c2 = RationalCone.from_generators(3, [[1, 1, 5]])
    chk = cover_equality_check([[0, 0, 1]], c1, c2)
    assert not chk.equal
    x = chk.counterexample
    assert cone_hull_sum([[0, 0, 1]], c1).contains(x) and cone_hull_sum([[0, 0, 1]], c2).contains(x)
    assert not cone_hull_sum([[0, 0, 1]], c1.intersect(c2)).contains(x)


@st.composite
def cones(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(0, 6))
    l = draw(st.integers(0, 1))
    vec = st.lists(st.integers(-2, 2), min_size=n, max_size=n)
    rays = draw(st.lists(vec, min_size=k, max_size=k))
    lin = draw(st.lists(vec, min_size=l, max_size=l))
    return RationalCone.from_generators(n, rays, lin)


@settings(max_examples=80, deadline=None)
@given(cones(), st.data())
def test_cone_descriptions_agree(cone, data):
    assert cone.verify()
    n = cone.dim_ambient
    for _ in range(3):
        x = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
        assert cone.contains(x) == cone.contains_by_generators(x)
    back = RationalCone.from_inequalities(n, cone.inequalities, cone.equations)
    assert back.dimension() == cone.dimension()
    for r in cone.rays:
        assert back.contains(r)
