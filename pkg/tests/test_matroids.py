import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropsection.matroids import (
    Matroid,
    basis_exchange_to_contain,
    extend_weights_from_basis,
    fundamental_circuit,
    greedy_compatible_basis,
    is_in_trop_matroid,
)
from tropsection.tropcore import INF

F = Fraction


def weights(m: Matroid, values):
    return {e: (v if v is INF else F(v)) for e, v in zip(m.ground, values)}


def brute_max_weight(m: Matroid, eta):
    """Largest sorted weight profile over all bases (finite weights only)."""
    return max(sorted((eta[e] for e in b), reverse=True) for b in m.bases())


# --- examples ---------------------------------------------------------------


def test_fundamental_circuits():
    k3 = Matroid.complete_graph(3)
    assert fundamental_circuit(k3, [(0, 1), (0, 2)], (1, 2)) == {(0, 1), (0, 2), (1, 2)}
    k22 = Matroid.complete_bipartite(2, 2)
    assert fundamental_circuit(k22, [(0, 0), (0, 1), (1, 0)], (1, 1)) == set(k22.ground)
    lin = Matroid.linear([(1, 0), (0, 1), (1, 1)])
    assert fundamental_circuit(lin, [0, 1], 2) == {0, 1, 2}


def test_circuit_counts():
    assert len(Matroid.complete_graph(4).circuits()) == 7
    assert len(Matroid.complete_graph(5).circuits()) == 37
    assert len(Matroid.complete_bipartite(2, 3).circuits()) == 3


def test_greedy_examples():
    k3 = Matroid.complete_graph(3)
    assert greedy_compatible_basis(k3, weights(k3, [2, 0, 0])) == ((0, 1), (0, 2))
    assert greedy_compatible_basis(k3, weights(k3, [5, 5, 5])) == ((0, 1), (0, 2))


def test_extend_examples():
    k4 = Matroid.complete_graph(4)
    path = [(0, 1), (1, 2), (2, 3)]
    eta = extend_weights_from_basis(k4, path, {(0, 1): F(0), (1, 2): F(1), (2, 3): F(0)})
    assert (eta[(0, 2)], eta[(1, 3)], eta[(0, 3)]) == (0, 0, 0)
    assert set(extend_weights_from_basis(k4, path, {e: INF for e in path}).values()) == {INF}
    k22 = Matroid.complete_bipartite(2, 2)
    eta = extend_weights_from_basis(k22, [(0, 0), (0, 1), (1, 0)], {(0, 0): F(0), (0, 1): F(3), (1, 0): F(5)})
    assert eta[(1, 1)] == 0


def test_membership_examples():
    k3 = Matroid.complete_graph(3)
    assert is_in_trop_matroid(k3, weights(k3, [0, 0, 1]))[0]
    ok, wit = is_in_trop_matroid(k3, weights(k3, [0, 1, 2]))
    assert not ok and wit == set(k3.ground)
    k22 = Matroid.complete_bipartite(2, 2)
    assert is_in_trop_matroid(k22, {(0, 0): F(2), (0, 1): F(0), (1, 0): F(2), (1, 1): F(0)})[0]


def test_basis_exchange_star():
    k4 = Matroid.complete_graph(4)
    eta = {e: F(0) for e in k4.ground}
    star = [(0, 2), (1, 2), (2, 3)]
    out = basis_exchange_to_contain(k4, star, eta, [0, 1])
    assert (0, 1) in out
    assert basis_exchange_to_contain(k4, star, eta, [0, 2]) == tuple(star)


def test_basis_exchange_removes_lightest_spoke():
    # star at the extra vertex 0 with leaves 1, 2, 3 and weights 0 ≤ 1 ≤ 2
    k4 = Matroid.complete_graph(4)
    star = [(0, 1), (0, 2), (0, 3)]
    eta = extend_weights_from_basis(k4, star, {(0, 1): F(0), (0, 2): F(1), (0, 3): F(2)})
    out = basis_exchange_to_contain(k4, star, eta, [1, 2, 3])
    assert (0, 1) not in out
    assert sorted(eta[e] for e in out) == sorted(eta[e] for e in star)
    inner = [e for e in out if 0 not in e]
    assert len(inner) == 2


def test_basis_exchange_rejects_incompatible():
    k3 = Matroid.complete_graph(3)
    eta = weights(k3, [2, 0, 0])
    with pytest.raises(ValueError):
        basis_exchange_to_contain(k3, [(0, 2), (1, 2)], eta, [0, 1])


# --- exhaustive and property checks -----------------------------------------

SMALL = [Matroid.complete_graph(4), Matroid.complete_bipartite(2, 3)]


@pytest.mark.parametrize("m", SMALL, ids=["K4", "K23"])
def test_extend_round_trip_exhaustive(m):
    bases = m.bases()
    for b in bases:
        for vals in itertools.product(range(3), repeat=len(b)):
            eta = extend_weights_from_basis(m, b, dict(zip(b, map(F, vals))))
            assert is_in_trop_matroid(m, eta, shortcut=False)[0]
    for vals in itertools.product(range(3), repeat=len(m.ground)):
        eta = weights(m, vals)
        if not is_in_trop_matroid(m, eta)[0]:
            continue
        for b in bases:
            if m.is_compatible(b, eta):
                assert extend_weights_from_basis(m, b, {e: eta[e] for e in b}) == eta


@pytest.mark.parametrize(
    "m, trees",
    list(zip(SMALL + [Matroid.complete_graph(5), Matroid.complete_bipartite(3, 3)], [16, 12, 125, 81])),
    ids=["K4", "K23", "K5", "K33"],
)
def test_greedy_is_maximum_weight(m, trees):
    bases = m.bases()
    for vals in itertools.islice(itertools.product(range(3), repeat=len(m.ground)), 0, None, 37):
        eta = weights(m, vals)
        b = greedy_compatible_basis(m, eta)
        assert m.is_basis(b)
        assert sorted((eta[e] for e in b), reverse=True) == brute_max_weight(m, eta)
        assert m.is_compatible(b, eta)
    # Cayley's formula and its bipartite analogue
    assert len(bases) == trees


GRID = [F(0), F(1), F(2), INF]


@pytest.mark.parametrize(
    "m",
    [Matroid.complete_graph(3), Matroid.complete_graph(4), Matroid.complete_bipartite(2, 2), Matroid.complete_bipartite(2, 3)],
    ids=["K3", "K4", "K22", "K23"],
)
def test_shortcut_matches_all_circuits_exhaustive(m):
    for vals in itertools.product(GRID, repeat=len(m.ground)):
        eta = dict(zip(m.ground, vals))
        assert is_in_trop_matroid(m, eta)[0] == is_in_trop_matroid(m, eta, shortcut=False)[0], vals


@pytest.mark.parametrize(
    "m",
    [Matroid.complete_graph(5), Matroid.complete_bipartite(3, 3), Matroid.complete_bipartite(2, 5)],
    ids=["K5", "K33", "K25"],
)
@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_shortcut_matches_all_circuits_sampled(m, data):
    vals = data.draw(st.lists(st.sampled_from(GRID), min_size=len(m.ground), max_size=len(m.ground)))
    eta = dict(zip(m.ground, vals))
    assert is_in_trop_matroid(m, eta)[0] == is_in_trop_matroid(m, eta, shortcut=False)[0]


@pytest.mark.parametrize(
    "m", [Matroid.complete_graph(5), Matroid.complete_bipartite(3, 3)], ids=["K5", "K33"]
)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_extend_round_trip_sampled(m, data):
    bases = m.bases()
    b = data.draw(st.sampled_from(bases))
    vals = data.draw(st.lists(st.integers(0, 3), min_size=len(b), max_size=len(b)))
    eta = extend_weights_from_basis(m, b, dict(zip(b, map(F, vals))))
    assert is_in_trop_matroid(m, eta, shortcut=False)[0]
    for other in bases:
        if m.is_compatible(other, eta):
            assert extend_weights_from_basis(m, other, {e: eta[e] for e in other}) == eta


@settings(max_examples=80, deadline=None)
@given(st.integers(4, 6), st.data())
def test_basis_exchange_preserves_weights(n, data):
    m = Matroid.complete_graph(n)
    bases = m.bases()
    b = data.draw(st.sampled_from(bases))
    vals = data.draw(st.lists(st.integers(0, 3), min_size=len(b), max_size=len(b)))
    eta = extend_weights_from_basis(m, b, dict(zip(b, map(F, vals))))
    vs = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=n, unique=True))
    out = basis_exchange_to_contain(m, b, eta, vs)
    assert sorted(eta[e] for e in out) == sorted(eta[e] for e in b)
    inside = [e for e in out if e[0] in vs and e[1] in vs]
    assert len(inside) == len(vs) - 1


def test_linear_matroid_rank_and_circuits():
    lin = Matroid.linear([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (0, 0, 0)])
    assert lin.rank() == 3
    assert frozenset({4}) in lin.circuits()
    assert frozenset({0, 1, 2}) in lin.circuits()
    assert not lin.is_independent([0, 1, 2])
