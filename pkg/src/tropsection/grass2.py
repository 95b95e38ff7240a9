"""Section over the tropical Grassmannian of planes.

A point ξ assigns a value to every pair i < j of ``range(m)``.  Its support
J is the set of indices touching a finite coordinate.  On the support, ξ
splits as ``ξ_ij = τ_i + τ_j + η_ij`` where τ comes from the stable
intersection of the tropical line of ξ with the hyperplane ``H`` and η is a
tropical line through the origin.  The section value of a polynomial is
then ``min_β (σ_J(η)(f_β) + β·τ)``, with σ_J the linear-space section of
``Y_J = {x_ij = y_i - y_j on J, 0 elsewhere}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .linsection import (
    LinearSpaceParam,
    LinSectionPoint,
    NotInTropicalisation,
    build_lin_section,
    mu_evaluate,
)
from .matroids import Matroid
from .tropcore import INF, TropicalError, TropScalar, min_attained_twice, stable_intersection_line_H, to_trop
from .valfield import Polynomial

Pair = tuple[int, int]


def pairs(m: int) -> list[Pair]:
    return list(itertools.combinations(range(m), 2))


def var_name(i: int, j: int, m: int) -> str:
    """Name of the coordinate for the 0-based pair (i, j): ``x12`` style, 1-based."""
    i, j = min(i, j), max(i, j)
    return f"x{i + 1}{j + 1}" if m < 10 else f"x{i + 1}_{j + 1}"


def var_names(m: int) -> tuple[str, ...]:
    return tuple(var_name(i, j, m) for i, j in pairs(m))


@dataclass(frozen=True)
class PlueckerPoint:
    m: int
    values: Mapping[Pair, TropScalar]

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError("need at least two indices")
        if set(self.values) != set(pairs(self.m)):
            raise ValueError("a value is needed for every pair i < j")

    @classmethod
    def from_sequence(cls, m: int, seq: Sequence[object]) -> "PlueckerPoint":
        ps = pairs(m)
        if len(seq) != len(ps):
            raise ValueError(f"expected {len(ps)} values for m = {m}, got {len(seq)}")
        return cls(m, {p: to_trop(v) for p, v in zip(ps, seq)})

    @classmethod
    def from_mapping(cls, m: int, values: Mapping[Pair, object]) -> "PlueckerPoint":
        out = {}
        for (i, j), v in values.items():
            out[(min(i, j), max(i, j))] = to_trop(v)
        return cls(m, out)

    def __getitem__(self, ij: Pair) -> TropScalar:
        i, j = ij
        return self.values[(i, j) if i < j else (j, i)]

    def as_sequence(self) -> tuple[TropScalar, ...]:
        return tuple(self.values[p] for p in pairs(self.m))

    def as_named(self) -> dict[str, TropScalar]:
        return {var_name(i, j, self.m): self.values[(i, j)] for i, j in pairs(self.m)}


def random_line_point(m: int, rng: random.Random, bound: int = 10) -> PlueckerPoint:
    """A random finite point of Trop Gr(2, m): a tree metric plus a torus shift."""
    K = Matroid.complete_graph(range(m))
    tree = K.greedy_compatible_basis({e: Fraction(rng.randint(0, 10**6)) for e in K.ground})
    eta = K.extend_weights_from_basis(tree, {e: Fraction(rng.randint(-bound, bound)) for e in tree})
    tau = [Fraction(rng.randint(-bound, bound)) for _ in range(m)]
    return PlueckerPoint(m, {e: tau[e[0]] + tau[e[1]] + eta[e] for e in K.ground})


def support(xi: PlueckerPoint) -> tuple[int, ...]:
    J = tuple(i for i in range(xi.m) if any(xi[i, j] is not INF for j in range(xi.m) if j != i))
    if len(J) == 1:  # cannot happen: finite pairs touch two indices
        raise TropicalError("support of size one")
    return J


def membership_trop_gr2(xi: PlueckerPoint) -> tuple[bool, tuple[int, ...] | None]:
    """Three-term tropical Plücker relations on every quadruple of the support."""
    for i, j, k, l in itertools.combinations(support(xi), 4):
        terms = [xi[i, j] + xi[k, l], xi[i, k] + xi[j, l], xi[i, l] + xi[j, k]]
        if not min_attained_twice(terms):
            return False, (i, j, k, l)
    return True, None


def line_through_zero_check(eta: PlueckerPoint, J: Sequence[int] | None = None) -> bool:
    """Every triangle of K_J has its minimum attained twice."""
    J = support(eta) if J is None else tuple(J)
    if len(J) < 3:
        return True
    K = Matroid.complete_graph(J)
    return K.is_in_trop({e: eta[e] for e in K.ground})[0]


def decompose(xi: PlueckerPoint, check: bool = True) -> tuple[tuple[TropScalar, ...], PlueckerPoint, tuple[int, ...]]:
    """Split ξ as ``τ_i + τ_j + η_ij`` on the support; returns ``(τ, η, J)``."""
    J = support(xi)
    if not J:
        raise TropicalError("the all-∞ point has no decomposition")
    if check:
        ok, quad = membership_trop_gr2(xi)
        if not ok:
            raise NotInTropicalisation(f"Plücker relation fails on {quad}", quad)
    tau = stable_intersection_line_H(dict(xi.values), xi.m, check=check)
    eta = {}
    for i, j in pairs(xi.m):
        if i in J and j in J and xi[i, j] is not INF:
            eta[(i, j)] = xi[i, j] - tau[i] - tau[j]
        else:
            eta[(i, j)] = INF
    eta_pt = PlueckerPoint(xi.m, eta)
    if check and not line_through_zero_check(eta_pt, J):
        raise AssertionError("η is not a tropical line through the origin")
    return tau, eta_pt, J


@lru_cache(maxsize=None)
def stratum_space(m: int, J: tuple[int, ...]) -> LinearSpaceParam:
    """``Y_J``: x_ij = y_i - y_j for i, j in J and 0 otherwise (parameters y_0 … y_{m-1})."""
    forms = []
    for i, j in pairs(m):
        row = [Fraction(0)] * m
        if i in J and j in J:
            row[i], row[j] = Fraction(1), Fraction(-1)
        forms.append(tuple(row))
    return LinearSpaceParam(tuple(forms), var_names(m))


@lru_cache(maxsize=None)
def torus_weights(m: int) -> dict[str, tuple[int, ...]]:
    """x_ij has weight e_i + e_j."""
    return {
        var_name(i, j, m): tuple(int(k in (i, j)) for k in range(m)) for i, j in pairs(m)
    }


@dataclass(frozen=True)
class GrassSectionPoint:
    xi: PlueckerPoint
    J: tuple[int, ...]
    tau: tuple[TropScalar, ...]
    eta: PlueckerPoint | None
    tree: tuple[Pair, ...]
    inner: LinSectionPoint | None

    def check_invariants(self) -> None:
        for i, j in pairs(self.xi.m):
            if i in self.J and j in self.J:
                want = self.tau[i] + self.tau[j] + self.eta[i, j]
            else:
                want = INF
            if want != self.xi[i, j]:
                raise AssertionError(f"A τ + η differs from ξ at {(i, j)}")


def compatible_trees(xi_or_eta: PlueckerPoint, J: Sequence[int]) -> list[tuple[Pair, ...]]:
    """All spanning trees of K_J that are compatible with the finite weights η."""
    K = Matroid.complete_graph(J)
    w = {e: xi_or_eta[e] for e in K.ground}
    return [b for b in K.bases() if K.is_compatible(b, w)]


def build_grass_section(xi: PlueckerPoint, check: bool = True, tree: Sequence[Pair] | None = None) -> GrassSectionPoint:
    J = support(xi)
    if not J:
        return GrassSectionPoint(xi, (), (INF,) * xi.m, None, (), None)
    tau, eta, J = decompose(xi, check=check)
    Y = stratum_space(xi.m, J)
    index = {p: k for k, p in enumerate(pairs(xi.m))}
    K = Matroid.complete_graph(J)
    weights = {e: eta[e] for e in K.ground}
    basis = None
    if all(v is not INF for v in weights.values()):
        if tree is None:
            tree = K.greedy_compatible_basis(weights)
        elif not K.is_compatible(tree, weights):
            raise ValueError("the given tree is not compatible with η")
        basis = [index[e] for e in tree]
    elif tree is not None:
        basis = [index[tuple(sorted(e))] for e in tree]
    inner = build_lin_section(Y, eta.as_sequence(), basis=basis, check_membership=False)
    used_tree = tuple(pairs(xi.m)[k] for k in inner.basis)
    sp = GrassSectionPoint(xi, J, tau, eta, used_tree, inner)
    if check:
        sp.check_invariants()
    return sp


def eval_grass_section(sp: GrassSectionPoint, f: Polynomial) -> TropScalar:
    m = sp.xi.m
    names = var_names(m)
    f = f.rename(names) if f.vars != names else f
    if sp.inner is None:
        # the valuation that sends a polynomial to the valuation of its constant term
        const = f.terms.get((0,) * len(names))
        return INF if const is None else const.valuation()
    return mu_evaluate(f, torus_weights(m), sp.tau, sp.inner)


def eval_with_gauge(sp: GrassSectionPoint, f: Polynomial, c: Fraction) -> TropScalar:
    """Evaluate with τ shifted by c on J and η by -2c; the result does not depend on c."""
    if sp.inner is None:
        return eval_grass_section(sp, f)
    m = sp.xi.m
    tau = tuple(t + c if t is not INF else INF for t in sp.tau)
    eta = tuple(v - 2 * c if v is not INF else INF for v in sp.eta.as_sequence())
    inner = build_lin_section(sp.inner.space, eta, basis=sp.inner.basis, check_membership=False)
    names = var_names(m)
    f = f.rename(names) if f.vars != names else f
    return mu_evaluate(f, torus_weights(m), tau, inner)


def pluecker_quadric(m: int, i: int, j: int, k: int, l: int) -> Polynomial:
    """``x_ij x_kl - x_ik x_jl + x_il x_jk`` for i < j < k < l."""
    names = var_names(m)

    def x(a, b):
        return Polynomial.var(names, var_name(a, b, m))

    return x(i, j) * x(k, l) - x(i, k) * x(j, l) + x(i, l) * x(j, k)


def coordinate(m: int, i: int, j: int) -> Polynomial:
    return Polynomial.var(var_names(m), var_name(i, j, m))
