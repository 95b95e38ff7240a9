"""Sections for matrices of rank at most two and for corank-one matrices.

Rank at most two: on the support rows I and columns J, ξ splits as
``τ_i + ρ_j + η_ij`` with τ the row minima, ρ the column minima of the
row-normalised matrix, and η a point of the bipartite graphic space
``Y_IJ = {x_ij = y_i - z_j}``.

Corank one (finite ξ only): the point where the first m-1 column
hyperplanes meet gives τ, and every column of ``ξ - τ`` then has its
minimum attained twice, i.e. lies in the tropicalisation of
``{columns summing to zero}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .linsection import LinearSpaceParam, LinSectionPoint, NotInTropicalisation, build_lin_section, mu_evaluate
from .matroids import Matroid
from .tropcore import (
    INF,
    DegenerateIntersectionError,
    TropMatrix,
    TropScalar,
    hyperplanes_in_general_position,
    min_attained_twice,
    normalize_projective,
    perturbed_hyperplane_intersection,
    stable_intersection_hyperplanes,
    trop_det,
)
from .valfield import Polynomial


def var_name(i: int, j: int) -> str:
    return f"x{i + 1}{j + 1}"


@lru_cache(maxsize=None)
def var_names(m: int, p: int) -> tuple[str, ...]:
    return tuple(var_name(i, j) for i in range(m) for j in range(p))


def as_matrix(xi) -> TropMatrix:
    return xi if isinstance(xi, TropMatrix) else TropMatrix.from_rows(xi)


def named_point(xi: TropMatrix) -> dict[str, TropScalar]:
    return {var_name(i, j): xi[i, j] for i in range(xi.rows) for j in range(xi.cols)}


def coordinate(m: int, p: int, i: int, j: int) -> Polynomial:
    return Polynomial.var(var_names(m, p), var_name(i, j))


def determinant_polynomial(m: int, p: int, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
    """The minor of the generic m×p matrix on the given rows and columns."""
    names = var_names(m, p)
    out = Polynomial.zero(names)
    for perm in itertools.permutations(range(len(cols))):
        sign = 1
        for a, b in itertools.combinations(range(len(perm)), 2):
            if perm[a] > perm[b]:
                sign = -sign
        exps: dict[str, int] = {}
        for r, k in zip(rows, perm):
            name = var_name(r, cols[k])
            exps[name] = exps.get(name, 0) + 1
        out = out + Polynomial.monomial(names, exps, sign)
    return out


# --- rank at most two ------------------------------------------------------


def membership_rank2(xi) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Every 3×3 submatrix is tropically singular; witness ``(rows, cols)``."""
    xi = as_matrix(xi)
    for rows in itertools.combinations(range(xi.rows), 3):
        for cols in itertools.combinations(range(xi.cols), 3):
            if not trop_det(xi.submatrix(rows, cols)).singular:
                return False, (rows, cols)
    return True, None


def membership_Y_bipartite(eta, I: Sequence[int] | None = None, J: Sequence[int] | None = None) -> bool:
    """In every 2×2 submatrix on I×J the minimum appears at least twice."""
    eta = as_matrix(eta)
    I = range(eta.rows) if I is None else I
    J = range(eta.cols) if J is None else J
    for i1, i2 in itertools.combinations(I, 2):
        for j1, j2 in itertools.combinations(J, 2):
            if not min_attained_twice([eta[i1, j1], eta[i1, j2], eta[i2, j1], eta[i2, j2]]):
                return False
    return True


@dataclass(frozen=True)
class Rank2Decomposition:
    tau: tuple[TropScalar, ...]
    rho: tuple[TropScalar, ...]
    eta: TropMatrix
    I: tuple[int, ...]
    J: tuple[int, ...]


def decompose_rank2(xi, check: bool = True) -> Rank2Decomposition:
    xi = as_matrix(xi)
    if check:
        ok, wit = membership_rank2(xi)
        if not ok:
            raise NotInTropicalisation(f"3×3 submatrix {wit} is tropically nonsingular", wit)
    m, p = xi.shape
    I = tuple(i for i in range(m) if any(xi[i, j] is not INF for j in range(p)))
    J = tuple(j for j in range(p) if any(xi[i, j] is not INF for i in range(m)))
    tau = tuple(min(xi.entries[i]) for i in range(m))
    shifted = [[xi[i, j] - tau[i] if i in I else INF for j in range(p)] for i in range(m)]
    rho = tuple(min(shifted[i][j] for i in range(m)) for j in range(p))
    eta = TropMatrix(
        tuple(
            tuple(shifted[i][j] - rho[j] if (i in I and j in J) else INF for j in range(p))
            for i in range(m)
        )
    )
    if check and not membership_Y_bipartite(eta, I, J):
        raise AssertionError("η fails the 2×2 test")
    return Rank2Decomposition(tau, rho, eta, I, J)


@lru_cache(maxsize=None)
def rank2_space(m: int, p: int, I: tuple[int, ...], J: tuple[int, ...]) -> LinearSpaceParam:
    """``Y_IJ``: x_ij = y_i - z_j on I×J, 0 elsewhere; parameters (y_0 … y_{m-1}, z_0 … z_{p-1})."""
    forms = []
    for i in range(m):
        for j in range(p):
            row = [Fraction(0)] * (m + p)
            if i in I and j in J:
                row[i], row[m + j] = Fraction(1), Fraction(-1)
            forms.append(tuple(row))
    return LinearSpaceParam(tuple(forms), var_names(m, p))


@lru_cache(maxsize=None)
def rank2_weights(m: int, p: int) -> dict[str, tuple[int, ...]]:
    """x_ij has weight (e_i; e_j) in Z^{m+p}."""
    return {
        var_name(i, j): tuple(int(k == i) for k in range(m)) + tuple(int(k == j) for k in range(p))
        for i in range(m)
        for j in range(p)
    }


@dataclass(frozen=True)
class Rank2SectionPoint:
    xi: TropMatrix
    decomposition: Rank2Decomposition
    tree: tuple[tuple[int, int], ...]
    inner: LinSectionPoint | None

    @property
    def shift(self) -> tuple[TropScalar, ...]:
        return self.decomposition.tau + self.decomposition.rho

    def check_invariants(self) -> None:
        d = self.decomposition
        for i in range(self.xi.rows):
            for j in range(self.xi.cols):
                want = d.tau[i] + d.rho[j] + d.eta[i, j] if (i in d.I and j in d.J) else INF
                if want != self.xi[i, j]:
                    raise AssertionError(f"τ + ρ + η differs from ξ at {(i, j)}")


def compatible_bipartite_trees(eta: TropMatrix, I: Sequence[int], J: Sequence[int]) -> list[tuple]:
    K = Matroid.complete_bipartite(I, J)
    w = {e: eta[e] for e in K.ground}
    return [b for b in K.bases() if K.is_compatible(b, w)]


def build_rank2_section(xi, check: bool = True, tree: Sequence[tuple[int, int]] | None = None) -> Rank2SectionPoint:
    xi = as_matrix(xi)
    m, p = xi.shape
    d = decompose_rank2(xi, check=check)
    if not d.I:
        return Rank2SectionPoint(xi, d, (), None)
    Y = rank2_space(m, p, d.I, d.J)
    basis = None
    K = Matroid.complete_bipartite(d.I, d.J)
    weights = {e: d.eta[e] for e in K.ground}
    if all(v is not INF for v in weights.values()):
        if tree is None:
            tree = K.greedy_compatible_basis(weights)
        elif not K.is_compatible(tree, weights):
            raise ValueError("the given tree is not compatible with η")
    if tree is not None:
        basis = [i * p + j for i, j in tree]
    eta_flat = [d.eta[i, j] for i in range(m) for j in range(p)]
    inner = build_lin_section(Y, eta_flat, basis=basis, check_membership=False)
    used = tuple(divmod(k, p) for k in inner.basis)
    sp = Rank2SectionPoint(xi, d, used, inner)
    if check:
        sp.check_invariants()
    return sp


def eval_rank2_section(sp: Rank2SectionPoint, f: Polynomial) -> TropScalar:
    m, p = sp.xi.shape
    names = var_names(m, p)
    f = f.rename(names) if f.vars != names else f
    if sp.inner is None:
        const = f.terms.get((0,) * len(names))
        return INF if const is None else const.valuation()
    return mu_evaluate(f, rank2_weights(m, p), sp.shift, sp.inner)


# --- corank one ------------------------------------------------------------


def membership_corank1(xi) -> bool:
    """All maximal square minors tropically singular."""
    xi = as_matrix(xi)
    m, p = xi.shape
    if m > p:
        raise ValueError("corank-one matrices are taken with m <= p")
    return all(
        trop_det(xi.submatrix(range(m), cols)).singular for cols in itertools.combinations(range(p), m)
    )


def membership_corank1_U(xi) -> bool:
    """Member of Trop(X⁰) whose first m-1 column hyperplanes meet in a single point.

    The second condition asks every maximal minor of the first m-1 columns
    to be tropically nonsingular.
    """
    xi = as_matrix(xi)
    m, p = xi.shape
    if any(v is INF for row in xi.entries for v in row):
        return False
    if not membership_corank1(xi):
        return False
    if m == 1:
        return True
    return hyperplanes_in_general_position(xi.submatrix(range(m), range(m - 1)))


@lru_cache(maxsize=None)
def corank1_space(m: int, p: int) -> LinearSpaceParam:
    """Matrices whose columns sum to zero; parameters are the first m-1 entries of each column."""
    forms = []
    nparam = (m - 1) * p
    for i in range(m):
        for j in range(p):
            row = [Fraction(0)] * nparam
            if i < m - 1:
                row[j * (m - 1) + i] = Fraction(1)
            else:
                for k in range(m - 1):
                    row[j * (m - 1) + k] = Fraction(-1)
            forms.append(tuple(row))
    return LinearSpaceParam(tuple(forms), var_names(m, p))


@lru_cache(maxsize=None)
def corank1_weights(m: int, p: int) -> dict[str, tuple[int, ...]]:
    """x_ij has weight e_i in Z^m."""
    return {var_name(i, j): tuple(int(k == i) for k in range(m)) for i in range(m) for j in range(p)}


@dataclass(frozen=True)
class Corank1SectionPoint:
    xi: TropMatrix
    tau: tuple[Fraction, ...]
    eta: TropMatrix
    inner: LinSectionPoint

    def check_invariants(self) -> None:
        m, p = self.xi.shape
        for j in range(p):
            if not min_attained_twice(self.eta.column(j)):
                raise AssertionError(f"column {j} of η has a unique minimum")
            for i in range(m):
                if self.tau[i] + self.eta[i, j] != self.xi[i, j]:
                    raise AssertionError(f"τ + η differs from ξ at {(i, j)}")


def corank1_decompose(xi, check: bool = True) -> tuple[tuple[Fraction, ...], TropMatrix]:
    xi = as_matrix(xi)
    if not membership_corank1_U(xi):
        raise NotInTropicalisation("ξ is not a finite corank-one point of the open set U")
    m, p = xi.shape
    if m == 1:
        tau: tuple = (min(xi.entries[0]),)
    else:
        x = stable_intersection_hyperplanes(xi.submatrix(range(m), range(m - 1)), check=check)
        # -τ is the intersection point, scaled so that τ_1 = ξ_11
        tau = tuple(xi[0, 0] + x[0] - v for v in x)
    eta = TropMatrix(tuple(tuple(xi[i, j] - tau[i] for j in range(p)) for i in range(m)))
    return tau, eta


def build_corank1_section(xi, check: bool = True) -> Corank1SectionPoint:
    xi = as_matrix(xi)
    m, p = xi.shape
    tau, eta = corank1_decompose(xi, check=check)
    Y = corank1_space(m, p)
    inner = build_lin_section(Y, [eta[i, j] for i in range(m) for j in range(p)], check_membership=False)
    sp = Corank1SectionPoint(xi, tau, eta, inner)
    if check:
        sp.check_invariants()
    return sp


def eval_corank1_section(sp: Corank1SectionPoint, f: Polynomial) -> TropScalar:
    m, p = sp.xi.shape
    names = var_names(m, p)
    f = f.rename(names) if f.vars != names else f
    return mu_evaluate(f, corank1_weights(m, p), sp.tau, sp.inner)


# --- the discontinuity example ---------------------------------------------


def paired_column_matrix(b2, b3, b4) -> TropMatrix:
    """Rows 0, (0,0,b,b) for b = b2, b3, b4: the columns are (a|a|b|b) with a = 0."""
    return TropMatrix.from_rows([[0, 0, 0, 0], [0, 0, b2, b2], [0, 0, b3, b3], [0, 0, b4, b4]])


@dataclass(frozen=True)
class IntersectionPair:
    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]

    @property
    def distinct(self) -> bool:
        return self.p != self.q


def random_generic_pair(rng: random.Random, bound: int = 9) -> tuple[list[Fraction], list[Fraction]]:
    """Random integer vectors a, b in Q^4 with a - b having distinct coordinates."""
    while True:
        a = [Fraction(rng.randint(-bound, bound)) for _ in range(4)]
        b = [Fraction(rng.randint(-bound, bound)) for _ in range(4)]
        if len({x - y for x, y in zip(a, b)}) == 4:
            return a, b


def remark43_demo(a: Sequence[object], b: Sequence[object], seed: int = 0) -> IntersectionPair:
    """Stable intersections of (H_a, H_a, H_b) and (H_a, H_b, H_b) in TP^3.

    Both columns sequences describe the same matrix (a|a|b|b) up to column
    order, yet the two points differ: the corank-one recipe cannot be
    continuous there.
    """
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) != 4 or len(b) != 4:
        raise ValueError("a and b need four coordinates")
    diff = [x - y for x, y in zip(a, b)]
    if len(set(diff)) != 4:
        raise DegenerateIntersectionError("a - b must have pairwise distinct coordinates")
    rng = random.Random(seed)
    c1 = TropMatrix.from_rows([[a[i], a[i], b[i]] for i in range(4)])
    c2 = TropMatrix.from_rows([[a[i], b[i], b[i]] for i in range(4)])
    p = normalize_projective(perturbed_hyperplane_intersection(c1, rng))
    q = normalize_projective(perturbed_hyperplane_intersection(c2, rng))
    return IntersectionPair(p, q)
