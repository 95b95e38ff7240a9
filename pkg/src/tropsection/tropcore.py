"""Min-plus arithmetic over Q ∪ {∞}, tropical determinants and stable intersections.

Finite tropical scalars are :class:`fractions.Fraction`; the top element is the
singleton :data:`INF`.  Python's ``min``/``+`` then give the semiring
operations directly, so most callers never need :func:`trop_min` or
:func:`trop_add`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from . import _linalg


class TropicalError(ValueError):
    """Base class for errors raised by this package."""


class DegenerateIntersectionError(TropicalError):
    """The intersection is not a single projective point."""


class OracleDisagreementError(TropicalError):
    """A closed formula and its perturbation oracle returned different points."""


class Infinity:
    """The absorbing element ∞ of the min-plus semiring."""

    _instance: "Infinity | None" = None
    __slots__ = ()

    def __new__(cls) -> "Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("tropsection.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __add__(self, other: object) -> "Infinity":
        return self

    __radd__ = __add__

    def __sub__(self, other: object) -> "Infinity":
        if other is self:
            raise TropicalError("inf - inf is undefined")
        return self

    def __rsub__(self, other: object):
        raise TropicalError("cannot subtract inf from a finite value")

    def __mul__(self, k: object):
        # 0 * inf = 0: variables absent from a monomial impose nothing
        if k == 0:
            return Fraction(0)
        if k > 0:  # type: ignore[operator]
            return self
        raise TropicalError("negative multiple of inf")

    __rmul__ = __mul__

    def __neg__(self):
        raise TropicalError("-inf is not a tropical scalar")

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

TropScalar = Union[Fraction, Infinity]


def is_inf(x: object) -> bool:
    return x is INF


def to_trop(x: object) -> TropScalar:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``"inf"`` to a tropical scalar."""
    if x is INF:
        return INF
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "∞", "+inf", "infinity"):
            return INF
        return Fraction(s)
    if isinstance(x, float):
        if x == float("inf"):
            return INF
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    return Fraction(x)  # type: ignore[arg-type]


def format_trop(x: TropScalar) -> str:
    if x is INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_vec(v: Sequence[TropScalar]) -> str:
    return "(" + ", ".join(format_trop(x) for x in v) + ")"


def trop_min(a: TropScalar, b: TropScalar) -> TropScalar:
    return b if b < a else a


def trop_add(a: TropScalar, b: TropScalar) -> TropScalar:
    return a + b


def min_attained_twice(values: Sequence[TropScalar]) -> bool:
    """True iff the minimum occurs at least twice (an all-∞ vector counts)."""
    if not values:
        raise ValueError("empty vector")
    lo = min(values)
    if lo is INF:
        return True
    return sum(1 for v in values if v == lo) >= 2


def normalize_projective(x: Sequence[TropScalar]) -> tuple[TropScalar, ...]:
    """Shift so that the first finite coordinate is 0."""
    first = next((v for v in x if v is not INF), None)
    if first is None:
        return tuple(x)
    return tuple(v if v is INF else v - first for v in x)


@dataclass(frozen=True)
class TropMatrix:
    entries: tuple[tuple[TropScalar, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix dimensions must be at least 1")
        if len({len(r) for r in self.entries}) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]]) -> "TropMatrix":
        return cls(tuple(tuple(to_trop(x) for x in row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> TropScalar:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[TropScalar, ...]:
        return tuple(r[j] for r in self.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "TropMatrix":
        return TropMatrix(tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def transpose(self) -> "TropMatrix":
        return TropMatrix(tuple(zip(*self.entries)))

    def to_json(self) -> list[list[str]]:
        return [[format_trop(x) for x in row] for row in self.entries]


def trop_mat_mul(a: TropMatrix, b: TropMatrix) -> TropMatrix:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return TropMatrix(
        tuple(
            tuple(min(a[i, j] + b[j, k] for j in range(a.cols)) for k in range(b.cols))
            for i in range(a.rows)
        )
    )


@dataclass(frozen=True)
class TropDetResult:
    value: TropScalar
    attaining_count: int
    singular: bool


DET_BRUTE_FORCE_CAP = 8


def trop_det(m: TropMatrix, cap: int = DET_BRUTE_FORCE_CAP) -> TropDetResult:
    """Tropical determinant by enumeration of all permutations."""
    n, p = m.shape
    if n != p:
        raise ValueError("tropical determinant of a non-square matrix")
    if n > cap:
        raise ValueError(f"size {n} exceeds the brute-force cap {cap}")
    e = m.entries
    best: TropScalar = INF
    count = 0
    for perm in itertools.permutations(range(n)):
        s: TropScalar = Fraction(0)
        for i, j in enumerate(perm):
            s = s + e[i][j]
            if s is INF:
                break
        else:
            if s < best:
                best, count = s, 1
            elif s == best:
                count += 1
    if best is INF:
        return TropDetResult(INF, 0, True)
    return TropDetResult(best, count, count != 1)


def tropical_rank(m: TropMatrix, cap: int = DET_BRUTE_FORCE_CAP) -> int:
    """Largest k with a tropically nonsingular k×k submatrix."""
    for k in range(min(m.shape), 0, -1):
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                if not trop_det(m.submatrix(rows, cols), cap).singular:
                    return k
    return 0


# --- stable intersections -------------------------------------------------

# Perturbed scalars are pairs (real part, coefficient of a positive
# infinitesimal); Python tuple ordering is the lexicographic order we need.
Eps = tuple[Fraction, Fraction]


def _eps_add(a, b):
    if a is INF or b is INF:
        return INF
    return (a[0] + b[0], a[1] + b[1])


def _eps_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _eps_min_twice(vals: Sequence) -> bool:
    finite = [v for v in vals if v is not INF]
    if not finite:
        return True
    lo = min(finite)
    return sum(1 for v in finite if v == lo) >= 2


def cramer_point(c: TropMatrix) -> tuple[TropScalar, ...]:
    """Tropical Cramer point: coordinate k is the determinant of c without row k."""
    m = c.rows
    return tuple(
        trop_det(c.submatrix([i for i in range(m) if i != k], range(c.cols))).value
        for k in range(m)
    )


def random_hyperplane_matrix(m: int, rng: random.Random, bound: int = 20) -> TropMatrix:
    """``m - 1`` random integer hyperplanes in TP^{m-1}, one per column."""
    return TropMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(m - 1)] for _ in range(m)])


def hyperplanes_in_general_position(c: TropMatrix) -> bool:
    m = c.rows
    return all(
        not trop_det(c.submatrix([i for i in range(m) if i != k], range(c.cols))).singular
        for k in range(m)
    )


def stable_intersection_hyperplanes(
    c: TropMatrix, check: bool = True, seed: int = 0, require_transverse: bool = True
) -> tuple[TropScalar, ...]:
    """Stable intersection of the m-1 tropical hyperplanes given by the columns of ``c``.

    A point x lies on the hyperplane with coefficient column c_j when
    min_k (c_kj + x_k) is attained at least twice.  The point is the tropical
    Cramer point, normalised so that its first coordinate is 0.

    With ``require_transverse`` (the default) a
    :class:`DegenerateIntersectionError` is raised unless every maximal minor
    is tropically nonsingular, i.e. unless the set-theoretic intersection is a
    single projective point.  Without it only the stable intersection is
    promised, and the error is raised only if some Cramer determinant is ∞.
    """
    m, k = c.shape
    if k != m - 1:
        raise ValueError(f"need m-1 = {m - 1} columns, got {k}")
    if require_transverse and not hyperplanes_in_general_position(c):
        raise DegenerateIntersectionError(
            "hyperplanes are not in general position: some maximal minor is tropically singular"
        )
    x = cramer_point(c)
    if any(v is INF for v in x):
        raise DegenerateIntersectionError("a Cramer determinant is infinite")
    x = normalize_projective(x)
    if check:
        y = perturbed_hyperplane_intersection(c, random.Random(seed))
        if x != y:
            raise OracleDisagreementError(f"Cramer point {_fmt_vec(x)} but perturbation limit {_fmt_vec(y)}")
    return x


@lru_cache(maxsize=None)
def _pattern_inverse(m: int, pattern: tuple[tuple[int, int], ...]):
    # unknowns x_1..x_{m-1} (x_0 = 0); row j encodes x_a - x_b
    rows = []
    for a, b in pattern:
        row = [Fraction(0)] * (m - 1)
        if a > 0:
            row[a - 1] += 1
        if b > 0:
            row[b - 1] -= 1
        rows.append(row)
    return _linalg.inverse(rows)


def perturbed_hyperplane_intersection(c: TropMatrix, rng: random.Random) -> tuple[Fraction, ...]:
    """Limit of the intersection after a generic infinitesimal perturbation of ``c``.

    Each entry c_kj becomes c_kj + u_kj·ε with random integers u_kj.  The
    perturbed hyperplanes meet transversally, so we enumerate every choice of
    a pair of attaining terms per hyperplane, solve the resulting linear
    system over Q(ε), keep the solutions that satisfy all the inequalities,
    and return the ε → 0 limit of the unique survivor.
    """
    m, k = c.shape
    if any(v is INF for row in c.entries for v in row):
        raise ValueError("perturbation oracle needs finite coefficients")
    for _attempt in range(5):
        u = [[rng.randint(1, 10**6) for _ in range(k)] for _ in range(m)]
        coef = [[(c[i, j], Fraction(u[i][j])) for j in range(k)] for i in range(m)]
        pairs = list(itertools.combinations(range(m), 2))
        found: set[tuple] = set()
        for pattern in itertools.product(pairs, repeat=k):
            inv = _pattern_inverse(m, pattern)
            if inv is None:
                continue
            # x_a - x_b = c_b - c_a
            rhs = [_eps_sub(coef[b][j], coef[a][j]) for j, (a, b) in enumerate(pattern)]
            re = _linalg.matvec(inv, [r[0] for r in rhs])
            ep = _linalg.matvec(inv, [r[1] for r in rhs])
            x = [(Fraction(0), Fraction(0))] + list(zip(re, ep))
            ok = True
            for j, (a, b) in enumerate(pattern):
                vals = [_eps_add(coef[i][j], x[i]) for i in range(m)]
                lo = vals[a]
                if vals[b] != lo or any(v < lo for v in vals):
                    ok = False
                    break
            if ok:
                found.add(tuple(x))
        if len(found) == 1:
            (x,) = found
            return normalize_projective(tuple(v[0] for v in x))
    raise OracleDisagreementError(
        f"perturbed intersection never became a single point ({len(found)} candidates)"
    )


def _pluecker_get(xi: Mapping[tuple[int, int], TropScalar], i: int, j: int) -> TropScalar:
    return xi[(i, j)] if i < j else xi[(j, i)]


def pluecker_support(xi: Mapping[tuple[int, int], TropScalar], m: int) -> tuple[int, ...]:
    return tuple(
        i for i in range(m) if any(_pluecker_get(xi, i, j) is not INF for j in range(m) if j != i)
    )


def stable_intersection_line_H(
    xi: Mapping[tuple[int, int], TropScalar], m: int, check: bool = True, seed: int = 0
) -> tuple[TropScalar, ...]:
    """Stable intersection of the tropical line with Plücker vector ``xi`` and
    the hyperplane where min(ζ_1, …, ζ_m) is attained twice.

    Returns τ with τ_k = min_{j≠k} ξ_jk on the support and ∞ off it; τ lies
    on the line, so ξ - Aτ is a line through the origin.
    """
    support = pluecker_support(xi, m)
    if len(support) < 2:
        raise TropicalError("support of the Plücker vector has fewer than two indices")
    tau = tuple(
        min(_pluecker_get(xi, j, k) for j in range(m) if j != k) if k in support else INF
        for k in range(m)
    )
    if check:
        ref = perturbed_line_hyperplane_intersection(xi, m, random.Random(seed))
        if normalize_projective(tau) != ref:
            raise OracleDisagreementError(f"formula gives {_fmt_vec(tau)}, perturbation limit {_fmt_vec(ref)}")
    return tau


def perturbed_line_hyperplane_intersection(
    xi: Mapping[tuple[int, int], TropScalar], m: int, rng: random.Random
) -> tuple[TropScalar, ...]:
    """Limit of ℓ ∩ H' where H' is H translated by a generic infinitesimal.

    For each facet {a, b} of H' (the terms ζ_a + u_a·ε and ζ_b + u_b·ε tie for
    the minimum) the point of ℓ on that facet is pinned down by the triangle
    conditions through a and b; every candidate is then checked against all
    triangle conditions of ℓ and all facet inequalities of H'.
    """
    support = pluecker_support(xi, m)
    if len(support) < 2:
        raise TropicalError("support of the Plücker vector has fewer than two indices")

    def p(i, j):
        v = _pluecker_get(xi, i, j)
        return INF if v is INF else (v, Fraction(0))

    for _attempt in range(5):
        u = {k: Fraction(rng.randint(1, 10**6)) for k in support}
        if len(set(u.values())) < len(u):
            continue
        found = set()
        for a, b in itertools.combinations(support, 2):
            if p(a, b) is INF:
                # ζ_a - ζ_b is constant along ℓ; a generic shift misses it
                continue
            zeta: dict[int, object] = {a: (Fraction(0), -u[a]), b: (Fraction(0), -u[b])}
            for k in support:
                if k in (a, b):
                    continue
                lo = min(_eps_add(p(a, k), zeta[b]), _eps_add(p(b, k), zeta[a]))
                zeta[k] = INF if lo is INF else _eps_sub(lo, p(a, b))
            if any(zeta[k] is INF for k in support):
                continue
            ok = all(
                _eps_min_twice(
                    [
                        _eps_add(p(i, j), zeta[k]),
                        _eps_add(p(i, k), zeta[j]),
                        _eps_add(p(j, k), zeta[i]),
                    ]
                )
                for i, j, k in itertools.combinations(support, 3)
            )
            if ok:
                vals = {k: (zeta[k][0], zeta[k][1] + u[k]) for k in support}
                lo = vals[a]
                ok = vals[b] == lo and all(v >= lo for v in vals.values())
            if ok:
                found.add(tuple(zeta[k] if k in support else INF for k in range(m)))
        if len(found) == 1:
            (z,) = found
            return normalize_projective(tuple(v if v is INF else v[0] for v in z))
    raise OracleDisagreementError("perturbed line/hyperplane intersection is not a single point")
