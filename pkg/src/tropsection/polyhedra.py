"""Exact rational linear programming and polyhedral cones.

The LP solver is a dense tableau simplex over :class:`fractions.Fraction`
with Bland's rule.  Strict inequalities get a shared gap variable that is
maximised.  Infeasible systems come with a Motzkin-type certificate, which
is itself found by the simplex and can be checked independently with
:func:`verify_certificate`.  :func:`fourier_motzkin_feasible` is a second,
unrelated decision procedure used as an oracle.

Cones are stored with an H-description ``{x : G x >= 0, E x = 0}`` and a
V-description ``pos(rays) + span(lineality)``; either one is derived from
the other by the double description method.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg

Vector = tuple[Fraction, ...]
OPS = ("<=", "<", ">=", ">", "==")


@dataclass(frozen=True)
class Constraint:
    coeffs: Vector
    op: str
    rhs: Fraction

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise ValueError(f"unknown relation {self.op!r}")

    @classmethod
    def make(cls, coeffs: Sequence[object], op: str, rhs: object = 0) -> "Constraint":
        return cls(tuple(Fraction(c) for c in coeffs), op, Fraction(rhs))

    def normalized(self) -> tuple[Vector, str, Fraction]:
        """Rewrite as ``a·x <= b``, ``a·x < b`` or ``a·x == b``."""
        if self.op in (">=", ">"):
            return tuple(-c for c in self.coeffs), "<=" if self.op == ">=" else "<", -self.rhs
        return self.coeffs, self.op, self.rhs

    def holds(self, x: Sequence[Fraction]) -> bool:
        v = _linalg.dot(self.coeffs, x)
        return {
            "<=": v <= self.rhs,
            "<": v < self.rhs,
            ">=": v >= self.rhs,
            ">": v > self.rhs,
            "==": v == self.rhs,
        }[self.op]


@dataclass(frozen=True)
class LinearProgram:
    """Constraints on free variables x ∈ Q^n, with an optional objective to maximise."""

    nvars: int
    constraints: tuple[Constraint, ...] = ()
    objective: Vector | None = None

    def __post_init__(self) -> None:
        for c in self.constraints:
            if len(c.coeffs) != self.nvars:
                raise ValueError("constraint length does not match the number of variables")

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearProgram":
        return LinearProgram(self.nvars, self.constraints + tuple(extra), self.objective)


@dataclass(frozen=True)
class Certificate:
    """Multipliers ``y`` for the normalised constraints (see :meth:`Constraint.normalized`).

    ``Σ y_i a_i = 0`` while ``Σ y_i b_i < 0``, or ``Σ y_i b_i = 0`` with some
    positive multiplier on a strict constraint.  Multipliers of ``<=``/``<``
    rows are nonnegative; those of equations are free.
    """

    multipliers: tuple[Fraction, ...]

    def to_json(self) -> list[str]:
        from .tropcore import format_trop

        return [format_trop(y) for y in self.multipliers]


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None
    certificate: Certificate | None = None
    value: Fraction | None = None


class Unbounded(Exception):
    pass


def _simplex(a: list[list[Fraction]], b: list[Fraction], c: list[Fraction] | None):
    """Maximise ``c·z`` over ``{z >= 0 : a z = b}``.

    Returns ``None`` when infeasible, otherwise ``(z, value)``; raises
    :class:`Unbounded` when the objective is unbounded.
    """
    m = len(a)
    n = len(a[0]) if a else len(c or [])
    rows = []
    for row, bi in zip(a, b):
        row = [Fraction(x) for x in row]
        bi = Fraction(bi)
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row + [Fraction(0)] * m + [bi])
    for i in range(m):
        rows[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    width = n + m

    def run(obj: list[Fraction], allowed: int) -> None:
        # objective row holds reduced costs c_j - c_B B^-1 a_j
        red = list(obj) + [Fraction(0)]
        for i, bv in enumerate(basis):
            cb = obj[bv]
            if cb:
                red = [r - cb * x for r, x in zip(red, rows[i])]
        while True:
            enter = next((j for j in range(allowed) if red[j] > 0), None)
            if enter is None:
                return
            best = None
            for i in range(len(rows)):
                if rows[i][enter] > 0:
                    ratio = rows[i][-1] / rows[i][enter]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded
            pivot(best[1], enter)
            f = red[enter]
            red = [r - f * x for r, x in zip(red, rows[best[1]])]

    def pivot(r: int, col: int) -> None:
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        basis[r] = col

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, width)
    if sum(rows[i][-1] for i in range(len(rows)) if basis[i] >= n) != 0:
        return None
    # drive artificial variables out of the basis, dropping redundant rows
    i = 0
    while i < len(rows):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j] != 0), None)
            if col is None:
                del rows[i]
                del basis[i]
                continue
            pivot(i, col)
        i += 1
    obj = list(c) if c is not None else [Fraction(0)] * n
    run(obj + [Fraction(0)] * m, n)
    z = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        z[bv] = rows[i][-1]
    return z, _linalg.dot(obj, z)


def _standard_form(lp: LinearProgram, gap: bool):
    """Equality form over nonnegative variables ``(x+, x-, slacks, [gap])``."""
    n = lp.nvars
    norm = [c.normalized() for c in lp.constraints]
    nslack = sum(1 for _, op, _ in norm if op != "==") + (1 if gap else 0)
    width = 2 * n + nslack + (1 if gap else 0)
    rows, rhs = [], []
    s = 2 * n
    gap_col = width - 1
    for coeffs, op, b in norm:
        row = [Fraction(0)] * width
        row[:n] = coeffs
        row[n:2 * n] = [-x for x in coeffs]
        if op != "==":
            row[s] = Fraction(1)
            s += 1
            if op == "<" and gap:
                row[gap_col] = Fraction(1)
        rows.append(row)
        rhs.append(b)
    if gap:
        row = [Fraction(0)] * width
        row[s] = Fraction(1)
        row[gap_col] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    return rows, rhs, width, gap_col


def _primal(lp: LinearProgram) -> tuple[Fraction, ...] | None:
    n = lp.nvars
    strict = any(c.op in ("<", ">") for c in lp.constraints)
    rows, rhs, width, gap_col = _standard_form(lp, strict)
    if not rows:
        return tuple(Fraction(0) for _ in range(n))
    obj = None
    if strict:
        obj = [Fraction(0)] * width
        obj[gap_col] = Fraction(1)
    res = _simplex(rows, rhs, obj)
    if res is None:
        return None
    z, value = res
    if strict and value <= 0:
        return None
    return tuple(z[i] - z[n + i] for i in range(n))


def _find_certificate(lp: LinearProgram) -> Certificate | None:
    norm = [c.normalized() for c in lp.constraints]
    k = len(norm)
    n = lp.nvars
    # variables: y_i >= 0 for inequalities, y_i = y+ - y- for equations, then s >= 0
    cols: list[tuple[int, int]] = []
    for i, (_, op, _) in enumerate(norm):
        cols.append((i, 1))
        if op == "==":
            cols.append((i, -1))
    rows, rhs = [], []
    for j in range(n):
        rows.append([sign * norm[i][0][j] for i, sign in cols] + [Fraction(0)])
        rhs.append(Fraction(0))
    # s + y·b = 0
    rows.append([sign * norm[i][2] for i, sign in cols] + [Fraction(1)])
    rhs.append(Fraction(0))
    # s + Σ y_strict = 1
    rows.append([Fraction(int(norm[i][1] == "<")) for i, _ in cols] + [Fraction(1)])
    rhs.append(Fraction(1))
    res = _simplex(rows, rhs, None)
    if res is None:
        return None
    z, _ = res
    y = [Fraction(0)] * k
    for (i, sign), v in zip(cols, z):
        y[i] += sign * v
    return Certificate(tuple(y))


def verify_certificate(lp: LinearProgram, cert: Certificate) -> bool:
    norm = [c.normalized() for c in lp.constraints]
    y = cert.multipliers
    if len(y) != len(norm):
        return False
    if any(v < 0 for v, (_, op, _) in zip(y, norm) if op != "=="):
        return False
    for j in range(lp.nvars):
        if sum((v * a[j] for v, (a, _, _) in zip(y, norm)), Fraction(0)) != 0:
            return False
    yb = sum((v * b for v, (_, _, b) in zip(y, norm)), Fraction(0))
    strict_weight = sum((v for v, (_, op, _) in zip(y, norm) if op == "<"), Fraction(0))
    return yb < 0 or (yb == 0 and strict_weight > 0)


def lp_feasible(lp: LinearProgram) -> LPResult:
    """Decide feasibility exactly; attach a witness or a checked certificate."""
    x = _primal(lp)
    if x is not None:
        if not all(c.holds(x) for c in lp.constraints):
            raise AssertionError("simplex returned a point violating the constraints")
        return LPResult(True, witness=x)
    cert = _find_certificate(lp)
    if cert is None or not verify_certificate(lp, cert):
        raise AssertionError("primal infeasible but no valid certificate was found")
    return LPResult(False, certificate=cert)


def lp_maximize(lp: LinearProgram) -> LPResult:
    """Maximise the objective over non-strict constraints.

    ``value`` is None when the objective is unbounded.
    """
    if lp.objective is None:
        raise ValueError("no objective given")
    if any(c.op in ("<", ">") for c in lp.constraints):
        raise ValueError("strict constraints are only supported for feasibility")
    base = lp_feasible(lp)
    if not base.feasible:
        return base
    rows, rhs, width, _ = _standard_form(lp, False)
    n = lp.nvars
    obj = [Fraction(0)] * width
    obj[:n] = lp.objective
    obj[n:2 * n] = [-x for x in lp.objective]
    try:
        res = _simplex(rows, rhs, obj) if rows else None
    except Unbounded:
        return LPResult(True, witness=base.witness, value=None)
    if res is None:
        if not rows and any(lp.objective):
            return LPResult(True, witness=base.witness, value=None)
        return LPResult(True, witness=base.witness, value=Fraction(0))
    z, value = res
    return LPResult(True, witness=tuple(z[i] - z[n + i] for i in range(n)), value=value)


def fourier_motzkin_feasible(lp: LinearProgram) -> bool:
    """Independent feasibility test by variable elimination (exponential; small systems only)."""
    cons = []
    for c in lp.constraints:
        a, op, b = c.normalized()
        if op == "==":
            cons.append((list(a), "<=", b))
            cons.append(([-x for x in a], "<=", -b))
        else:
            cons.append((list(a), op, b))
    for j in range(lp.nvars):
        pos, neg, rest = [], [], []
        for a, op, b in cons:
            (pos if a[j] > 0 else neg if a[j] < 0 else rest).append((a, op, b))
        new = list(rest)
        for ap, opp, bp in pos:
            for an, opn, bn in neg:
                fp, fn = -an[j], ap[j]
                a = [fp * x + fn * y for x, y in zip(ap, an)]
                a[j] = Fraction(0)
                op = "<" if "<" in (opp, opn) else "<="
                new.append((a, op, fp * bp + fn * bn))
        cons = _dedupe(new)
    for _, op, b in cons:
        if op == "<=" and b < 0:
            return False
        if op == "<" and b <= 0:
            return False
    return True


def _dedupe(cons):
    seen = {}
    for a, op, b in cons:
        if all(x == 0 for x in a):
            key = ("const", op, b)
        else:
            scale = next(abs(x) for x in a if x)
            key = (tuple(x / scale for x in a), op, b / scale)
        seen.setdefault(key, (a, op, b))
    return list(seen.values())


# --- cones -----------------------------------------------------------------


def _prim(v: Sequence[Fraction]) -> Vector:
    return _linalg.primitive([Fraction(x) for x in v])


def _complement_basis(space: Sequence[Sequence[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of the orthogonal complement of ``span(space)`` in Q^n."""
    return _linalg.nullspace([list(v) for v in space], ncols=n) if space else _linalg.nullspace([], ncols=n)


def double_description(ineqs: Sequence[Sequence[Fraction]], eqs: Sequence[Sequence[Fraction]], n: int):
    """Generators of ``{x : g·x >= 0 for g in ineqs, e·x = 0 for e in eqs}``.

    Returns ``(rays, lineality)`` with primitive integer rays (extreme rays
    of the pointed part taken modulo the lineality space).
    """
    ineqs = [list(map(Fraction, g)) for g in ineqs]
    eqs = [list(map(Fraction, e)) for e in eqs]
    # parametrise the subspace cut out by the equations: x = N u
    if eqs:
        nb = _linalg.nullspace(eqs, ncols=n)
    else:
        nb = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if not nb:
        return [], []
    N = _linalg.transpose(nb)  # n × k
    k = len(nb)
    G = [_linalg.matvec(nb, g) for g in ineqs]  # rows g·N, length k
    G = [g for g in G if any(g)]
    # lineality: u with G u = 0
    lin_u = _linalg.nullspace(G, ncols=k) if G else [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    lineality = [_prim(_linalg.matvec(N, u)) for u in lin_u]
    if not G:
        return [], lineality
    # pointed part: u = W v with W spanning the row space of G
    W = _linalg.row_space_basis(G)  # d × k
    d = len(W)
    Wt = _linalg.transpose(W)  # k × d
    A = [_linalg.matvec(W, g) for g in G]  # rows of G W^T, length d
    A = [list(_prim(a)) for a in A]
    rays_v = _dd_pointed(A, d)
    rays = [_prim(_linalg.matvec(N, _linalg.matvec(Wt, v))) for v in rays_v]
    return sorted(set(rays)), lineality


def _dd_pointed(A: list[list[Fraction]], d: int) -> list[list[Fraction]]:
    """Extreme rays of the pointed cone ``{v : A v >= 0}`` where ``A`` has rank d."""
    # initial simplicial cone from d independent rows
    chosen: list[int] = []
    for i in range(len(A)):
        if _linalg.rank([A[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == d:
                break
    inv = _linalg.inverse([A[i] for i in chosen])
    assert inv is not None
    rays = [list(_prim(col)) for col in _linalg.transpose(inv)]
    processed = list(chosen)
    for i in range(len(A)):
        if i in chosen:
            continue
        a = A[i]
        vals = [_linalg.dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        new = pos + zero
        if neg:
            pos_vals = [(r, v) for r, v in zip(rays, vals) if v > 0]
            tight = {id(r): frozenset(j for j in processed if _linalg.dot(A[j], r) == 0) for r in rays}
            for (rp, vp), (rn, vn) in itertools.product(pos_vals, neg):
                common = tight[id(rp)] & tight[id(rn)]
                if len(common) < d - 2:
                    continue
                if common and _linalg.rank([A[j] for j in common]) < d - 2:
                    continue
                if any(
                    r is not rp and r is not rn and common <= tight[id(r)] for r in rays
                ):
                    continue
                combo = [vp * x - vn * y for x, y in zip(rn, rp)]
                new.append(list(_prim(combo)))
        processed.append(i)
        uniq = {tuple(r): r for r in new}
        rays = list(uniq.values())
    return rays


@dataclass
class RationalCone:
    """A polyhedral cone in Q^n with both descriptions available on demand."""

    dim_ambient: int
    _rays: list[Vector] | None = None
    _lineality: list[Vector] | None = None
    _ineqs: list[Vector] | None = None
    _eqs: list[Vector] | None = None
    label: str = field(default="", compare=False)

    @classmethod
    def from_generators(cls, n: int, rays: Iterable[Sequence], lineality: Iterable[Sequence] = (), label: str = "") -> "RationalCone":
        return cls(n, [tuple(map(Fraction, r)) for r in rays], [tuple(map(Fraction, l)) for l in lineality], label=label)

    @classmethod
    def from_inequalities(cls, n: int, ineqs: Iterable[Sequence], eqs: Iterable[Sequence] = (), label: str = "") -> "RationalCone":
        return cls(n, _ineqs=[tuple(map(Fraction, g)) for g in ineqs], _eqs=[tuple(map(Fraction, e)) for e in eqs], label=label)

    # V-description
    def _ensure_v(self) -> None:
        if self._rays is None:
            rays, lin = double_description(self._ineqs or [], self._eqs or [], self.dim_ambient)
            self._rays, self._lineality = [tuple(r) for r in rays], [tuple(l) for l in lin]

    def _ensure_h(self) -> None:
        if self._ineqs is None:
            n = self.dim_ambient
            rays = list(self._rays or [])
            lin = list(self._lineality or [])
            # dual cone: y·r >= 0, y·l = 0; its generators give the facets
            drays, dlin = double_description(rays, lin, n)
            self._ineqs = [tuple(r) for r in drays]
            self._eqs = [tuple(l) for l in dlin]

    @property
    def rays(self) -> list[Vector]:
        self._ensure_v()
        return list(self._rays)  # type: ignore[arg-type]

    @property
    def lineality(self) -> list[Vector]:
        self._ensure_v()
        return list(self._lineality)  # type: ignore[arg-type]

    @property
    def inequalities(self) -> list[Vector]:
        self._ensure_h()
        return list(self._ineqs)  # type: ignore[arg-type]

    @property
    def equations(self) -> list[Vector]:
        self._ensure_h()
        return list(self._eqs)  # type: ignore[arg-type]

    def dimension(self) -> int:
        gens = self.rays + self.lineality
        return _linalg.rank(gens) if gens else 0

    def lineality_dimension(self) -> int:
        lin = self.lineality
        return _linalg.rank(lin) if lin else 0

    def span(self) -> list[list[Fraction]]:
        gens = self.rays + self.lineality
        return _linalg.row_space_basis(gens) if gens else []

    def contains(self, x: Sequence[object]) -> bool:
        x = [Fraction(v) for v in x]
        return all(_linalg.dot(g, x) >= 0 for g in self.inequalities) and all(
            _linalg.dot(e, x) == 0 for e in self.equations
        )

    def contains_by_generators(self, x: Sequence[object]) -> bool:
        """Membership by an LP over the generators, independent of the H-description."""
        return self.generator_coefficients(x) is not None

    def generator_coefficients(self, x: Sequence[object]):
        x = [Fraction(v) for v in x]
        rays, lin = self.rays, self.lineality
        k, l = len(rays), len(lin)
        nv = k + l
        cons = []
        for i in range(self.dim_ambient):
            row = [r[i] for r in rays] + [v[i] for v in lin]
            cons.append(Constraint.make(row, "==", x[i]))
        for j in range(k):
            cons.append(Constraint.make([int(t == j) for t in range(nv)], ">=", 0))
        if nv == 0:
            return () if not any(x) else None
        res = lp_feasible(LinearProgram(nv, tuple(cons)))
        return res.witness if res.feasible else None

    def constraints(self) -> list[Constraint]:
        """The H-description as LP constraints on the ambient coordinates."""
        return [Constraint.make(g, ">=", 0) for g in self.inequalities] + [
            Constraint.make(e, "==", 0) for e in self.equations
        ]

    def relative_interior_point(self) -> Vector:
        """Sum of the rays (the lineality is irrelevant up to translation)."""
        n = self.dim_ambient
        out = [Fraction(0)] * n
        for r in self.rays:
            out = [a + b for a, b in zip(out, r)]
        return tuple(out)

    def verify(self) -> bool:
        """Check that the two descriptions agree.

        Generators must satisfy the inequalities, and every extreme ray of the
        H-cone (recomputed from scratch) must be a generator combination.
        """
        for r in self.rays:
            if not self.contains(r):
                return False
        for l in self.lineality:
            if not self.contains(l) or not self.contains([-x for x in l]):
                return False
        rays, lin = double_description(self.inequalities, self.equations, self.dim_ambient)
        for r in rays:
            if not self.contains_by_generators(r):
                return False
        for l in lin:
            if not self.contains_by_generators(l) or not self.contains_by_generators([-x for x in l]):
                return False
        return True

    def intersect(self, other: "RationalCone") -> "RationalCone":
        if other.dim_ambient != self.dim_ambient:
            raise ValueError("ambient dimensions differ")
        return RationalCone.from_inequalities(
            self.dim_ambient,
            self.inequalities + other.inequalities,
            self.equations + other.equations,
        )


def cone_hull_sum(a_cols: Sequence[Sequence[object]], cone: RationalCone) -> RationalCone:
    """The cone ``A·Q^m + C`` where ``a_cols`` lists the columns of A."""
    lin = list(cone.lineality) + [tuple(map(Fraction, c)) for c in a_cols if any(c)]
    lin = [tuple(v) for v in _linalg.row_space_basis(lin)] if lin else []
    return RationalCone.from_generators(cone.dim_ambient, cone.rays, lin)


@dataclass(frozen=True)
class CoverCheck:
    equal: bool
    lps: tuple[tuple[Vector, LinearProgram, LPResult], ...]
    counterexample: Vector | None = None


def cover_equality_check(a_cols: Sequence[Sequence[object]], c1: RationalCone, c2: RationalCone) -> CoverCheck:
    """Test ``(A Q^m + C) ∩ (A Q^m + C') = A Q^m + (C ∩ C')``.

    The right-hand side is always contained in the left.  For every
    inequality g ≥ 0 of the right-hand side (equations count as two
    inequalities) the LP ``{x in LHS, g·x < 0}`` looks for a point of the
    left-hand side outside it.
    """
    n = c1.dim_ambient
    lhs = cone_hull_sum(a_cols, c1).constraints() + cone_hull_sum(a_cols, c2).constraints()
    rhs = cone_hull_sum(a_cols, c1.intersect(c2))
    tests = list(rhs.inequalities)
    for e in rhs.equations:
        tests.append(tuple(e))
        tests.append(tuple(-x for x in e))
    results = []
    for g in tests:
        lp = LinearProgram(n, tuple(lhs) + (Constraint.make(g, "<", 0),))
        res = lp_feasible(lp)
        results.append((tuple(g), lp, res))
        if res.feasible:
            return CoverCheck(False, tuple(results), res.witness)
    return CoverCheck(True, tuple(results))
