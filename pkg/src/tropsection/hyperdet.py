"""Cayley's 2×2×2 hyperdeterminant.

Coordinates ``x_ijk`` are indexed by ``4i + 2j + k``.  The torus matrix A
sends ``(ρ, δ, ν)`` in Q^6 to the array ``ρ_i + δ_j + ν_k``; the linear space
Y is the orthogonal complement of its image.  The tropicalisation of Y is
the Bergman fan of the affine matroid of the cube vertices.  Its maximal
cones split into six orbits under the cube group; three of them ("covering"
orbits) meet the image of A only along the all-one line, and on
``im A + C`` for such a cone C the section is ``μ(τ, σ_Y(η))`` where
``ξ = Aτ + η`` with η in C.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from networkx.utils import UnionFind

from . import _linalg
from .linsection import LinearSpaceParam, LinSectionPoint, NotInTropicalisation, build_lin_section, mu_evaluate
from .matroids import Matroid
from .polyhedra import CoverCheck, RationalCone, cone_hull_sum, cover_equality_check
from .tropcore import TropScalar, format_trop, to_trop
from .valfield import Polynomial, hypersurface_membership

INDICES = tuple(itertools.product((0, 1), repeat=3))
NAMES = tuple(f"x{i}{j}{k}" for i, j, k in INDICES)
ALL_ONE = tuple(Fraction(1) for _ in range(8))


def index(i: int, j: int, k: int) -> int:
    return 4 * i + 2 * j + k


def hyperdeterminant() -> Polynomial:
    def x(s: str) -> Polynomial:
        return Polynomial.var(NAMES, "x" + s)

    return (
        x("000") ** 2 * x("111") ** 2
        + x("001") ** 2 * x("110") ** 2
        + x("010") ** 2 * x("101") ** 2
        + x("100") ** 2 * x("011") ** 2
        - 2 * x("000") * x("001") * x("110") * x("111")
        - 2 * x("000") * x("010") * x("101") * x("111")
        - 2 * x("000") * x("011") * x("100") * x("111")
        - 2 * x("001") * x("010") * x("101") * x("110")
        - 2 * x("001") * x("011") * x("110") * x("100")
        - 2 * x("010") * x("011") * x("101") * x("100")
        + 4 * x("000") * x("011") * x("101") * x("110")
        + 4 * x("001") * x("010") * x("100") * x("111")
    )


def torus_matrix() -> list[list[Fraction]]:
    """8×6 matrix: row ijk has ones in columns ρ_i, δ_j, ν_k."""
    rows = []
    for i, j, k in INDICES:
        row = [Fraction(0)] * 6
        row[i] = row[2 + j] = row[4 + k] = Fraction(1)
        rows.append(row)
    return rows


def torus_weights() -> dict[str, tuple[int, ...]]:
    return {name: tuple(int(x) for x in row) for name, row in zip(NAMES, torus_matrix())}


def cube_group() -> list[tuple[int, ...]]:
    """The 48 symmetries of the cube as permutations of the 8 coordinates."""
    out = set()
    for perm in itertools.permutations(range(3)):
        for flip in INDICES:
            images = []
            for v in INDICES:
                w = tuple(v[perm[a]] ^ flip[a] for a in range(3))
                images.append(index(*w))
            out.add(tuple(images))
    return sorted(out)


def act(g: Sequence[int], x: Sequence) -> tuple:
    """Move the entry at position k to position g[k]."""
    out = [None] * len(x)
    for k, v in enumerate(x):
        out[g[k]] = v
    return tuple(out)


# --- flats and the Bergman fan --------------------------------------------


def flats(m: Matroid) -> dict[int, list[frozenset]]:
    """Proper nonempty flats by rank."""
    r = m.rank()
    ground = list(m.ground)
    found: dict[int, set[frozenset]] = defaultdict(set)
    for k in range(1, r):
        for s in itertools.combinations(ground, k):
            rk = m.rank(s)
            closure = frozenset(e for e in ground if m.rank(list(s) + [e]) == rk)
            if 0 < rk < r:
                found[rk].add(closure)
    return {k: sorted(v, key=lambda f: sorted(f)) for k, v in sorted(found.items())}


def full_flags(m: Matroid) -> list[tuple[frozenset, ...]]:
    fl = flats(m)
    r = m.rank()
    chains: list[tuple[frozenset, ...]] = [(f,) for f in fl.get(1, [])]
    for k in range(2, r):
        chains = [c + (f,) for c in chains for f in fl[k] if c[-1] < f]
    return chains


def indicator(flat: frozenset, n: int = 8) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(e in flat)) for e in range(n))


def flag_span(flag: Sequence[frozenset], n: int = 8) -> tuple[tuple[Fraction, ...], ...]:
    rows = [list(ALL_ONE[:n])] + [list(indicator(f, n)) for f in flag]
    return tuple(tuple(r) for r in _linalg.rref(rows)[0] if any(r))


@dataclass
class CoarseCone:
    flags: frozenset
    cone: RationalCone

    @property
    def generators(self) -> list[tuple[Fraction, ...]]:
        return sorted({indicator(f) for flag in self.flags for f in flag})


def coarse_cones(m: Matroid) -> list[CoarseCone]:
    """Maximal cones of the Bergman fan, merging fine cones across flat ridges.

    Fine cones are ``R·1 + pos(e_F1, …, e_F{r-1})`` over full flags.  Two fine
    cones are merged when they share a ridge that no other fine cone
    contains and they span the same linear space.
    """
    flags = full_flags(m)
    spans = {f: flag_span(f) for f in flags}
    by_ridge: dict[tuple, list] = defaultdict(list)
    for f in flags:
        for drop in range(len(f)):
            by_ridge[f[:drop] + f[drop + 1:]].append(f)
    uf = UnionFind(flags)
    for members in by_ridge.values():
        if len(members) == 2 and spans[members[0]] == spans[members[1]]:
            uf.union(*members)
    out = []
    for group in uf.to_sets():
        group = frozenset(group)
        gens = sorted({indicator(fl) for flag in group for fl in flag})
        cone = RationalCone.from_generators(8, gens, [ALL_ONE])
        out.append(CoarseCone(group, cone))
    out.sort(key=lambda c: sorted(tuple(sorted(f)) for flag in c.flags for f in flag))
    return out


# --- context ----------------------------------------------------------------


@dataclass
class HyperdetContext:
    delta: Polynomial
    A: list[list[Fraction]]
    kernel: list[list[Fraction]]
    Y: LinearSpaceParam
    cube_matroid: Matroid
    y_matroid: Matroid
    group: list[tuple[int, ...]]
    _cones: list[CoarseCone] | None = field(default=None, repr=False)
    _hulls: dict = field(default_factory=dict, repr=False)

    @property
    def a_cols(self) -> list[list[Fraction]]:
        return _linalg.transpose(self.A)

    @property
    def image_dim(self) -> int:
        return _linalg.rank(self.A)

    def apply(self, tau: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(_linalg.matvec(self.A, list(tau)))

    def cones(self) -> list[CoarseCone]:
        if self._cones is None:
            self._cones = coarse_cones(self.y_matroid)
        return self._cones


def cube_matroid() -> Matroid:
    return Matroid.linear([(1, i, j, k) for i, j, k in INDICES], range(8))


def is_self_dual(m: Matroid) -> bool:
    """The complement of every basis is a basis, and vice versa (all 4-subsets)."""
    ground = set(m.ground)
    r = m.rank()
    if 2 * r != len(ground):
        return False
    for s in itertools.combinations(m.ground, r):
        if m.is_basis(s) != m.is_basis(tuple(ground - set(s))):
            return False
    return True


def build_context() -> HyperdetContext:
    delta = hyperdeterminant()
    coeffs = sorted(c.leading_coefficient() for c in delta.terms.values())
    if len(delta.terms) != 12 or coeffs != [-2] * 6 + [1] * 4 + [4] * 2:
        raise AssertionError("hyperdeterminant has the wrong terms")
    A = torus_matrix()
    kernel = _linalg.nullspace(A)
    if len(kernel) != 2:
        raise AssertionError("kernel of A should be two-dimensional")
    for v in kernel:
        rho, dl, nu = v[0:2], v[2:4], v[4:6]
        if rho[0] != rho[1] or dl[0] != dl[1] or nu[0] != nu[1] or rho[0] + dl[0] + nu[0] != 0:
            raise AssertionError("kernel vector not of the form (a1, b1, c1) with a + b + c = 0")
    if _linalg.rank(A) != 4:
        raise AssertionError("image of A should be four-dimensional")
    ybasis = _linalg.nullspace(_linalg.transpose(A))
    Y = LinearSpaceParam(tuple(map(tuple, _linalg.transpose(ybasis))), NAMES)
    cube = cube_matroid()
    ym = Matroid.linear([list(r) for r in Y.forms], range(8))
    if not is_self_dual(cube):
        raise AssertionError("cube matroid is not self-dual")
    if set(cube.bases()) != set(ym.bases()):
        raise AssertionError("the matroid of Y differs from the cube matroid")
    return HyperdetContext(delta, A, kernel, Y, cube, ym, cube_group())


@lru_cache(maxsize=1)
def default_context() -> HyperdetContext:
    return build_context()


# --- orbits -----------------------------------------------------------------


@dataclass
class Orbit:
    label: str
    members: list[int]
    representative: int
    stabiliser: int
    span_meets_image: int

    @property
    def covering(self) -> bool:
        return self.span_meets_image == 1


def _flag_image(g: Sequence[int], flag: tuple[frozenset, ...]) -> tuple[frozenset, ...]:
    return tuple(frozenset(g[e] for e in f) for f in flag)


def span_image_intersection_dim(ctx: HyperdetContext, cone: RationalCone) -> int:
    span = cone.span()
    a = ctx.a_cols
    return len(span) + ctx.image_dim - _linalg.rank(span + a)


def bergman_orbits(ctx: HyperdetContext) -> list[Orbit]:
    cones = ctx.cones()
    where = {}
    for k, c in enumerate(cones):
        for f in c.flags:
            where[f] = k
    seen: set[int] = set()
    orbits = []
    for k, c in enumerate(cones):
        if k in seen:
            continue
        some = next(iter(c.flags))
        images = [where[_flag_image(g, some)] for g in ctx.group]
        members = sorted(set(images))
        seen.update(members)
        # an image of one flag lands in the image cone; check whole cones map to cones
        for g in ctx.group:
            tgt = where[_flag_image(g, some)]
            if {_flag_image(g, f) for f in c.flags} != cones[tgt].flags:
                raise AssertionError("the cube group does not permute the coarse cones")
        stab = sum(1 for x in images if x == k)
        orbits.append(
            Orbit("", members, k, stab, span_image_intersection_dim(ctx, c.cone))
        )
    # label by invariants: covering orbits first, then by cone generator count
    orbits.sort(key=lambda o: (not o.covering, len(cones[o.representative].cone.rays), len(o.members)))
    for n, o in enumerate(orbits):
        kind = "covering" if o.covering else "absorbed"
        o.label = f"{kind}-{n + 1}"
    return orbits


@dataclass
class AbsorptionReport:
    samples: int
    failures: list[tuple[str, tuple[Fraction, ...]]]
    hits: dict[str, int]

    @property
    def ok(self) -> bool:
        return not self.failures


def covered_regions(ctx: HyperdetContext, orbits: Sequence[Orbit]) -> list[tuple[int, RationalCone]]:
    """``(cone index, im A + C)`` for every member C of every covering orbit."""
    out = []
    cones = ctx.cones()
    cache = ctx._hulls
    for o in orbits:
        if not o.covering:
            continue
        for k in o.members:
            if k not in cache:
                cache[k] = cone_hull_sum(ctx.a_cols, cones[k].cone)
            out.append((k, cache[k]))
    return out


def random_point_in(cone: RationalCone, rng: random.Random, boundary: bool = False) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * cone.dim_ambient
    for r in cone.rays:
        lam = Fraction(rng.randint(0 if boundary else 1, 12), rng.randint(1, 4))
        out = [a + lam * b for a, b in zip(out, r)]
    for l in cone.lineality:
        lam = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
        out = [a + lam * b for a, b in zip(out, l)]
    return tuple(out)


def verify_absorption(ctx: HyperdetContext, orbits: Sequence[Orbit], samples: int = 200, seed: int = 0) -> AbsorptionReport:
    """Sample every absorbed cone and check each sample lies in ``im A + C`` for a covering C.

    Membership is first located with the H-description of ``im A + C`` and
    then confirmed with an LP over its generators.
    """
    rng = random.Random(seed)
    regions = covered_regions(ctx, orbits)
    cones = ctx.cones()
    failures = []
    hits: dict[str, int] = defaultdict(int)
    total = 0
    for o in orbits:
        if o.covering:
            continue
        for n in range(samples):
            k = o.members[n % len(o.members)]
            x = random_point_in(cones[k].cone, rng, boundary=(n % 5 == 4))
            total += 1
            found = None
            for idx, region in regions:
                if region.contains(x):
                    found = idx
                    break
            if found is None or not dict(regions)[found].contains_by_generators(x):
                failures.append((o.label, x))
            else:
                hits[o.label] += 1
    return AbsorptionReport(total, failures, dict(hits))


@dataclass
class CoverReport:
    pairs: list[tuple[int, int, CoverCheck]]

    @property
    def ok(self) -> bool:
        return all(check.equal for _, _, check in self.pairs)

    @property
    def lp_count(self) -> int:
        return sum(len(check.lps) for _, _, check in self.pairs)


def verify_cover_lps(ctx: HyperdetContext, orbits: Sequence[Orbit]) -> CoverReport:
    """For every covering cone C and every covering orbit representative C', compare
    ``(im A + C) ∩ (im A + C')`` with ``im A + (C ∩ C')`` by LPs."""
    cones = ctx.cones()
    reps = [o.representative for o in orbits if o.covering]
    members = [k for o in orbits if o.covering for k in o.members]
    out = []
    for k in members:
        for r in reps:
            out.append((k, r, cover_equality_check(ctx.a_cols, cones[k].cone, cones[r].cone)))
    return CoverReport(out)


# --- section ----------------------------------------------------------------


def membership_hyperdet(ctx: HyperdetContext, xi: Sequence[object]) -> bool:
    xi = [to_trop(v) for v in xi]
    return hypersurface_membership(ctx.delta, xi)


def membership_by_fan(ctx: HyperdetContext, xi: Sequence[object]) -> bool:
    """Whether ξ lies in ``im A + C`` for some maximal cone C of the Bergman fan."""
    xi = [Fraction(v) for v in xi]
    cache = ctx._hulls
    for k, c in enumerate(ctx.cones()):
        if k not in cache:
            cache[k] = cone_hull_sum(ctx.a_cols, c.cone)
        if cache[k].contains(xi):
            return True
    return False


@dataclass(frozen=True)
class HyperdetSectionPoint:
    xi: tuple[Fraction, ...]
    cone_index: int
    tau: tuple[Fraction, ...]
    eta: tuple[Fraction, ...]
    inner: LinSectionPoint

    def check_invariants(self, ctx: HyperdetContext) -> None:
        a_tau = ctx.apply(self.tau)
        if tuple(x + y for x, y in zip(a_tau, self.eta)) != self.xi:
            raise AssertionError("A τ + η differs from ξ")
        if not ctx.cones()[self.cone_index].cone.contains(self.eta):
            raise AssertionError("η is not in the chosen cone")


def split_in_cone(ctx: HyperdetContext, xi: Sequence[Fraction], cone: RationalCone) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Solve ``ξ = A τ + η`` with η in span(C), gauge ``ρ_0 = δ_0 = 0`` and ``min η = 0``."""
    span = cone.span()
    cols = ctx.a_cols + span
    mat = _linalg.transpose(cols)  # 8 × (6 + dim)
    # gauge rows: ρ_0 = 0, δ_0 = 0
    gauge = []
    for c in (0, 2):
        row = [Fraction(0)] * len(cols)
        row[c] = Fraction(1)
        gauge.append(row)
    sol = _linalg.solve(mat + gauge, list(xi) + [Fraction(0), Fraction(0)])
    if sol is None:
        raise NotInTropicalisation("ξ is not in the span of im A and the cone")
    tau = sol[:6]
    eta = [x - y for x, y in zip(xi, _linalg.matvec(ctx.A, tau))]
    shift = min(eta)
    eta = [v - shift for v in eta]
    # move the shift into ν (adding s·1 to the array is adding s to every ν_k)
    tau[4] += shift
    tau[5] += shift
    return tuple(tau), tuple(eta)


def hyperdet_section(ctx: HyperdetContext, xi: Sequence[object], orbits: Sequence[Orbit] | None = None) -> HyperdetSectionPoint:
    xi = tuple(Fraction(to_trop(v)) for v in xi)
    if len(xi) != 8:
        raise ValueError("ξ needs eight coordinates")
    orbits = bergman_orbits(ctx) if orbits is None else orbits
    cones = ctx.cones()
    for k, region in covered_regions(ctx, orbits):
        if not region.contains(xi):
            continue
        tau, eta = split_in_cone(ctx, xi, cones[k].cone)
        if not cones[k].cone.contains(eta):
            continue
        inner = build_lin_section(ctx.Y, eta, check_membership=False)
        sp = HyperdetSectionPoint(xi, k, tau, eta, inner)
        sp.check_invariants(ctx)
        return sp
    raise NotInTropicalisation("ξ is not in the region covered by the covering cones")


def eval_hyperdet_section(sp: HyperdetSectionPoint, f: Polynomial) -> TropScalar:
    f = f.rename(NAMES) if f.vars != NAMES else f
    return mu_evaluate(f, torus_weights(), sp.tau, sp.inner)


def eval_with_gauge(sp: HyperdetSectionPoint, f: Polynomial, c: Fraction) -> TropScalar:
    """Evaluate after subtracting (c1, c1, c1) from τ and adding 3c·1 to η."""
    tau = tuple(t - c for t in sp.tau)
    eta = tuple(v + 3 * c for v in sp.eta)
    inner = build_lin_section(sp.inner.space, eta, basis=sp.inner.basis, check_membership=False)
    f = f.rename(NAMES) if f.vars != NAMES else f
    return mu_evaluate(f, torus_weights(), tau, inner)


def coordinate(i: int, j: int, k: int) -> Polynomial:
    return Polynomial.var(NAMES, f"x{i}{j}{k}")


def orbit_report(ctx: HyperdetContext, orbits: Sequence[Orbit]) -> dict:
    cones = ctx.cones()
    return {
        "orbit_count": len(orbits),
        "cone_count": len(cones),
        "fine_cone_count": sum(len(c.flags) for c in cones),
        "fan_dimension": cones[0].cone.dimension() if cones else 0,
        "sum_with_image_dimension": cone_hull_sum(ctx.a_cols, cones[0].cone).dimension() if cones else 0,
        "orbits": [
            {
                "label": o.label,
                "size": len(o.members),
                "stabiliser": o.stabiliser,
                "span_meets_image": o.span_meets_image,
                "covering": o.covering,
                "generators": [[format_trop(x) for x in g] for g in cones[o.representative].generators],
                "interior_point": [format_trop(x) for x in cones[o.representative].cone.relative_interior_point()],
            }
            for o in orbits
        ],
    }
