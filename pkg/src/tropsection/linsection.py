"""Sections of tropicalisation for constant-coefficient linear spaces.

A linear space Y ⊆ Q^n is given by a parametrisation: coordinate ``x_i`` is
the linear form ``F_i`` in parameters ``y_1 … y_d``.  For a weight vector
η in Trop(Y), let S be the set of coordinates where η is ∞ and Y' the part
of Y where those coordinates vanish.  A compatible basis J of the matroid of
Y' lets every coordinate be rewritten as a combination of ``x_J`` on Y', and
the section value of a polynomial is the Gauss valuation of its rewrite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import _linalg
from .matroids import Matroid
from .tropcore import INF, TropicalError, TropScalar, min_attained_twice, to_trop
from .valfield import Polynomial, ValuedScalar, dot_weight


class NotInTropicalisation(TropicalError):
    """The weight vector is not a point of the tropicalisation."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(eq=False)
class LinearSpaceParam:
    """Y = image of ``y ↦ F y`` where row i of ``forms`` is the form of ``x_i``."""

    forms: tuple[tuple[Fraction, ...], ...]
    names: tuple[str, ...] = ()
    _circuits: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.forms = tuple(tuple(Fraction(a) for a in row) for row in self.forms)
        if not self.forms:
            raise ValueError("need at least one coordinate")
        if len({len(r) for r in self.forms}) != 1:
            raise ValueError("all forms need the same number of parameters")
        if not self.names:
            self.names = tuple(f"x{i + 1}" for i in range(len(self.forms)))
        self.names = tuple(self.names)
        if len(self.names) != len(self.forms):
            raise ValueError("one name per coordinate required")

    @classmethod
    def from_equations(cls, equations: Sequence[Sequence[object]], names: Sequence[str] = ()) -> "LinearSpaceParam":
        """Y as the kernel of the given rows."""
        eqs = _linalg.to_matrix(equations)
        n = len(eqs[0])
        basis = _linalg.nullspace(eqs, ncols=n)
        if not basis:
            raise ValueError("the linear space is zero")
        return cls(tuple(map(tuple, _linalg.transpose(basis))), tuple(names))

    @property
    def n(self) -> int:
        return len(self.forms)

    @property
    def nparams(self) -> int:
        return len(self.forms[0])

    @property
    def dim(self) -> int:
        return _linalg.rank(self.forms)

    def restricted_forms(self, zero: frozenset[int]) -> list[list[Fraction]]:
        """Forms of every coordinate on Y' = Y ∩ {x_i = 0 for i in ``zero``}."""
        if not zero:
            return [list(r) for r in self.forms]
        ker = _linalg.nullspace([self.forms[i] for i in sorted(zero)], ncols=self.nparams)
        if not ker:
            return [[] for _ in self.forms]
        return _linalg.matmul(self.forms, _linalg.transpose(ker))

    def matroid(self, zero: frozenset[int] = frozenset()) -> Matroid:
        """Linear matroid of the coordinates outside ``zero``, restricted to Y'."""
        g = self.restricted_forms(zero)
        idx = [i for i in range(self.n) if i not in zero]
        return Matroid.linear([g[i] if g[i] else [Fraction(0)] for i in idx], idx)

    def circuits(self, zero: frozenset[int] = frozenset()) -> list[frozenset]:
        if zero not in self._circuits:
            self._circuits[zero] = self.matroid(zero).circuits()
        return self._circuits[zero]


def _point(Y: LinearSpaceParam, eta) -> tuple[TropScalar, ...]:
    if isinstance(eta, Mapping):
        eta = [eta[name] for name in Y.names]
    eta = tuple(to_trop(v) for v in eta)
    if len(eta) != Y.n:
        raise ValueError(f"expected {Y.n} coordinates, got {len(eta)}")
    return eta


def trop_membership_linear(Y: LinearSpaceParam, eta) -> tuple[bool, frozenset | None]:
    """Circuit test on Y': the minimum of η over each circuit is attained twice.

    The witness is a circuit given by coordinate indices.
    """
    eta = _point(Y, eta)
    zero = frozenset(i for i, v in enumerate(eta) if v is INF)
    for c in Y.circuits(zero):
        if not min_attained_twice([eta[i] for i in c]):
            return False, c
    return True, None


@dataclass(frozen=True)
class LinSectionPoint:
    space: LinearSpaceParam
    eta: tuple[TropScalar, ...]
    zero: frozenset[int]
    basis: tuple[int, ...]
    rewrite: Mapping[int, Mapping[int, Fraction]]

    @property
    def names(self) -> tuple[str, ...]:
        return self.space.names

    def check_invariants(self) -> None:
        if set(self.basis) & self.zero:
            raise AssertionError("basis meets the infinite coordinates")
        for i, row in self.rewrite.items():
            if i in self.basis or i in self.zero:
                continue
            support = [j for j, r in row.items() if r]
            lo = min((self.eta[j] for j in support), default=INF)
            if lo != self.eta[i]:
                raise AssertionError(f"coordinate {i} violates the compatibility relation")


def build_lin_section(
    Y: LinearSpaceParam,
    eta,
    basis: Sequence[int] | None = None,
    check_membership: bool = True,
) -> LinSectionPoint:
    """Section data at η: infinite set, compatible basis and rewrite table.

    ``basis`` may be supplied (e.g. a spanning tree from a graphic
    matroid); it is checked to be a maximum-weight basis of Y'.
    """
    eta = _point(Y, eta)
    if check_membership:
        ok, witness = trop_membership_linear(Y, eta)
        if not ok:
            raise NotInTropicalisation(f"circuit {sorted(witness)} has a unique minimum", witness)
    zero = frozenset(i for i, v in enumerate(eta) if v is INF)
    g = Y.restricted_forms(zero)
    m = Y.matroid(zero)
    weights = {i: eta[i] for i in m.ground}
    if basis is None:
        basis = m.greedy_compatible_basis(weights)
    else:
        basis = tuple(sorted(basis))
        if not m.is_compatible(basis, weights):
            raise ValueError("the supplied basis is not compatible with η")
    rewrite: dict[int, dict[int, Fraction]] = {}
    cols = _linalg.transpose([g[j] for j in basis]) if basis else []
    for i in range(Y.n):
        if i in zero:
            rewrite[i] = {}
        elif i in basis:
            rewrite[i] = {i: Fraction(1)}
        else:
            sol = _linalg.solve(cols, g[i]) if basis else None
            if sol is None:
                raise NotInTropicalisation(f"coordinate {i} vanishes on Y' but η is finite there")
            rewrite[i] = {j: r for j, r in zip(basis, sol) if r}
    sp = LinSectionPoint(Y, eta, zero, tuple(basis), rewrite)
    sp.check_invariants()
    return sp


def restrict_to_basis(sp: LinSectionPoint, f: Polynomial) -> Polynomial:
    """``f`` restricted to Y' and written in the basis coordinates."""
    f = f.rename(sp.names) if f.vars != sp.names else f
    forms = {sp.names[i]: {sp.names[j]: r for j, r in row.items()} for i, row in sp.rewrite.items()}
    return f.substitute(forms, [sp.names[j] for j in sp.basis])


def eval_lin_section(sp: LinSectionPoint, f: Polynomial) -> TropScalar:
    """Gauss valuation of the rewrite of ``f``; ∞ when ``f`` vanishes on Y'."""
    g = restrict_to_basis(sp, f)
    if g.is_zero():
        return INF
    weights = [sp.eta[j] for j in sp.basis]
    return min(
        c.valuation() + sum((k * w for k, w in zip(e, weights) if k), Fraction(0))
        for e, c in g.terms.items()
    )


NOISE_EXPONENTS = tuple(Fraction(k, 8) for k in range(1, 65))


@dataclass(frozen=True)
class ShilovSamples:
    values: tuple[TropScalar, ...]

    @property
    def minimum(self) -> TropScalar:
        return min(self.values, default=INF)


def shilov_sample_oracle(sp: LinSectionPoint, f: Polynomial, trials: int, seed: int) -> ShilovSamples:
    """Valuations of ``f`` at random points of Y(K) over the section point.

    Basis coordinates are lifted to ``c·t^{η_j}·(1 + noise)`` with random
    nonzero rationals ``c`` and noise of positive valuation; the other
    coordinates follow from the rewrite table.  Every sampled value is at
    least the section value.
    """
    rng = random.Random(seed)
    g = restrict_to_basis(sp, f)
    out = []
    for _ in range(trials):
        lifts = []
        for j in sp.basis:
            c = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
            noise = ValuedScalar.const(1)
            for _ in range(rng.randint(0, 2)):
                noise = noise + ValuedScalar.t(rng.choice(NOISE_EXPONENTS), rng.randint(-9, 9) or 1)
            lifts.append(ValuedScalar.t(sp.eta[j], c) * noise)
        total = ValuedScalar()
        for e, coeff in g.terms.items():
            term = coeff
            for x, k in zip(lifts, e):
                if k:
                    term = term * x**k
            total = total + term
        out.append(total.valuation())
    return ShilovSamples(tuple(out))


def mu_evaluate(
    f: Polynomial,
    weights: Mapping[str, Sequence[int]],
    shift: Sequence[TropScalar],
    inner: LinSectionPoint,
) -> TropScalar:
    """``min_β (w(f_β) + β·shift)`` where ``w`` is the section value at ``inner``.

    ``f`` is split into torus-weight components with the given variable
    weights; ``shift`` is the torus coordinate (∞ entries allowed, with
    0·∞ = 0).
    """
    best: TropScalar = INF
    for beta, part in f.weight_decompose(weights).items():
        w = eval_lin_section(inner, part)
        if w is INF:
            continue
        val = w + dot_weight(beta, shift)
        if val < best:
            best = val
    return best
