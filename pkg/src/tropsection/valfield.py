"""Valued coefficients and polynomials over them.

A :class:`ValuedScalar` is a finite sum ``Σ c_q t^q`` with rational exponents
``q`` and rational coefficients ``c_q``; its valuation is the least exponent
present.  :class:`Polynomial` stores integer exponent vectors against a fixed
variable table.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .tropcore import INF, TropScalar, format_trop, to_trop


class ValuedScalar:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[object, object] | None = None):
        clean: dict[Fraction, Fraction] = {}
        for q, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                q = Fraction(q)
                clean[q] = clean.get(q, Fraction(0)) + c
                if not clean[q]:
                    del clean[q]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Fraction, Fraction]) -> "ValuedScalar":
        s = object.__new__(cls)
        s._terms = terms
        s._hash = None
        return s

    @classmethod
    def const(cls, c: object) -> "ValuedScalar":
        return cls({0: c})

    @classmethod
    def t(cls, q: object = 1, c: object = 1) -> "ValuedScalar":
        """The scalar ``c·t^q``."""
        return cls({q: c})

    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> TropScalar:
        return min(self._terms) if self._terms else INF

    def leading_coefficient(self) -> Fraction:
        """Residue of ``self · t^{-v(self)}``; 0 for the zero scalar."""
        if not self._terms:
            return Fraction(0)
        return self._terms[min(self._terms)]

    def __add__(self, other: object) -> "ValuedScalar":
        if isinstance(other, Polynomial):
            return NotImplemented
        other = _as_scalar(other)
        out = dict(self._terms)
        for q, c in other._terms.items():
            v = out.get(q, 0) + c
            if v:
                out[q] = v
            else:
                out.pop(q, None)
        return ValuedScalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "ValuedScalar":
        return ValuedScalar._raw({q: -c for q, c in self._terms.items()})

    def __sub__(self, other: object) -> "ValuedScalar":
        return self + (-_as_scalar(other))

    def __rsub__(self, other: object) -> "ValuedScalar":
        return _as_scalar(other) - self

    def __mul__(self, other: object) -> "ValuedScalar":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ValuedScalar._raw({})
            return ValuedScalar._raw({q: c * other for q, c in self._terms.items()})
        if isinstance(other, Polynomial):
            return NotImplemented
        other = _as_scalar(other)
        out: dict[Fraction, Fraction] = defaultdict(Fraction)
        for q1, c1 in self._terms.items():
            for q2, c2 in other._terms.items():
                out[q1 + q2] += c1 * c2
        return ValuedScalar._raw({q: c for q, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ValuedScalar":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = ValuedScalar.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ValuedScalar.const(other)
        if not isinstance(other, ValuedScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"ValuedScalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for q in sorted(self._terms):
            c = self._terms[q]
            if q == 0:
                parts.append(format_trop(c))
            else:
                parts.append(f"{format_trop(c)}*t^({format_trop(q)})")
        return " + ".join(parts)

    def to_json(self) -> list[list[str]]:
        return [[format_trop(q), format_trop(c)] for q, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[object]]) -> "ValuedScalar":
        return cls({Fraction(str(q)): Fraction(str(c)) for q, c in data})


def _as_scalar(x: object) -> ValuedScalar:
    if isinstance(x, ValuedScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ValuedScalar.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


def valuation(s: ValuedScalar) -> TropScalar:
    return s.valuation()


Exponent = tuple[int, ...]
Weights = Mapping[str, Sequence[int]]


class Polynomial:
    """A polynomial in ``vars`` with :class:`ValuedScalar` coefficients."""

    __slots__ = ("vars", "terms", "_index")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        self._index = {v: i for i, v in enumerate(self.vars)}
        clean: dict[Exponent, ValuedScalar] = {}
        n = len(self.vars)
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e}")
            c = _as_scalar(c)
            if e in clean:
                c = clean[e] + c
            if c.is_zero():
                clean.pop(e, None)
            else:
                clean[e] = c
        self.terms = clean

    # construction
    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Polynomial":
        return cls(vars)

    @classmethod
    def constant(cls, vars: Sequence[str], c: object) -> "Polynomial":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Polynomial":
        vars = tuple(vars)
        e = tuple(int(v == name) for v in vars)
        if sum(e) != 1:
            raise KeyError(name)
        return cls(vars, {e: 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Mapping[str, int], c: object = 1) -> "Polynomial":
        vars = tuple(vars)
        unknown = set(exps) - set(vars)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        return cls(vars, {tuple(exps.get(v, 0) for v in vars): c})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exponent, ValuedScalar]]:
        # graded lexicographic, largest first
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def _check_same(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other: object) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_same(other)
            return other
        return Polynomial.constant(self.vars, other)

    # arithmetic
    def __add__(self, other: object) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out[e] + c if e in out else c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "Polynomial":
        other = self._coerce(other)
        out: dict[Exponent, ValuedScalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return Polynomial._raw(self.vars, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Polynomial.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict[Exponent, ValuedScalar]) -> "Polynomial":
        p = object.__new__(cls)
        p.vars = vars
        p._index = {v: i for i, v in enumerate(vars)}
        p.terms = terms
        return p

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            coeff = str(c)
            if " + " in coeff:
                coeff = f"({coeff})"
            parts.append(coeff if not mono else (mono if coeff == "1" else f"{coeff}*{mono}"))
        return " + ".join(parts)

    # ring changes
    def rename(self, vars: Sequence[str]) -> "Polynomial":
        """Embed into a ring whose variable table contains every used variable."""
        vars = tuple(vars)
        idx = {v: i for i, v in enumerate(vars)}
        used = {self.vars[i] for e in self.terms for i, k in enumerate(e) if k}
        missing = used - set(vars)
        if missing:
            raise KeyError(f"variables {sorted(missing)} missing from the target ring")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for v, k in zip(self.vars, e):
                if k:
                    ne[idx[v]] = k
            out[tuple(ne)] = c
        return Polynomial._raw(vars, out)

    def substitute(
        self, forms: Mapping[str, Mapping[str, object]], new_vars: Sequence[str]
    ) -> "Polynomial":
        """Replace each variable x by the rational linear form ``forms[x]`` in ``new_vars``.

        Every variable that occurs in the polynomial needs an entry; a missing
        or empty form means the variable is set to zero.
        """
        new_vars = tuple(new_vars)
        nidx = {v: i for i, v in enumerate(new_vars)}
        used = {i for e in self.terms for i, k in enumerate(e) if k}
        missing = [self.vars[i] for i in used if self.vars[i] not in forms]
        if missing:
            raise KeyError(f"no substitution given for {missing}")
        lin: dict[int, dict[Exponent, Fraction]] = {}
        for i in used:
            d: dict[Exponent, Fraction] = {}
            for name, a in forms[self.vars[i]].items():
                a = Fraction(a)
                if a:
                    e = [0] * len(new_vars)
                    e[nidx[name]] = 1
                    d[tuple(e)] = d.get(tuple(e), Fraction(0)) + a
            lin[i] = d
        powers: dict[tuple[int, int], dict[Exponent, Fraction]] = {}

        def power(i: int, k: int) -> dict[Exponent, Fraction]:
            if (i, k) not in powers:
                powers[(i, k)] = lin[i] if k == 1 else _rat_mul(power(i, k - 1), lin[i])
            return powers[(i, k)]

        out: dict[Exponent, ValuedScalar] = {}
        one = {(0,) * len(new_vars): Fraction(1)}
        for e, c in self.terms.items():
            prod = one
            for i, k in enumerate(e):
                if k:
                    prod = _rat_mul(prod, power(i, k))
                    if not prod:
                        break
            for ne, a in prod.items():
                sc = c * a
                out[ne] = out[ne] + sc if ne in out else sc
        return Polynomial._raw(new_vars, {e: c for e, c in out.items() if not c.is_zero()})

    # weights and tropical evaluation
    def weight_of(self, e: Exponent, weights: Weights) -> tuple[int, ...]:
        dim = len(next(iter(weights.values())))
        w = [0] * dim
        for v, k in zip(self.vars, e):
            if k:
                for a, x in enumerate(weights[v]):
                    w[a] += k * x
        return tuple(w)

    def weight_decompose(self, weights: Weights) -> dict[tuple[int, ...], "Polynomial"]:
        comps: dict[tuple[int, ...], dict[Exponent, ValuedScalar]] = defaultdict(dict)
        for e, c in self.terms.items():
            comps[self.weight_of(e, weights)][e] = c
        return {b: Polynomial._raw(self.vars, t) for b, t in sorted(comps.items())}

    def _point(self, xi: Union[Sequence[object], Mapping[str, object]]) -> list[TropScalar]:
        if isinstance(xi, Mapping):
            return [to_trop(xi[v]) if v in xi else INF for v in self.vars]
        xi = list(xi)
        if len(xi) != len(self.vars):
            raise ValueError(f"point has {len(xi)} coordinates, ring has {len(self.vars)} variables")
        return [to_trop(x) for x in xi]

    def term_values(self, xi) -> dict[Exponent, TropScalar]:
        pt = self._point(xi)
        return {
            e: c.valuation() + sum((k * x for k, x in zip(e, pt) if k), Fraction(0))
            for e, c in self.terms.items()
        }

    def trop_eval_min(self, xi) -> tuple[TropScalar, int]:
        """``min_α v(c_α) + α·ξ`` and the number of terms attaining it.

        Terms evaluating to ∞ never attain; if all do, the result is ``(∞, 0)``.
        """
        vals = list(self.term_values(xi).values())
        lo = min(vals, default=INF)
        if lo is INF:
            return INF, 0
        return lo, sum(1 for v in vals if v == lo)

    def initial_form(self, xi) -> "Polynomial":
        """Residue-field polynomial made of the terms attaining the minimum."""
        vals = self.term_values(xi)
        lo = min(vals.values(), default=INF)
        if lo is INF:
            return Polynomial.zero(self.vars)
        return Polynomial(
            self.vars,
            {e: self.terms[e].leading_coefficient() for e, v in vals.items() if v == lo},
        )

    # JSON
    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {
                    "coeff": c.to_json(),
                    "exp": {v: k for v, k in zip(self.vars, e) if k},
                }
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        vars = tuple(data["vars"])
        out = cls(vars)
        for term in data["terms"]:
            out = out + cls.monomial(vars, term.get("exp", {}), ValuedScalar.from_json(term["coeff"]))
        return out


def _rat_mul(a: Mapping[Exponent, Fraction], b: Mapping[Exponent, Fraction]) -> dict[Exponent, Fraction]:
    out: dict[Exponent, Fraction] = defaultdict(Fraction)
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[tuple(x + y for x, y in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in out.items() if c}


def weight_decompose(f: Polynomial, weights: Weights) -> dict[tuple[int, ...], Polynomial]:
    return f.weight_decompose(weights)


def trop_eval_min(f: Polynomial, xi) -> tuple[TropScalar, int]:
    return f.trop_eval_min(xi)


def initial_form(f: Polynomial, xi) -> Polynomial:
    return f.initial_form(xi)


def hypersurface_membership(f: Polynomial, xi) -> bool:
    """Whether ξ lies on the tropical hypersurface of ``f``.

    Equivalently, whether the initial form of ``f`` at ξ is not a monomial.
    A point where every term is ∞ counts as a member.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial does not define a hypersurface")
    value, count = f.trop_eval_min(xi)
    return value is INF or count >= 2


def dot_weight(beta: Sequence[int], tau: Sequence[TropScalar]) -> TropScalar:
    """``β·τ`` with the convention 0·∞ = 0."""
    total: TropScalar = Fraction(0)
    for b, x in zip(beta, tau):
        if b:
            total = total + b * x
    return total
