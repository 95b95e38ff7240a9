"""Graphic and rational linear matroids with weight data.

Weights follow the min convention used throughout the package: a weight
vector η lies in the tropicalisation of the matroid when the minimum of η
over every circuit is attained at least twice.  Compatible bases are the
maximum-weight bases, found greedily.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx

from . import _linalg
from .tropcore import INF, TropScalar, min_attained_twice

Label = Hashable
Weights = Mapping[Label, TropScalar]


@dataclass(frozen=True)
class Matroid:
    """A matroid on an ordered ground set.

    ``kind`` is ``"graphic"``, ``"bipartite"`` or ``"linear"``.  Graphic
    kinds store the endpoints of every edge label; linear matroids store one
    rational vector per label.
    """

    kind: str
    ground: tuple
    endpoints: Mapping[Label, tuple] = field(default_factory=dict, compare=False)
    vectors: Mapping[Label, tuple[Fraction, ...]] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.ground)) != len(self.ground):
            raise ValueError("ground set labels must be unique")

    # constructors
    @classmethod
    def complete_graph(cls, vertices: int | Sequence[int]) -> "Matroid":
        """Graphic matroid of K_m; edge (i, j) with i < j joins i and j."""
        vs = list(range(vertices)) if isinstance(vertices, int) else sorted(vertices)
        edges = tuple(itertools.combinations(vs, 2))
        return cls("graphic", edges, endpoints={e: e for e in edges})

    @classmethod
    def complete_bipartite(cls, rows: int | Sequence[int], cols: int | Sequence[int]) -> "Matroid":
        """Graphic matroid of K_{m,p}; edge (i, j) joins row i and column j."""
        rs = list(range(rows)) if isinstance(rows, int) else sorted(rows)
        cs = list(range(cols)) if isinstance(cols, int) else sorted(cols)
        edges = tuple(itertools.product(rs, cs))
        return cls("bipartite", edges, endpoints={(i, j): (("r", i), ("c", j)) for i, j in edges})

    @classmethod
    def linear(cls, vectors: Sequence[Sequence[object]], labels: Sequence[Label] | None = None) -> "Matroid":
        """Linear matroid of the given vectors, one per ground element."""
        labels = tuple(range(len(vectors))) if labels is None else tuple(labels)
        if len(labels) != len(vectors):
            raise ValueError("one label per vector required")
        vecs = {l: tuple(Fraction(x) for x in v) for l, v in zip(labels, vectors)}
        return cls("linear", labels, vectors=vecs)

    # independence
    @property
    def is_graphic(self) -> bool:
        return self.kind in ("graphic", "bipartite")

    def rank(self, subset: Iterable[Label] | None = None) -> int:
        elems = self.ground if subset is None else list(subset)
        if self.is_graphic:
            r = 0
            uf = nx.utils.UnionFind()
            for e in elems:
                u, v = self.endpoints[e]
                if uf[u] != uf[v]:
                    uf.union(u, v)
                    r += 1
            return r
        return _linalg.rank([self.vectors[e] for e in elems]) if elems else 0

    def is_independent(self, subset: Iterable[Label]) -> bool:
        subset = list(subset)
        return len(set(subset)) == len(subset) and self.rank(subset) == len(subset)

    def is_basis(self, subset: Iterable[Label]) -> bool:
        subset = list(subset)
        return len(subset) == self.rank() and self.is_independent(subset)

    def bases(self) -> list[tuple]:
        r = self.rank()
        return [b for b in itertools.combinations(self.ground, r) if self.is_independent(b)]

    # circuits
    def circuits(self, max_size: int | None = None) -> list[frozenset]:
        if self.is_graphic:
            g = self._graph(self.ground)
            out = []
            for cyc in nx.simple_cycles(g, length_bound=max_size):
                out.append(frozenset(g.edges[a, b]["label"] for a, b in zip(cyc, cyc[1:] + cyc[:1])))
            return sorted(out, key=lambda c: (len(c), sorted(map(self.ground.index, c))))
        out: list[frozenset] = []
        top = self.rank() + 1 if max_size is None else min(max_size, self.rank() + 1)
        for k in range(1, top + 1):
            for s in itertools.combinations(self.ground, k):
                fs = frozenset(s)
                if any(c <= fs for c in out):
                    continue
                if self.rank(s) == k - 1:
                    out.append(fs)
        return out

    def fundamental_circuit(self, basis: Iterable[Label], e: Label) -> frozenset:
        basis = list(basis)
        if e in basis:
            raise ValueError(f"{e!r} already lies in the basis")
        if self.is_graphic:
            u, v = self.endpoints[e]
            if u == v:
                return frozenset([e])
            g = self._graph(basis)
            if u not in g or v not in g or not nx.has_path(g, u, v):
                raise ValueError(f"{e!r} is not spanned by the given set")
            path = nx.shortest_path(g, u, v)
            return frozenset([e, *(g.edges[a, b]["label"] for a, b in zip(path, path[1:]))])
        coeffs = self.basis_coefficients(basis, e)
        return frozenset([e, *(b for b, c in zip(basis, coeffs) if c)])

    def basis_coefficients(self, basis: Sequence[Label], e: Label) -> list[Fraction]:
        """Coefficients expressing vector ``e`` in the vectors of ``basis`` (linear kind)."""
        cols = _linalg.transpose([self.vectors[b] for b in basis])
        if not cols:
            cols = [[] for _ in self.vectors[e]]
        sol = _linalg.solve(cols, self.vectors[e]) if basis else (
            [] if not any(self.vectors[e]) else None
        )
        if sol is None:
            raise ValueError(f"{e!r} is not spanned by the given set")
        return sol

    def _graph(self, edges: Iterable[Label]) -> nx.Graph:
        g = nx.Graph()
        for e in edges:
            u, v = self.endpoints[e]
            g.add_edge(u, v, label=e)
        return g

    # weights
    def greedy_compatible_basis(self, eta: Weights) -> tuple:
        """Maximum-weight basis: scan by non-increasing weight, ties by ground order, ∞ last."""
        order = sorted(
            range(len(self.ground)),
            key=lambda k: (eta[self.ground[k]] is INF, _neg(eta[self.ground[k]]), k),
        )
        chosen: list[Label] = []
        target = self.rank()
        for k in order:
            e = self.ground[k]
            if self.is_independent(chosen + [e]):
                chosen.append(e)
                if len(chosen) == target:
                    break
        return tuple(sorted(chosen, key=self.ground.index))

    def is_compatible(self, basis: Iterable[Label], eta: Weights) -> bool:
        basis = list(basis)
        if not self.is_basis(basis):
            return False
        return _weight_profile(basis, eta) == _weight_profile(self.greedy_compatible_basis(eta), eta)

    def extend_weights_from_basis(self, basis: Iterable[Label], partial: Weights) -> dict:
        """Weights on the whole ground set: off the basis, the minimum over the fundamental circuit."""
        basis = list(basis)
        out: dict = {}
        for e in self.ground:
            if e in basis:
                out[e] = partial[e]
            else:
                circ = self.fundamental_circuit(basis, e) - {e}
                out[e] = min((partial[b] for b in circ), default=INF)
        return out

    def is_in_trop(self, eta: Weights, shortcut: bool = True) -> tuple[bool, frozenset | None]:
        """Circuit criterion; returns ``(verdict, witness circuit or None)``.

        With ``shortcut`` set, complete graphs check only triangles and
        complete bipartite graphs only 4-cycles.
        """
        if shortcut and self.kind == "graphic" and self._is_complete():
            cands = self.circuits(max_size=3)
        elif shortcut and self.kind == "bipartite" and self._is_complete():
            cands = self.circuits(max_size=4)
        else:
            cands = self.circuits()
        for c in cands:
            if not min_attained_twice([eta[e] for e in c]):
                return False, c
        return True, None

    def _is_complete(self) -> bool:
        g = self._graph(self.ground)
        n = g.number_of_nodes()
        if self.kind == "graphic":
            return g.number_of_edges() == n * (n - 1) // 2
        rows = sum(1 for v in g if v[0] == "r")
        return g.number_of_edges() == rows * (n - rows)

    def basis_exchange_to_contain(self, tree: Iterable[Label], eta: Weights, vertices: Iterable) -> tuple:
        """Exchange edges of a compatible spanning tree until it restricts to a tree on ``vertices``.

        Repeatedly pick vertices j, j' of ``vertices`` lying in different
        components of the induced forest and joined by a tree path whose inner
        vertices avoid ``vertices``; the lightest edge on that path (first one
        from j on ties) is replaced by jj', which has the same weight.
        ``vertices`` are vertex names: integers for K_m, ``("r", i)`` /
        ``("c", j)`` for K_{m,p}.
        """
        if not self.is_graphic:
            raise ValueError("basis exchange is implemented for graphic matroids")
        tree = list(tree)
        if not self.is_compatible(tree, eta):
            raise ValueError("the starting tree is not compatible with the weights")
        vset = set(vertices)
        by_ends = {frozenset(self.endpoints[e]): e for e in self.ground}
        while True:
            g = self._graph(tree)
            g.add_nodes_from(vset)
            inner = g.subgraph(vset).copy()
            comps = list(nx.connected_components(inner))
            if len(comps) <= 1:
                break
            path = _bridge_path(g, comps[0], vset)
            jj = by_ends.get(frozenset((path[0], path[-1])))
            if jj is None:
                raise ValueError("the two endpoints are not joined by a ground-set edge")
            edges = [g.edges[a, b]["label"] for a, b in zip(path, path[1:])]
            lightest = min(edges, key=lambda e: (eta[e] is INF, eta[e] if eta[e] is not INF else 0))
            if eta[jj] != eta[lightest]:
                raise ValueError("weights restricted to the vertex set are not tropical")
            tree.remove(lightest)
            tree.append(jj)
        result = tuple(sorted(tree, key=self.ground.index))
        assert self.is_compatible(result, eta)
        return result


def _bridge_path(g: nx.Graph, component: set, vset: set) -> list:
    """Tree path from ``component`` to another vertex of ``vset`` with inner vertices outside ``vset``."""
    parent = {v: None for v in component}
    queue = deque(sorted(component, key=repr))
    while queue:
        u = queue.popleft()
        for w in sorted(g[u], key=repr):
            if w in parent:
                continue
            parent[w] = u
            if w in vset:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(w)
    raise ValueError("the tree does not span the requested vertices")


def _neg(x: TropScalar):
    return 0 if x is INF else -x


def _weight_profile(basis: Iterable[Label], eta: Weights) -> list:
    return sorted(((eta[b] is INF, _neg(eta[b])) for b in basis))


def greedy_compatible_basis(m: Matroid, eta: Weights) -> tuple:
    return m.greedy_compatible_basis(eta)


def extend_weights_from_basis(m: Matroid, basis: Iterable[Label], partial: Weights) -> dict:
    return m.extend_weights_from_basis(basis, partial)


def is_in_trop_matroid(m: Matroid, eta: Weights, shortcut: bool = True) -> tuple[bool, frozenset | None]:
    return m.is_in_trop(eta, shortcut)


def fundamental_circuit(m: Matroid, basis: Iterable[Label], e: Label) -> frozenset:
    return m.fundamental_circuit(basis, e)


def basis_exchange_to_contain(m: Matroid, tree: Iterable[Label], eta: Weights, vertices: Iterable) -> tuple:
    return m.basis_exchange_to_contain(tree, eta, vertices)
