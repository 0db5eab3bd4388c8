"""Graphs, multigraphs and currents.

A :class:`BaseGraph` carries the couplings of an Ising model; a
:class:`Current` assigns a nonnegative integer to each of its edges.  A
:class:`MultiGraph` is the labelled-edge object that the partition engine
works on: every edge is individually labelled, parallel edges and self-loops
are allowed, and it carries the marked pair ``(u0, v0)`` and the source list.

Degree convention: a self-loop adds 2 to the degree of its vertex, so it
never changes a boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[int, int, int]  # (label, u, v)


class GraphError(ValueError):
    pass


def _check_edges(vertices: frozenset[int], edges: Sequence[Edge], loops: bool) -> None:
    seen = set()
    for label, u, v in edges:
        if label in seen:
            raise GraphError(f"duplicate edge label {label}")
        seen.add(label)
        if u not in vertices or v not in vertices:
            raise GraphError(f"edge {label} has an endpoint outside the vertex set")
        if u == v and not loops:
            raise GraphError(f"edge {label} is a self-loop")


@dataclass(frozen=True)
class BaseGraph:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        object.__setattr__(self, "edges", tuple((int(a), int(b), int(c)) for a, b, c in self.edges))
        _check_edges(frozenset(self.vertices), self.edges, loops=False)

    @classmethod
    def from_pairs(cls, vertices: Iterable[int], pairs: Iterable[tuple[int, int]]) -> "BaseGraph":
        """Label the edges 0, 1, 2, ... in the order given."""
        return cls(tuple(vertices), tuple((i, u, v) for i, (u, v) in enumerate(pairs)))

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e[0] for e in self.edges)

    def endpoints(self, eid: int) -> tuple[int, int]:
        for label, u, v in self.edges:
            if label == eid:
                return u, v
        raise KeyError(eid)

    def find_edge(self, u: int, v: int) -> int:
        for label, a, b in self.edges:
            if {a, b} == {u, v}:
                return label
        raise KeyError((u, v))


@dataclass(frozen=True)
class Current:
    base: BaseGraph
    values: Mapping[int, int]

    def __post_init__(self):
        vals = {eid: int(self.values.get(eid, 0)) for eid in self.base.edge_ids}
        extra = set(self.values) - set(vals)
        if extra:
            raise GraphError(f"current has values on unknown edges {sorted(extra)}")
        if any(x < 0 for x in vals.values()):
            raise GraphError("current values must be nonnegative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, base: BaseGraph) -> "Current":
        return cls(base, {})

    def __getitem__(self, eid: int) -> int:
        return self.values[eid]

    def __add__(self, other: "Current") -> "Current":
        if other.base != self.base:
            raise GraphError("currents live on different graphs")
        return Current(self.base, {e: self.values[e] + other.values[e] for e in self.values})

    @property
    def total(self) -> int:
        return sum(self.values.values())

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.values[e] for e in self.base.edge_ids)


@dataclass(frozen=True)
class MultiGraph:
    """Labelled multigraph with a marked pair and a list of sources.

    ``v0`` may never be a source.  Instances whose odd-degree set differs
    from ``sources ^ {u0, v0}`` are legal; they simply have no partitions.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    marked: tuple[int, int]
    sources: tuple[int, ...]
    names: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices) | set(self.marked) | set(self.sources)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple((int(a), int(b), int(c)) for a, b, c in self.edges))
        object.__setattr__(self, "sources", tuple(self.sources))
        _check_edges(frozenset(verts), self.edges, loops=True)
        u0, v0 = self.marked
        if u0 == v0:
            raise GraphError("marked pair must be two distinct vertices")
        if len(set(self.sources)) != len(self.sources):
            raise GraphError("sources must be distinct")
        if len(self.sources) % 2:
            raise GraphError("odd source set")
        if v0 in self.sources:
            raise GraphError("v0 may not be a source")

    @property
    def k(self) -> int:
        return len(self.sources) // 2

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(e[0] for e in self.edges)

    @property
    def target_boundary(self) -> frozenset[int]:
        return frozenset(self.sources) ^ frozenset(self.marked)

    @property
    def admissible(self) -> bool:
        return boundary(self) == self.target_boundary

    def edge(self, label: int) -> Edge:
        for e in self.edges:
            if e[0] == label:
                return e
        raise KeyError(label)

    def edges_between(self, u: int, v: int) -> list[int]:
        return [lab for lab, a, b in self.edges if {a, b} == {u, v} and (a == b) == (u == v)]

    def label(self, name: str) -> int:
        """Look up an edge by the display name given at construction."""
        for lab, nm in self.names.items():
            if nm == name:
                return lab
        raise KeyError(name)

    def name(self, label: int) -> str:
        if label in self.names:
            return self.names[label]
        _, u, v = self.edge(label)
        return f"{u}-{v}#{label}"

    def degree(self, v: int) -> int:
        d = 0
        for _, a, b in self.edges:
            d += (a == v) + (b == v)
        return d

    def fresh_label(self) -> int:
        return max(self.labels, default=-1) + 1

    def replace_edges(self, edges: Sequence[Edge], names: Mapping[int, str] | None = None) -> "MultiGraph":
        keep = {lab for lab, _, _ in edges}
        nm = {lab: s for lab, s in (self.names if names is None else names).items() if lab in keep}
        return MultiGraph(self.vertices, tuple(edges), self.marked, self.sources, nm)


def associated_multigraph(m: Current, sources: Sequence[int], marked: tuple[int, int]) -> MultiGraph:
    """One labelled edge per unit of current; labels run 0, 1, ... by base edge then copy."""
    edges = []
    names = {}
    for eid, u, v in m.base.edges:
        for copy in range(m.values[eid]):
            lab = len(edges)
            edges.append((lab, u, v))
            names[lab] = f"e{eid}.{copy}"
    return MultiGraph(m.base.vertices, tuple(edges), marked, tuple(sources), names)


def _odd_vertices(items: Iterable[tuple[int, int, int]]) -> frozenset[int]:
    odd: set[int] = set()
    for mult, u, v in items:
        if mult % 2 and u != v:
            odd ^= {u}
            odd ^= {v}
    return frozenset(odd)


def boundary(obj: Current | MultiGraph, subset: Iterable[int] | None = None) -> frozenset[int]:
    """Vertices of odd degree (multigraph edge subset) or odd incident current."""
    if isinstance(obj, Current):
        return _odd_vertices((obj.values[eid], u, v) for eid, u, v in obj.base.edges)
    chosen = None if subset is None else set(subset)
    return _odd_vertices((1, u, v) for lab, u, v in obj.edges if chosen is None or lab in chosen)


class _DSU:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        while p != x:
            self.parent[x] = self.parent.setdefault(p, p)
            x, p = p, self.parent[p]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def connected_pairs(u: int, v: int, pairs: Iterable[tuple[int, int]]) -> bool:
    if u == v:
        return True
    dsu = _DSU()
    for a, b in pairs:
        dsu.union(a, b)
    return dsu.find(u) == dsu.find(v)


def connected(u: int, v: int, support: Current | MultiGraph, subset: Iterable[int] | None = None) -> bool:
    """Is there a path from u to v using edges of positive current (or in ``subset``)?"""
    if isinstance(support, Current):
        pairs = ((a, b) for eid, a, b in support.base.edges if support.values[eid] > 0)
    else:
        chosen = None if subset is None else set(subset)
        pairs = ((a, b) for lab, a, b in support.edges if chosen is None or lab in chosen)
    return connected_pairs(u, v, pairs)


def current_weight(c: Current, J: Mapping[int, Fraction]) -> Fraction:
    w = Fraction(1)
    for eid in c.base.edge_ids:
        n = c.values[eid]
        if n:
            w *= Fraction(J[eid]) ** n / math.factorial(n)
    return w


def binom_current(m: Current, n: Current) -> int:
    out = 1
    for eid in m.base.edge_ids:
        out *= math.comb(m.values[eid], n.values[eid])
    return out


def sub_currents(m: Current, A: Iterable[int] | None = None) -> Iterator[tuple[Current, int]]:
    """All n <= m (edgewise) with boundary A, weighted by prod_e C(m_e, n_e).

    ``A=None`` drops the boundary filter.
    """
    target = None if A is None else frozenset(A)
    eids = m.base.edge_ids
    for combo in itertools.product(*(range(m.values[e] + 1) for e in eids)):
        n = Current(m.base, dict(zip(eids, combo)))
        if target is not None and boundary(n) != target:
            continue
        yield n, binom_current(m, n)


def boundary_weight_table(m: Current) -> dict[frozenset[int], int]:
    """Map each boundary A to sum_{n <= m, dn = A} C(m, n)."""
    table: dict[frozenset[int], int] = {}
    for n, w in sub_currents(m):
        b = boundary(n)
        table[b] = table.get(b, 0) + w
    return table


def switching_check(m: Current, A: Iterable[int], u: int, v: int,
                    table: Mapping[frozenset[int], int] | None = None) -> bool:
    """Per-current switching identity, read off the coefficient of w(m).

    sum_{n<=m, dn=A} C(m,n) == 1[u <-> v in m] * sum_{n<=m, dn=A^{u,v}} C(m,n)
    whenever dm = A ^ {u,v}; otherwise both sides are empty and the check is vacuous.
    ``table`` may carry a precomputed :func:`boundary_weight_table` for m.
    """
    A = frozenset(A)
    uv = frozenset((u, v)) if u != v else frozenset()
    if boundary(m) != A ^ uv:
        return True
    if table is None:
        table = boundary_weight_table(m)
    lhs = table.get(A, 0)
    rhs = table.get(A ^ uv, 0) if connected(u, v, m) else 0
    return lhs == rhs
