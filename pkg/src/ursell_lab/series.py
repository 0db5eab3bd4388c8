"""Truncated multivariate power series in the couplings J_e, exact rational coefficients.

Used to check, coefficient by coefficient, that the J-Taylor coefficient of
(Z/2^|V|)^(k+1) * d u_2k / dJ_{u0v0} at multi-index m is R(m) / prod m_e!.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graphs import BaseGraph, Current, MultiGraph, boundary
from .partitions import R_current, set_partitions, signed_weight

MAX_ORACLE_CURRENT = 8


class SeriesError(ArithmeticError):
    pass


class TruncatedSeries:
    """Coefficients keyed by exponent tuples, one slot per edge of ``edges``.

    Every exponent is kept <= cap.  Exponents above the cap form an ideal,
    so truncating after each ring operation is exact below the cap.
    """

    __slots__ = ("edges", "cap", "coef")

    def __init__(self, edges: Sequence[int], cap: Sequence[int], coef: Mapping[tuple, Fraction] | None = None):
        self.edges = tuple(edges)
        self.cap = tuple(cap)
        if len(self.edges) != len(self.cap):
            raise ValueError("one cap per edge")
        self.coef = {}
        for a, c in (coef or {}).items():
            if c and all(x <= y for x, y in zip(a, self.cap)):
                self.coef[tuple(a)] = Fraction(c)

    @classmethod
    def constant(cls, edges, cap, c=1) -> "TruncatedSeries":
        return cls(edges, cap, {(0,) * len(edges): Fraction(c)})

    @classmethod
    def variable(cls, edges, cap, eid) -> "TruncatedSeries":
        i = tuple(edges).index(eid)
        a = [0] * len(edges)
        a[i] = 1
        return cls(edges, cap, {tuple(a): Fraction(1)})

    def _like(self, coef) -> "TruncatedSeries":
        return TruncatedSeries(self.edges, self.cap, coef)

    def _check(self, other: "TruncatedSeries"):
        if other.edges != self.edges or other.cap != self.cap:
            raise ValueError("series over different variables or caps")

    def __getitem__(self, a) -> Fraction:
        return self.coef.get(tuple(a), Fraction(0))

    @property
    def const(self) -> Fraction:
        return self[(0,) * len(self.edges)]

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.edges == other.edges and self.cap == other.cap and self.coef == other.coef

    def __repr__(self):
        return f"TruncatedSeries({self.edges}, cap={self.cap}, {len(self.coef)} terms)"

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + self.constant(self.edges, self.cap, other)
        self._check(other)
        out = dict(self.coef)
        for a, c in other.coef.items():
            out[a] = out.get(a, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({a: -c for a, c in self.coef.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return self._like({a: c * x for a, x in self.coef.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        out: dict[tuple, Fraction] = {}
        cap = self.cap
        for a, x in self.coef.items():
            for b, y in other.coef.items():
                s = tuple(i + j for i, j in zip(a, b))
                if all(i <= c for i, c in zip(s, cap)):
                    out[s] = out.get(s, 0) + x * y
        return self._like(out)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        """1/s via the geometric series in (1 - s/c0); terminates since s - c0 is nilpotent below cap."""
        c0 = self.const
        if c0 == 0:
            raise SeriesError("division by a series with zero constant term")
        nil = self.scale(1 / c0) - 1
        nil = -nil
        out = self.constant(self.edges, self.cap)
        term = out
        for _ in range(sum(self.cap)):
            term = term * nil
            if not term.coef:
                break
            out = out + term
        return out.scale(1 / c0)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.constant(self.edges, self.cap)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self, eid: int) -> "TruncatedSeries":
        """Formal d/dJ_eid; the result keeps the same cap (top slice becomes exact zero padding)."""
        i = self.edges.index(eid)
        out = {}
        for a, c in self.coef.items():
            if a[i]:
                b = list(a)
                b[i] -= 1
                out[tuple(b)] = c * a[i]
        return self._like(out)


def series_add(s, t):
    return s + t


def series_mul(s, t):
    return s * t


def series_div(s, t):
    return s / t


def series_pow(s, n):
    return s ** n


def source_series(G: BaseGraph, A: Iterable[int], cap: Mapping[int, int]) -> TruncatedSeries:
    """sum_{n <= cap, dn = A} prod J_e^n_e / n_e!  (A empty gives Z_G / 2^|V|)."""
    A = frozenset(A)
    eids = G.edge_ids
    caps = tuple(cap[e] for e in eids)
    coef = {}
    for combo in itertools.product(*(range(c + 1) for c in caps)):
        n = Current(G, dict(zip(eids, combo)))
        if boundary(n) == A:
            coef[combo] = Fraction(1, math.prod(math.factorial(x) for x in combo))
    return TruncatedSeries(eids, caps, coef)


def ursell_series(G: BaseGraph, spins: Sequence[int], cap: Mapping[int, int]) -> TruncatedSeries:
    """u_n(sigma_spins) as a truncated series, from ratios S_A / S_empty."""
    inv_z = source_series(G, (), cap).inverse()
    cache: dict[frozenset, TruncatedSeries] = {}

    def corr(block):
        odd = frozenset(v for v in set(block) if list(block).count(v) % 2)
        if odd not in cache:
            cache[odd] = source_series(G, odd, cap) * inv_z
        return cache[odd]

    eids = G.edge_ids
    caps = tuple(cap[e] for e in eids)
    total = TruncatedSeries(eids, caps)
    for blocks in set_partitions(range(len(spins))):
        if any(len(b) % 2 for b in blocks):
            continue
        term = TruncatedSeries.constant(eids, caps, signed_weight(len(blocks)))
        for b in blocks:
            term = term * corr([spins[i] for i in b])
        total = total + term
    return total


def lemma_u2krcr_check(G: BaseGraph, sources: Sequence[int], marked: tuple[int, int], m: Current,
                       detail: bool = False):
    """Compare the series coefficient at m with R_current(m) / prod m_e!.

    The marked edge gets cap m_e0 + 1 so the formal derivative still reaches m.
    """
    sources = tuple(sources)
    u0, v0 = marked
    if len(set(sources)) != len(sources) or len(sources) % 2 or not sources:
        raise ValueError("need a nonempty even list of distinct sources")
    if v0 in sources:
        raise ValueError("v0 may not be a source")
    if m.base != G:
        raise ValueError("current lives on a different graph")
    if m.total > MAX_ORACLE_CURRENT:
        raise ValueError(f"|m| = {m.total} exceeds oracle cap {MAX_ORACLE_CURRENT}")
    e0 = G.find_edge(u0, v0)
    k = len(sources) // 2
    cap = dict(m.values)
    cap[e0] += 1
    U = ursell_series(G, sources, cap)
    lhs_series = U.derivative(e0) * source_series(G, (), cap) ** (k + 1)
    lhs = lhs_series[m.as_tuple()]
    rhs = Fraction(R_current(m, sources, marked), math.prod(math.factorial(x) for x in m.values.values()))
    if detail:
        return lhs == rhs, lhs, rhs
    return lhs == rhs


def realize(g: MultiGraph) -> tuple[BaseGraph, Current]:
    """Collapse a loopless multigraph into (base graph, current) with one base edge per vertex pair.

    The u0v0 pair is always present as a base edge (current 0 if unused) so it
    can carry the derivative.
    """
    counts: dict[tuple[int, int], int] = {}
    for _, u, v in g.edges:
        if u == v:
            raise ValueError("self-loops have no current realization")
        key = (min(u, v), max(u, v))
        counts[key] = counts.get(key, 0) + 1
    u0, v0 = g.marked
    counts.setdefault((min(u0, v0), max(u0, v0)), 0)
    pairs = sorted(counts)
    G = BaseGraph.from_pairs(g.vertices, pairs)
    return G, Current(G, {i: counts[p] for i, p in enumerate(pairs)})
