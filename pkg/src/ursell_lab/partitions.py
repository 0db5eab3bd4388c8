"""Partitions of a labelled multigraph and the signed count R.

A partition of a multigraph with sources ``j_1..j_2k`` and marked pair
``(u0, v0)`` splits the edge set into k+1 slots:

* one slot per block b of an even set partition P, except a distinguished
  block Q; the slot's odd-degree set is b,
* the Q-slot, whose odd-degree set is ``Q ^ {u0, v0}``,
* ``k + 1 - |P|`` ordered tail slots with empty odd-degree set,

and u0 must not be connected to v0 through the Q-slot together with the
first tail slot.  Block slots are identified by their boundary and tail
slots by position, so generating (P, Q, slot map) triples visits each
distinct partition exactly once.  R sums ``(-1)^(n-1) (n-1)!`` with n = |P|.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .graphs import Current, GraphError, MultiGraph, boundary, connected_pairs


def signed_weight(n: int) -> int:
    return (-1) ** (n - 1) * math.factorial(n - 1)


# ---------------------------------------------------------------- set partitions

def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """Every partition of ``items``; blocks keep the input order."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        yield [[first]] + sub
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]


def even_partitions(S: Iterable[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions of S into blocks of even size, blocks sorted by least element."""
    elems = tuple(sorted(S))
    if len(elems) % 2:
        raise ValueError("odd source set")
    yield from _even_partitions(elems)


def _even_partitions(elems):
    if not elems:
        yield ()
        return
    head, rest = elems[0], elems[1:]
    for size in range(1, len(rest) + 1, 2):
        for mates in itertools.combinations(rest, size):
            block = (head,) + mates
            remaining = tuple(x for x in rest if x not in mates)
            for tail in _even_partitions(remaining):
                yield (block,) + tail


# ---------------------------------------------------------------- restrictions

class Mode(enum.Enum):
    SEPARATE = "separate"
    TOGETHER = "together"


@dataclass(frozen=True)
class RestrictionSet:
    items: tuple[tuple[int, int, Mode], ...] = ()

    def __post_init__(self):
        for a, b, mode in self.items:
            if a == b:
                raise ValueError(f"restriction pairs an edge with itself ({a}); the restricted sum would be trivially 0")
            if not isinstance(mode, Mode):
                raise TypeError(mode)

    @classmethod
    def of(cls, separate: Iterable[tuple[int, int]] = (), together: Iterable[tuple[int, int]] = ()) -> "RestrictionSet":
        items = [(a, b, Mode.SEPARATE) for a, b in separate]
        items += [(a, b, Mode.TOGETHER) for a, b in together]
        return cls(tuple(items))

    def plus(self, a: int, b: int, mode: Mode) -> "RestrictionSet":
        return RestrictionSet(self.items + ((a, b, mode),))

    def labels(self) -> set[int]:
        return {x for a, b, _ in self.items for x in (a, b)}

    def __bool__(self):
        return bool(self.items)


NO_RESTRICTIONS = RestrictionSet()


# ---------------------------------------------------------------- partitions of a multigraph

@dataclass(frozen=True)
class GraphPartition:
    blocks: tuple[tuple[int, ...], ...]
    q: tuple[int, ...]
    slots: tuple[tuple[int, ...], ...]
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.blocks))

    @property
    def weight(self) -> int:
        return signed_weight(self.n)

    def describe(self, g: MultiGraph) -> str:
        parts = []
        for i, slot in enumerate(self.slots, 1):
            names = ",".join(g.name(lab) for lab in slot)
            parts.append(f"E{i}={{{names}}}")
        return " ".join(parts) + f" n={self.n}"


def _slot_targets(blocks, q, marked, k):
    others = [frozenset(b) for b in blocks if b != q]
    return others + [frozenset(q) ^ frozenset(marked)] + [frozenset()] * (k + 1 - len(blocks))


class _Search:
    """Depth-first slot assignment with parity pruning.

    An edge is placed into a slot and the slot's parity mask is updated; once
    the last non-loop edge at a vertex has been placed, that vertex's parity
    must match the target in every slot.
    """

    def __init__(self, g: MultiGraph, restrictions: RestrictionSet):
        self.g = g
        self.labels = g.labels
        index = {v: i for i, v in enumerate(g.vertices)}
        pos = {lab: i for i, lab in enumerate(self.labels)}
        self.index = index
        self.masks = []
        self.ends = []
        last = {}
        touched = 0
        for i, (lab, u, v) in enumerate(g.edges):
            mask = 0 if u == v else (1 << index[u]) ^ (1 << index[v])
            self.masks.append(mask)
            self.ends.append((u, v))
            if u != v:
                last[u] = i
                last[v] = i
                touched |= mask
        self.close = [0] * len(g.edges)
        for v, i in last.items():
            self.close[i] |= 1 << index[v]
        self.untouched = ((1 << len(g.vertices)) - 1) & ~touched
        self.checks: list[list[tuple[int, Mode]]] = [[] for _ in g.edges]
        for a, b, mode in restrictions.items:
            if a not in pos or b not in pos:
                raise GraphError(f"restriction names unknown edge ({a}, {b})")
            ia, ib = sorted((pos[a], pos[b]))
            self.checks[ib].append((ia, mode))

    def mask_of(self, vs) -> int:
        out = 0
        for v in vs:
            out |= 1 << self.index[v]
        return out

    def assignments(self, targets: list[frozenset[int]], conn: tuple[int, int]) -> Iterator[tuple[int, ...]]:
        tgt = [self.mask_of(t) for t in targets]
        if any(t & self.untouched for t in tgt):
            return
        nslots = len(tgt)
        nedges = len(self.masks)
        parity = [0] * nslots
        assign = [0] * nedges
        masks, close, checks = self.masks, self.close, self.checks
        u0, v0 = self.g.marked
        ends = self.ends

        def rec(i):
            if i == nedges:
                pairs = [ends[j] for j in range(nedges) if assign[j] in conn]
                if not connected_pairs(u0, v0, pairs):
                    yield tuple(assign)
                return
            m = masks[i]
            cm = close[i]
            for s in range(nslots):
                bad = False
                for j, mode in checks[i]:
                    same = assign[j] == s
                    if (mode is Mode.SEPARATE) == same:
                        bad = True
                        break
                if bad:
                    continue
                parity[s] ^= m
                if cm == 0 or all(not ((parity[j] ^ tgt[j]) & cm) for j in range(nslots)):
                    assign[i] = s
                    yield from rec(i + 1)
                parity[s] ^= m

        yield from rec(0)


def enumerate_partitions(g: MultiGraph, restrictions: RestrictionSet = NO_RESTRICTIONS) -> Iterator[GraphPartition]:
    """Each distinct partition of g satisfying the restrictions, exactly once."""
    k = g.k
    if k == 0 or not g.admissible:
        return
    search = _Search(g, restrictions)
    labels = search.labels
    for blocks in even_partitions(g.sources):
        n = len(blocks)
        for q in blocks:
            targets = _slot_targets(blocks, q, g.marked, k)
            for assign in search.assignments(targets, (n - 1, n)):
                slots = tuple(tuple(lab for lab, s in zip(labels, assign) if s == j) for j in range(k + 1))
                yield GraphPartition(blocks, q, slots)


def count_partitions(g: MultiGraph, restrictions: RestrictionSet = NO_RESTRICTIONS) -> tuple[int, int]:
    """(R, number of partitions) in one pass."""
    r = count = 0
    for p in enumerate_partitions(g, restrictions):
        r += p.weight
        count += 1
    return r, count


def R_graph(g: MultiGraph, restrictions: RestrictionSet = NO_RESTRICTIONS) -> int:
    return count_partitions(g, restrictions)[0]


# ---------------------------------------------------------------- R(m) over currents

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def R_current(m: Current, sources: Sequence[int], marked: tuple[int, int]) -> int:
    """R(m) from tuples of currents n^1 + ... + n^(k+1) = m weighted by multinomials.

    Works on current values directly (no labelled edges), so it is an
    independent route to :func:`R_graph` of the associated multigraph.
    """
    sources = tuple(sources)
    if len(set(sources)) != len(sources) or len(sources) % 2:
        raise ValueError("sources must be an even number of distinct vertices")
    u0, v0 = marked
    if v0 in sources:
        raise ValueError("v0 may not be a source")
    k = len(sources) // 2
    if k == 0 or boundary(m) != frozenset(sources) ^ frozenset(marked):
        return 0
    nslots = k + 1
    verts = m.base.vertices
    index = {v: i for i, v in enumerate(verts)}
    live = [(m.values[eid], u, v) for eid, u, v in m.base.edges if m.values[eid] > 0]
    last = {}
    touched = 0
    for i, (_, u, v) in enumerate(live):
        last[u] = last[v] = i
        touched |= (1 << index[u]) | (1 << index[v])
    close = [0] * len(live)
    for v, i in last.items():
        close[i] |= 1 << index[v]
    untouched = ((1 << len(verts)) - 1) & ~touched
    options = []
    for mult, u, v in live:
        emask = (1 << index[u]) ^ (1 << index[v])
        opts = []
        for comp in _compositions(mult, nslots):
            coef = math.factorial(mult)
            for c in comp:
                coef //= math.factorial(c)
            flips = tuple(emask if c % 2 else 0 for c in comp)
            opts.append((comp, flips, coef))
        options.append(opts)

    total = 0
    for blocks in even_partitions(sources):
        n = len(blocks)
        inner = 0
        for q in blocks:
            targets = _slot_targets(blocks, q, marked, k)
            tgt = [sum(1 << index[v] for v in t) for t in targets]
            if any(t & untouched for t in tgt):
                continue
            inner += _sum_compositions(live, options, close, tgt, (n - 1, n), u0, v0)
        total += signed_weight(n) * inner
    return total


def _sum_compositions(live, options, close, tgt, conn, u0, v0) -> int:
    nslots = len(tgt)
    parity = [0] * nslots
    chosen: list[tuple[int, ...]] = [()] * len(live)

    def rec(i, coef):
        if i == len(live):
            pairs = [(u, v) for (_, u, v), comp in zip(live, chosen) if comp[conn[0]] or comp[conn[1]]]
            return 0 if connected_pairs(u0, v0, pairs) else coef
        acc = 0
        cm = close[i]
        for comp, flips, c in options[i]:
            for s in range(nslots):
                parity[s] ^= flips[s]
            if all(not ((parity[s] ^ tgt[s]) & cm) for s in range(nslots)):
                chosen[i] = comp
                acc += rec(i + 1, coef * c)
            for s in range(nslots):
                parity[s] ^= flips[s]
        return acc

    return rec(0, 1)


# ---------------------------------------------------------------- small combinatorial constants

def I_p(p: int) -> int:
    """Signed partition sum over {1..2p} with 2q-1 and 2q always in one block."""
    if p < 1:
        raise ValueError("p must be at least 1")
    total = 0
    for blocks in even_partitions(range(1, 2 * p + 1)):
        where = {x: i for i, b in enumerate(blocks) for x in b}
        if all(where[2 * q - 1] == where[2 * q] for q in range(1, p + 1)):
            total += signed_weight(len(blocks))
    return total


def N_L(L: int, boxes: int) -> int:
    """Ways to put 2L distinct objects into distinct boxes, every box even (brute force)."""
    if L < 0 or boxes < 0:
        raise ValueError("L and boxes must be nonnegative")
    count = 0
    for assignment in itertools.product(range(boxes), repeat=2 * L):
        occ = [0] * boxes
        for b in assignment:
            occ[b] += 1
        if all(c % 2 == 0 for c in occ):
            count += 1
    return count


# ---------------------------------------------------------------- special graphs

class Family(enum.Enum):
    H = "H"
    K_I = "K_I"
    K_II = "K_II"


@dataclass(frozen=True)
class SpecialGraphSpec:
    family: Family
    k: int
    L: int = 0

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.H and self.k < 2:
            raise ValueError("H family needs k >= 2")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.L < 0:
            raise ValueError("L must be nonnegative")


V0 = 0


def make_special(spec: SpecialGraphSpec | Family | str, k: int | None = None, L: int = 0) -> MultiGraph:
    """The reduced graphs H_{k,L}, K^I_{k,L}, K^II_{k,L}.

    Sources j_i are vertices 1..2k and v0 is vertex 0.  For H and K^I the
    vertex u0 is j_1; for K^II it is the extra vertex 2k+1.  Edge names
    follow the figures ("j1j2", "j4v0", ...); the 2L parallel u0v0 edges are
    named e1, e2, ...
    """
    if not isinstance(spec, SpecialGraphSpec):
        spec = SpecialGraphSpec(Family(spec) if isinstance(spec, str) else spec, k, L)
    k, L, fam = spec.k, spec.L, spec.family
    j = {i: i for i in range(1, 2 * k + 1)}
    named: list[tuple[str, int, int]] = []
    if fam is Family.H:
        u0 = j[1]
        named += [("j1j2", j[1], j[2]), ("j1j3", j[1], j[3]), ("j4v0", j[4], V0)]
        first_pair = 5
    elif fam is Family.K_I:
        u0 = j[1]
        named += [("j2v0", j[2], V0)]
        first_pair = 3
    else:
        u0 = 2 * k + 1
        named += [("j1u0", j[1], u0), ("j2v0", j[2], V0)]
        first_pair = 3
    for a in range(first_pair, 2 * k, 2):
        named.append((f"j{a}j{a + 1}", j[a], j[a + 1]))
    for i in range(1, 2 * L + 1):
        named.append((f"e{i}", u0, V0))
    edges = tuple((lab, u, v) for lab, (_, u, v) in enumerate(named))
    names = {lab: nm for lab, (nm, _, _) in enumerate(named)}
    verts = set(j.values()) | {u0, V0}
    return MultiGraph(tuple(verts), edges, (u0, V0), tuple(j[i] for i in range(1, 2 * k + 1)), names)


def add_self_loop(g: MultiGraph, v: int, name: str | None = None) -> tuple[MultiGraph, int]:
    lab = g.fresh_label()
    names = dict(g.names)
    names[lab] = name or f"loop{v}"
    return g.replace_edges(g.edges + ((lab, v, v),), names), lab


# ---------------------------------------------------------------- reductions

def reduce_self_loop(g: MultiGraph, label: int) -> MultiGraph:
    """Delete a self-loop; R(g) = (k+1) R(result), also under restrictions avoiding it."""
    lab, u, v = g.edge(label)
    if u != v:
        raise ValueError(f"edge {label} is not a self-loop")
    return g.replace_edges(tuple(e for e in g.edges if e[0] != label))


def common_vertex(g: MultiGraph, e1: int, e2: int) -> int | None:
    _, a1, b1 = g.edge(e1)
    _, a2, b2 = g.edge(e2)
    shared = {a1, b1} & {a2, b2}
    free = [x for x in sorted(shared) if x not in g.marked]
    if free:
        return free[0]
    return min(shared) if shared else None


def contract_pair(g: MultiGraph, e1: int, e2: int, at: int | None = None) -> tuple[MultiGraph, int]:
    """Replace e1 = v v1 and e2 = v v2 by one edge v1 v2.

    Returns the new graph and the new edge's label.  The merged edge may be a
    self-loop when v1 == v2.  ``at`` picks v when two parallel edges share
    both endpoints.
    """
    if e1 == e2:
        raise ValueError("contract_pair needs two different edges")
    if at is None:
        v = common_vertex(g, e1, e2)
    else:
        v = at if at in set(g.edge(e1)[1:]) & set(g.edge(e2)[1:]) else None
    if v is None:
        raise ValueError("edges share no endpoint")
    if v in g.marked:
        raise ValueError("common endpoint is one of the marked vertices")
    _, a1, b1 = g.edge(e1)
    _, a2, b2 = g.edge(e2)
    v1 = b1 if a1 == v else a1
    v2 = b2 if a2 == v else a2
    lab = g.fresh_label()
    names = dict(g.names)
    names[lab] = f"({g.name(e1)}+{g.name(e2)})"
    edges = tuple(e for e in g.edges if e[0] not in (e1, e2)) + ((lab, v1, v2),)
    return g.replace_edges(edges, names), lab


# ---------------------------------------------------------------- sign scan

@dataclass
class SignReport:
    instances: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def restriction_allowed(g: MultiGraph, restrictions: RestrictionSet) -> bool:
    """Restricted sign statement needs pairs avoiding u0v0 edges and self-loops."""
    u0, v0 = g.marked
    for lab in restrictions.labels():
        _, a, b = g.edge(lab)
        if a == b or {a, b} == {u0, v0}:
            return False
    return all(mode is Mode.SEPARATE for _, _, mode in restrictions.items)


def sign_scan(instances: Iterable[MultiGraph | tuple[MultiGraph, RestrictionSet]]) -> SignReport:
    """Check (-1)^(k-1) R >= 0 on every instance."""
    report = SignReport()
    for item in instances:
        g, restr = item if isinstance(item, tuple) else (item, NO_RESTRICTIONS)
        r = R_graph(g, restr)
        report.instances += 1
        if (-1) ** (g.k - 1) * r < 0:
            report.violations.append({"graph": g, "restrictions": restr, "R": r})
    return report
