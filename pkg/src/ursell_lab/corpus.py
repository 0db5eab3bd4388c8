"""Seeded random instances for the harnesses.

All randomness goes through ``random.Random`` (Mersenne Twister, MT19937),
seeded explicitly, so a seed pins down the corpus for this implementation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .graphs import BaseGraph, Current, MultiGraph, associated_multigraph, boundary


def rng_for(seed: int, stream: str) -> random.Random:
    """Independent stream per harness so adding one suite never shifts another."""
    return random.Random(f"{seed}:{stream}")


def random_graph(rng: random.Random, n_vertices: int, n_edges: int, connected_hint: bool = False) -> BaseGraph:
    pairs = list(itertools.combinations(range(n_vertices), 2))
    n_edges = min(n_edges, len(pairs))
    if connected_hint and n_vertices > 1:
        # random spanning tree first, then extra edges
        order = list(range(n_vertices))
        rng.shuffle(order)
        chosen = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n_vertices)}
        rest = [p for p in pairs if p not in chosen]
        rng.shuffle(rest)
        chosen = sorted(chosen)[:n_edges] if n_edges < len(chosen) else sorted(chosen) + rest[: n_edges - len(chosen)]
    else:
        chosen = rng.sample(pairs, n_edges)
    return BaseGraph.from_pairs(range(n_vertices), chosen)


def random_rational(rng: random.Random, max_den: int = 9, upper: Fraction = Fraction(1)) -> Fraction:
    """Uniform-ish rational in [0, upper)."""
    den = rng.randint(2, max_den)
    return Fraction(rng.randrange(den), den) * upper


@dataclass(frozen=True)
class CurrentInstance:
    """A current m on G together with sources and a marked edge, with dm = sources ^ {u0, v0}."""

    base: BaseGraph
    m: Current
    sources: tuple[int, ...]
    marked: tuple[int, int]
    marked_edge: int

    @property
    def k(self) -> int:
        return len(self.sources) // 2

    def multigraph(self) -> MultiGraph:
        return associated_multigraph(self.m, self.sources, self.marked)


def random_current_instance(rng: random.Random, max_vertices: int = 8, max_edges: int = 6,
                            max_current: int = 7, max_k: int = 3, min_current: int = 1,
                            k: int | None = None) -> CurrentInstance:
    """Rejection-sample an admissible (G, m, sources, u0v0).

    k is drawn uniformly from 1..max_k unless given, so larger k are not
    starved by the rejection step.
    """
    if k is None:
        k = rng.randint(1, max_k)
    if max_vertices < 2 * k + 1:
        raise ValueError(f"k={k} needs at least {2 * k + 1} vertices")
    while True:
        nv = rng.randint(2 * k + 1, max_vertices)
        ne = rng.randint(1, max_edges)
        g = random_graph(rng, nv, ne)
        total = rng.randint(min_current, max_current)
        vals = {eid: 0 for eid in g.edge_ids}
        for _ in range(total):
            vals[rng.choice(g.edge_ids)] += 1
        m = Current(g, vals)
        eid, a, b = rng.choice(g.edges)
        u0, v0 = (a, b) if rng.random() < 0.5 else (b, a)
        dm = boundary(m)
        if v0 not in dm:
            continue
        sources = dm ^ {u0, v0}
        if len(sources) != 2 * k:
            continue
        src = sorted(sources)
        rng.shuffle(src)
        return CurrentInstance(g, m, tuple(src), (u0, v0), eid)


def current_corpus(seed: int, count: int, **kw) -> Iterator[CurrentInstance]:
    rng = rng_for(seed, "currents")
    for _ in range(count):
        yield random_current_instance(rng, **kw)


def random_couplings(rng: random.Random, g: BaseGraph, zero_prob: float = 0.1) -> dict[int, Fraction]:
    return {eid: (Fraction(0) if rng.random() < zero_prob else random_rational(rng)) for eid in g.edge_ids}
