"""Exact Ising correlations, Ursell functions and cumulants on small graphs.

Couplings are given as t_e = tanh(J_e).  With rational t every correlation
and every J-derivative below is an exact rational.  The same code accepts
float t for finite-difference checks.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graphs import BaseGraph
from .partitions import set_partitions, signed_weight

MAX_EXPANSION_VERTICES = 20
MAX_ORACLE_VERTICES = 16


class CapError(ValueError):
    pass


def check_couplings(G: BaseGraph, t: Mapping[int, Fraction | float]) -> None:
    for eid in G.edge_ids:
        if eid not in t:
            raise ValueError(f"no coupling for edge {eid}")
        if not 0 <= t[eid] < 1:
            raise ValueError(f"t[{eid}] = {t[eid]} outside [0, 1)")


def parity_set(spins: Iterable[int]) -> frozenset[int]:
    """sigma_j^2 = 1: a product of spins only depends on the odd-multiplicity vertices."""
    return frozenset(v for v, c in Counter(spins).items() if c % 2)


class Ising:
    """Ising model on G with couplings t = tanh J, with cached correlations.

    Correlations come from the even-subgraph expansion
    <sigma_A> = sum_{S: dS = A} t^S / sum_{S: dS = {}} t^S,
    accumulated edge by edge over boundary bitmasks.
    """

    def __init__(self, G: BaseGraph, t: Mapping[int, Fraction | float]):
        check_couplings(G, t)
        if len(G.vertices) > MAX_EXPANSION_VERTICES:
            raise CapError(f"{len(G.vertices)} vertices exceeds expansion cap {MAX_EXPANSION_VERTICES}")
        self.G = G
        self.t = dict(t)
        self.index = {v: i for i, v in enumerate(G.vertices)}
        table: dict[int, Fraction | float] = {0: 1}
        for eid, u, v in G.edges:
            te = self.t[eid]
            if not te:
                continue
            flip = (1 << self.index[u]) ^ (1 << self.index[v])
            new = dict(table)
            for mask, w in table.items():
                new[mask ^ flip] = new.get(mask ^ flip, 0) + w * te
            table = new
        self._table = table
        self._cache: dict[frozenset[int], Fraction | float] = {}

    def _mask(self, A: Iterable[int]) -> int:
        out = 0
        for v in A:
            out |= 1 << self.index[v]
        return out

    def correlation(self, A: Iterable[int]) -> Fraction | float:
        """<sigma_A> for a vertex set A (a multiset is reduced mod 2)."""
        A = parity_set(A)
        if A not in self._cache:
            num = self._table.get(self._mask(A), 0)
            den = self._table[0]
            if isinstance(num, float) or isinstance(den, float):
                self._cache[A] = num / den
            else:
                self._cache[A] = Fraction(num) / Fraction(den)
        return self._cache[A]

    def ursell(self, spins: Sequence[int]) -> Fraction | float:
        total = 0
        for blocks in set_partitions(range(len(spins))):
            if any(len(b) % 2 for b in blocks):
                continue
            prod = signed_weight(len(blocks))
            for b in blocks:
                prod = prod * self.correlation(spins[i] for i in b)
                if not prod:
                    break
            total += prod
        return total

    def covariance_with_edge(self, B: Iterable[int], e0: int):
        """d<sigma_B>/dJ_e0 = <sigma_B sigma_u sigma_v> - <sigma_B><sigma_u sigma_v>."""
        u, v = self.G.endpoints(e0)
        B = list(B)
        return self.correlation(B + [u, v]) - self.correlation(B) * self.correlation([u, v])

    def ursell_derivative(self, spins: Sequence[int], e0: int) -> Fraction | float:
        """d u_n / d J_e0 by differentiating the partition formula block by block."""
        total = 0
        for blocks in set_partitions(range(len(spins))):
            if any(len(b) % 2 for b in blocks):
                continue
            corr = [self.correlation(spins[i] for i in b) for b in blocks]
            for qi, q in enumerate(blocks):
                rest = 1
                for pi, c in enumerate(corr):
                    if pi != qi:
                        rest = rest * c
                if not rest:
                    continue
                total += signed_weight(len(blocks)) * self.covariance_with_edge([spins[i] for i in q], e0) * rest
        return total


@dataclass(frozen=True)
class UrsellValue:
    value: Fraction | float
    order: int

    def __post_init__(self):
        if self.order % 2 and self.value != 0:
            raise AssertionError(f"odd-order Ursell function is {self.value}, expected 0")


def correlation(G: BaseGraph, t, A: Iterable[int]):
    return Ising(G, t).correlation(A)


def correlation_oracle(G: BaseGraph, t, A: Iterable[int]):
    """Same quantity by summing prod_e (1 + t_e s_u s_v) over all 2^|V| spin states."""
    check_couplings(G, t)
    if len(G.vertices) > MAX_ORACLE_VERTICES:
        raise CapError(f"{len(G.vertices)} vertices exceeds oracle cap {MAX_ORACLE_VERTICES}")
    A = parity_set(A)
    num = den = 0
    for signs in itertools.product((1, -1), repeat=len(G.vertices)):
        s = dict(zip(G.vertices, signs))
        w = 1
        for eid, u, v in G.edges:
            w = w * (1 + t[eid] * s[u] * s[v])
        sA = 1
        for a in A:
            sA *= s[a]
        num += w * sA
        den += w
    return Fraction(num, den) if isinstance(den, int) else num / den


def ursell(G: BaseGraph, t, spins: Sequence[int]) -> UrsellValue:
    if not spins:
        raise ValueError("need at least one spin")
    return UrsellValue(Ising(G, t).ursell(list(spins)), len(spins))


def ursell_derivative(G: BaseGraph, t, spins: Sequence[int], e0: int):
    if len(spins) % 2:
        raise ValueError("derivative is defined here for an even number of spins")
    return Ising(G, t).ursell_derivative(list(spins), e0)


# ---------------------------------------------------------------- cumulants

def spin_moments(G: BaseGraph, t, lam: Mapping[int, Fraction], upto: int) -> list[Fraction]:
    """<X^j> for j = 0..upto, X = sum_u lam_u sigma_u, by spin enumeration."""
    check_couplings(G, t)
    if len(G.vertices) > MAX_ORACLE_VERTICES:
        raise CapError("too many vertices for spin enumeration")
    sums = [Fraction(0)] * (upto + 1)
    den = Fraction(0)
    for signs in itertools.product((1, -1), repeat=len(G.vertices)):
        s = dict(zip(G.vertices, signs))
        w = Fraction(1)
        for eid, u, v in G.edges:
            w *= 1 + Fraction(t[eid]) * s[u] * s[v]
        x = sum((Fraction(lam.get(u, 0)) * s[u] for u in G.vertices), Fraction(0))
        p = Fraction(1)
        for j in range(upto + 1):
            sums[j] += w * p
            p *= x
        den += w
    return [s / den for s in sums]


def cumulants_from_moments(mu: Sequence[Fraction]) -> list[Fraction]:
    """kappa_n = mu_n - sum_{m<n} C(n-1, m-1) kappa_m mu_{n-m}; index 0 unused (0)."""
    kappa = [Fraction(0)] * len(mu)
    for n in range(1, len(mu)):
        acc = mu[n]
        for m in range(1, n):
            acc -= math.comb(n - 1, m - 1) * kappa[m] * mu[n - m]
        kappa[n] = acc
    return kappa


def cumulant(G: BaseGraph, t, lam: Mapping[int, Fraction], r: int) -> Fraction:
    if r < 1:
        raise ValueError("cumulant order must be at least 1")
    if r % 2:
        return Fraction(0)
    return cumulants_from_moments(spin_moments(G, t, lam, r))[r]


def cumulant_via_ursell(G: BaseGraph, t, lam: Mapping[int, Fraction], r: int) -> Fraction:
    """sum over vertex r-tuples of prod lam times the Ursell function of the tuple."""
    model = Ising(G, t)
    total = Fraction(0)
    for tup in itertools.product(G.vertices, repeat=r):
        w = Fraction(1)
        for v in tup:
            w *= Fraction(lam.get(v, 0))
        if w:
            total += w * model.ursell(list(tup))
    return total


# ---------------------------------------------------------------- repeated-argument reduction

def reduction_rhs(model: Ising, spins: Sequence[int]):
    """-sum over A with 0 in A, 1 not in A of u_|A| * u_|A^c| (index positions)."""
    n = len(spins)
    others = range(2, n)
    total = 0
    for size in range(0, n - 1):
        for extra in itertools.combinations(others, size):
            A = (0,) + extra
            Ac = [i for i in range(n) if i not in A]
            total += model.ursell([spins[i] for i in A]) * model.ursell([spins[i] for i in Ac])
    return -total


def reduction_check(G: BaseGraph, t, spins: Sequence[int]) -> bool:
    spins = list(spins)
    if len(spins) % 2 or len(spins) < 2:
        raise ValueError("need an even number of spins")
    if len(spins) == 2:
        raise ValueError("the repeated-argument reduction does not hold for k=1")
    if spins[0] != spins[1]:
        raise ValueError("first two spins must coincide")
    model = Ising(G, t)
    return model.ursell(spins) == reduction_rhs(model, spins)


# ---------------------------------------------------------------- float model and the edge-splitting gadget

def correlation_float(G: BaseGraph, J: Mapping[int, float], A: Iterable[int]) -> float:
    """<sigma_A> with Boltzmann weights exp(sum J s s), by spin enumeration."""
    if len(G.vertices) > MAX_ORACLE_VERTICES:
        raise CapError("too many vertices for spin enumeration")
    A = parity_set(A)
    num = den = 0.0
    for signs in itertools.product((1, -1), repeat=len(G.vertices)):
        s = dict(zip(G.vertices, signs))
        w = math.exp(sum(J[eid] * s[u] * s[v] for eid, u, v in G.edges))
        num += w * math.prod(s[a] for a in A)
        den += w
    return num / den


@dataclass(frozen=True)
class Gadget:
    graph: BaseGraph
    beta_hat: float
    w: int
    new_edges: tuple[int, int]

    def couplings(self, J: Mapping[int, float]) -> dict[int, float]:
        out = {eid: J[eid] for eid in self.graph.edge_ids if eid not in self.new_edges}
        out.update({e: self.beta_hat for e in self.new_edges})
        return out


def split_coupling(beta: float) -> float:
    """beta_hat with cosh(2 beta_hat) = exp(2 beta)."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    x = math.exp(2 * beta)
    return 0.5 * math.log(x + math.sqrt(x * x - 1))


def gadget_split(G: BaseGraph, e0: int, beta: float) -> Gadget:
    """Replace e0 = u0v0 by a path u0 - w - v0, both new couplings beta_hat."""
    u0, v0 = G.endpoints(e0)
    w = max(G.vertices) + 1
    a = max(G.edge_ids) + 1
    b = a + 1
    edges = tuple(e for e in G.edges if e[0] != e0) + ((a, u0, w), (b, w, v0))
    return Gadget(BaseGraph(G.vertices + (w,), edges), split_coupling(beta), w, (a, b))


# ---------------------------------------------------------------- harnesses

@dataclass
class IsingReport:
    name: str
    instances: int = 0
    violations: int = 0
    worst: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _random_model(rng, max_vertices: int, max_edges: int, min_vertices: int = 2):
    from .corpus import random_couplings, random_graph
    nv = rng.randint(min_vertices, max_vertices)
    full = nv * (nv - 1) // 2
    ne = rng.randint(1, min(full, max_edges))
    G = random_graph(rng, nv, ne, connected_hint=rng.random() < 0.5)
    return G, random_couplings(rng, G)


def random_spins(rng, G: BaseGraph, k: int, e0: int) -> tuple[list[int], str]:
    """2k spins: distinct, with repeats, or forced to contain u0 and/or v0."""
    u0, v0 = G.endpoints(e0)
    modes = ["repeats", "endpoints"]
    if len(G.vertices) >= 2 * k:
        modes.append("distinct")
    mode = rng.choice(modes)
    if mode == "distinct":
        spins = rng.sample(G.vertices, 2 * k)
    else:
        spins = [rng.choice(G.vertices) for _ in range(2 * k)]
        if mode == "endpoints":
            which = rng.choice([(u0,), (v0,), (u0, v0)])
            for i, v in enumerate(which):
                spins[i] = v
            rng.shuffle(spins)
    return spins, mode


def _raise_chain(rng, t):
    """Componentwise larger couplings, some edges left unchanged."""
    from .corpus import random_rational
    out = {}
    for e, x in t.items():
        out[e] = x if rng.random() < 0.3 else x + (1 - x) * random_rational(rng)
    return out


def monotonicity_harness(seed: int, count: int, max_vertices: int = 7, max_edges: int = 10, max_k: int = 3) -> IsingReport:
    """Signs of u_2k and of its derivative in J_{u0v0}, plus monotonicity along t <= t' <= t''."""
    from .corpus import rng_for
    rng = rng_for(seed, "ursell-signs")
    rep = IsingReport("ursell signs")
    for i in range(count):
        G, t = _random_model(rng, max_vertices, max_edges)
        k = rng.randint(1, max_k)
        e0 = rng.choice(G.edge_ids)
        spins, mode = random_spins(rng, G, k, e0)
        sign = (-1) ** (k - 1)
        chain = [t, _raise_chain(rng, t)]
        chain.append(_raise_chain(rng, chain[-1]))
        model = Ising(G, t)
        d = model.ursell_derivative(spins, e0)
        vals = [sign * model.ursell(spins)] + [sign * Ising(G, tt).ursell(spins) for tt in chain[1:]]
        bad = []
        if sign * d < 0:
            bad.append(f"derivative sign {d}")
        if vals[0] < 0:
            bad.append(f"ursell sign {vals[0]}")
        if not vals[0] <= vals[1] <= vals[2]:
            bad.append(f"chain {vals}")
        if bad:
            rep.violations += 1
            rep.notes.append(f"instance {i} k={k} mode={mode} spins={spins} e0={e0}: " + "; ".join(bad))
        rep.instances += 1
    return rep


def derivative_fd_harness(seed: int, count: int, h: float = 1e-5, tol: float = 1e-7,
                          max_vertices: int = 6, max_edges: int = 8) -> IsingReport:
    from .corpus import random_graph, rng_for
    rng = rng_for(seed, "ursell-derivative-fd")
    rep = IsingReport("derivative vs finite difference")
    for i in range(count):
        nv = rng.randint(2, max_vertices)
        G = random_graph(rng, nv, rng.randint(1, min(max_edges, nv * (nv - 1) // 2)), connected_hint=True)
        J = {e: rng.uniform(0.05, 1.5) for e in G.edge_ids}
        k = rng.randint(1, 3)
        e0 = rng.choice(G.edge_ids)
        spins, _ = random_spins(rng, G, k, e0)
        exact = Ising(G, {e: math.tanh(x) for e, x in J.items()}).ursell_derivative(spins, e0)
        up, dn = dict(J), dict(J)
        up[e0] += h
        dn[e0] -= h
        fd = (Ising(G, {e: math.tanh(x) for e, x in up.items()}).ursell(spins)
              - Ising(G, {e: math.tanh(x) for e, x in dn.items()}).ursell(spins)) / (2 * h)
        err = abs(exact - fd)
        rep.worst = max(rep.worst, err)
        if err > tol:
            rep.violations += 1
            rep.notes.append(f"instance {i}: exact {exact!r} fd {fd!r}")
        rep.instances += 1
    return rep


def correlation_oracle_harness(seed: int, count: int, max_vertices: int = 10, max_edges: int = 14) -> IsingReport:
    from .corpus import rng_for
    rng = rng_for(seed, "correlation-oracle")
    rep = IsingReport("correlation vs spin enumeration")
    for i in range(count):
        G, t = _random_model(rng, max_vertices, max_edges, min_vertices=1 if max_vertices < 2 else 2)
        size = rng.randint(0, len(G.vertices))
        A = rng.sample(G.vertices, size)
        if correlation(G, t, A) != correlation_oracle(G, t, A):
            rep.violations += 1
            rep.notes.append(f"instance {i}: A={A}")
        rep.instances += 1
    return rep


def gadget_harness(seed: int, count: int, tol: float = 1e-10, max_vertices: int = 6) -> IsingReport:
    from .corpus import random_graph, rng_for
    rng = rng_for(seed, "gadget")
    rep = IsingReport("edge-splitting gadget")
    for i in range(count):
        nv = rng.randint(2, max_vertices)
        G = random_graph(rng, nv, rng.randint(1, nv * (nv - 1) // 2))
        J = {e: rng.uniform(0, 2) for e in G.edge_ids}
        e0 = rng.choice(G.edge_ids)
        gad = gadget_split(G, e0, J[e0])
        Jh = gad.couplings(J)
        A = rng.sample(G.vertices, rng.randint(0, nv))
        err = abs(correlation_float(G, J, A) - correlation_float(gad.graph, Jh, A))
        rep.worst = max(rep.worst, err)
        if err > tol:
            rep.violations += 1
            rep.notes.append(f"instance {i}: A={A} err={err:.3e}")
        rep.instances += 1
    return rep


def reduction_harness(seed: int, count: int, max_vertices: int = 5) -> IsingReport:
    from .corpus import rng_for
    rng = rng_for(seed, "ursell-reduction")
    rep = IsingReport("repeated-argument reduction")
    for i in range(count):
        G, t = _random_model(rng, max_vertices, 8)
        k = rng.randint(2, 3)
        rest = [rng.choice(G.vertices) for _ in range(2 * k - 2)]
        j = rng.choice(G.vertices)
        if not reduction_check(G, t, [j, j] + rest):
            rep.violations += 1
            rep.notes.append(f"instance {i}: spins={[j, j] + rest}")
        rep.instances += 1
    return rep


def cumulant_harness(seed: int, count: int, max_vertices: int = 4, max_r: int = 4) -> IsingReport:
    from .corpus import random_rational, rng_for
    rng = rng_for(seed, "cumulants")
    rep = IsingReport("cumulant vs Ursell tuple sum")
    for i in range(count):
        G, t = _random_model(rng, max_vertices, 6)
        lam = {v: random_rational(rng, upper=Fraction(2)) for v in G.vertices}
        r = rng.randint(1, max_r)
        if cumulant(G, t, lam, r) != cumulant_via_ursell(G, t, lam, r):
            rep.violations += 1
            rep.notes.append(f"instance {i}: r={r}")
        rep.instances += 1
    return rep
