"""Partition function in the field variable, its zeros, and the first zero alpha_1.

With rational field weights lambda_u = a_u / q the substitution
zeta = exp(-2h/q) turns Z into a polynomial of degree D = sum a_u:
the coefficient c_j collects W(sigma) = exp(sum J s s) over the
configurations with sum_{sigma_u = -1} a_u = j.  A zero at h = i alpha
sits at arg zeta = -2 alpha / q.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .corpus import random_graph, rng_for
from .graphs import BaseGraph, _DSU
from .ising import cumulant
from .roots import aberth

J_MAX = 3.0
UNIT_CIRCLE_TOL = 1e-9


class LeeYangError(ValueError):
    pass


@dataclass(frozen=True)
class FieldPolynomial:
    """c_0..c_D in zeta, plus one factor per connected cluster of positive couplings."""

    coeffs: tuple[float, ...]
    q: int
    factors: tuple[tuple[float, ...], ...] = field(default=(), compare=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class ZeroSpectrum:
    roots: tuple[complex, ...]
    q: int

    @property
    def alphas(self) -> tuple[float, ...]:
        """(q/2)|arg zeta| for every root, sorted; conjugate roots give equal entries."""
        return tuple(sorted(self.q / 2 * abs(np.angle(z)) for z in self.roots))

    @property
    def principal(self) -> tuple[float, ...]:
        """One alpha per conjugate pair (upper half plane plus the real roots)."""
        return tuple(sorted(self.q / 2 * abs(np.angle(z)) for z in self.roots if z.imag > -1e-12))

    @property
    def alpha1(self) -> float:
        return min(self.alphas)

    def max_circle_error(self) -> float:
        return max((abs(abs(z) - 1) for z in self.roots), default=0.0)


def field_weights(G: BaseGraph, lam: Mapping[int, Fraction] | None) -> tuple[int, dict[int, int]]:
    """Common denominator q and integer weights a_u = q lambda_u."""
    if lam is None:
        lam = {v: 1 for v in G.vertices}
    fr = {}
    for v in G.vertices:
        x = lam.get(v, 0)
        if isinstance(x, float):
            raise LeeYangError("field weights must be rational (int, Fraction or 'p/q' string)")
        x = Fraction(x)
        if x < 0:
            raise LeeYangError("field weights must be nonnegative")
        fr[v] = x
    q = math.lcm(*(x.denominator for x in fr.values())) if fr else 1
    return q, {v: int(x * q) for v, x in fr.items()}


def _check_J(G: BaseGraph, J: Mapping[int, float]) -> None:
    for eid in G.edge_ids:
        x = J[eid]
        if not 0 <= x <= J_MAX:
            raise LeeYangError(f"J[{eid}] = {x} outside [0, {J_MAX}]")


def clusters(G: BaseGraph, J: Mapping[int, float]) -> list[list[int]]:
    """Vertex sets joined by edges of positive coupling."""
    dsu = _DSU()
    for v in G.vertices:
        dsu.find(v)
    for eid, u, v in G.edges:
        if J[eid] > 0:
            dsu.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in G.vertices:
        groups.setdefault(dsu.find(v), []).append(v)
    return sorted(groups.values())


def _coefficients(verts: list[int], edges, J, a: Mapping[int, int]) -> list[float]:
    """Coefficients for the spins in ``verts``; sigma and -sigma are added together so c is palindromic."""
    D = sum(a[v] for v in verts)
    c = [0.0] * (D + 1)
    if not verts:
        return [1.0]
    idx = {v: i for i, v in enumerate(verts)}
    es = [(J[eid], idx[u], idx[v]) for eid, u, v in edges if u in idx and v in idx]
    n = len(verts)
    for bits in range(1 << (n - 1)):
        # vertex 0 is up; the flipped configuration is handled in the same step
        s = [1] + [-1 if bits >> (i - 1) & 1 else 1 for i in range(1, n)]
        w = math.exp(sum(j * s[x] * s[y] for j, x, y in es))
        jdown = sum(a[verts[i]] for i in range(n) if s[i] < 0)
        c[jdown] += w
        c[D - jdown] += w
    return c


def partition_polynomial(G: BaseGraph, J: Mapping[int, float], lam: Mapping[int, Fraction] | None = None) -> FieldPolynomial:
    _check_J(G, J)
    q, a = field_weights(G, lam)
    full = _coefficients(list(G.vertices), G.edges, J, a)
    if any(x != y for x, y in zip(full, reversed(full))):
        raise AssertionError("field polynomial is not palindromic")
    factors = []
    for comp in clusters(G, J):
        if sum(a[v] for v in comp) == 0:
            continue
        factors.append(tuple(_coefficients(comp, G.edges, J, a)))
    return FieldPolynomial(tuple(full), q, tuple(factors))


def roots(p: FieldPolynomial, tol: float = UNIT_CIRCLE_TOL) -> ZeroSpectrum:
    """Roots of p, found factor by factor (clusters never share a polynomial factor by accident)."""
    if p.degree < 1:
        raise LeeYangError("polynomial has degree 0")
    factors = p.factors or (p.coeffs,)
    found: list[complex] = []
    for f in factors:
        if len(f) > 1:
            found.extend(complex(z) for z in aberth(f))
    spectrum = ZeroSpectrum(tuple(found), p.q)
    err = spectrum.max_circle_error()
    if err > tol:
        raise LeeYangError(f"root off the unit circle by {err:.3e}")
    return spectrum


def _first_zero(c: list[float] | tuple[float, ...], q: int) -> float:
    """First t > 0 with sum_j c_j cos(t (D - 2j) / q) = 0, by scan then bisection."""
    D = len(c) - 1
    freq = np.array([(D - 2 * j) / q for j in range(D + 1)])
    cs = np.asarray(c, dtype=float)

    def g(t):
        return float(np.dot(cs, np.cos(t * freq)))

    lam_max = D / q
    step = math.pi / (64 * lam_max)
    limit = math.pi * q / 2 + 2 * step
    t0, g0 = 0.0, g(0.0)
    while t0 < limit:
        t1 = t0 + step
        g1 = g(t1)
        if g1 == 0:
            return t1
        if (g0 > 0) != (g1 > 0):
            lo, hi = t0, t1
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                if (g(mid) > 0) == (g0 > 0):
                    lo = mid
                else:
                    hi = mid
            t = 0.5 * (lo + hi)
            # two Newton steps, kept inside the bracket
            for _ in range(2):
                dg = -float(np.dot(cs * freq, np.sin(t * freq)))
                if dg == 0:
                    break
                nt = t - g(t) / dg
                if not lo - 1e-12 <= nt <= hi + 1e-12:
                    break
                t = nt
            return t
        t0, g0 = t1, g1
    raise LeeYangError("no sign change found before the safety bound")


def alpha1_scan(G: BaseGraph, J: Mapping[int, float], lam: Mapping[int, Fraction] | None = None) -> float:
    """alpha_1 as the first zero of <exp(itX)>, taken cluster by cluster (Z factorizes)."""
    p = partition_polynomial(G, J, lam)
    if not p.factors:
        raise LeeYangError("all field weights vanish; there are no zeros")
    return min(_first_zero(f, p.q) for f in p.factors)


def two_spin_alpha1(J: float) -> float:
    return 0.5 * math.acos(-math.exp(-2 * J))


# ---------------------------------------------------------------- harnesses

@dataclass
class LYInstance:
    graph: BaseGraph
    J: dict[int, float]
    J_tilde: dict[int, float]
    lam: dict[int, Fraction]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.graph.vertices),
            "edges": [list(e) for e in self.graph.edges],
            "J": {str(k): v for k, v in self.J.items()},
            "J_tilde": {str(k): v for k, v in self.J_tilde.items()},
            "lambda": {str(k): str(v) for k, v in self.lam.items()},
        }


def random_ly_instance(rng: random.Random, max_vertices: int = 8, max_edges: int | None = None,
                       unit_field: bool | None = None) -> LYInstance:
    """Graph, ordered couplings J <= J~ (floats in [0, 3]) and rational lambda >= 0."""
    nv = rng.randint(1, max_vertices)
    full = nv * (nv - 1) // 2
    ne = rng.randint(0, full if max_edges is None else min(full, max_edges))
    G = random_graph(rng, nv, ne)
    J = {}
    Jt = {}
    for eid in G.edge_ids:
        x = 0.0 if rng.random() < 0.1 else rng.uniform(0, J_MAX)
        J[eid] = x
        Jt[eid] = x if rng.random() < 0.3 else rng.uniform(x, J_MAX)
    if unit_field is None:
        unit_field = rng.random() < 0.3
    if unit_field:
        lam = {v: Fraction(1) for v in G.vertices}
    else:
        q = rng.randint(1, 4)
        lam = {v: Fraction(rng.randint(0, 4), q) for v in G.vertices}
        if not any(lam.values()):
            lam[rng.choice(G.vertices)] = Fraction(1, q)
    return LYInstance(G, J, Jt, lam)


@dataclass
class HarnessReport:
    name: str
    instances: int = 0
    violations: int = 0
    worst: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def unit_circle_harness(seed: int, count: int, max_vertices: int = 8, tol: float = UNIT_CIRCLE_TOL) -> HarnessReport:
    rng = rng_for(seed, "lee-yang-circle")
    rep = HarnessReport("lee-yang circle")
    for i in range(count):
        inst = random_ly_instance(rng, max_vertices)
        for J in (inst.J, inst.J_tilde):
            p = partition_polynomial(inst.graph, J, inst.lam)
            spectrum = roots(p, tol=math.inf)
            err = spectrum.max_circle_error()
            rep.worst = max(rep.worst, err)
            if err > tol:
                rep.violations += 1
                rep.notes.append(f"instance {i}: |z| off by {err:.3e}")
        rep.instances += 1
    return rep


def alpha1_monotonicity_harness(seed: int, count: int, max_vertices: int = 8, tol: float = 1e-9,
                                agree_tol: float = 1e-9) -> HarnessReport:
    """alpha_1(J) >= alpha_1(J~) - tol for J <= J~; also scan vs spectrum agreement."""
    rng = rng_for(seed, "lee-yang-monotone")
    rep = HarnessReport("first-zero monotonicity")
    disagree = 0
    for i in range(count):
        inst = random_ly_instance(rng, max_vertices, unit_field=(i % 5 == 0) or None)
        a = alpha1_scan(inst.graph, inst.J, inst.lam)
        b = alpha1_scan(inst.graph, inst.J_tilde, inst.lam)
        rep.worst = max(rep.worst, b - a)
        if a < b - tol:
            rep.violations += 1
            rep.notes.append(json.dumps({"instance": i, "alpha1": a, "alpha1_tilde": b, **inst.to_json()}))
        spec_a = roots(partition_polynomial(inst.graph, inst.J, inst.lam), tol=math.inf).alpha1
        if abs(spec_a - a) > agree_tol:
            disagree += 1
        rep.instances += 1
    if disagree:
        rep.notes.append(f"scan and spectrum disagree beyond {agree_tol} on {disagree} instances")
    return rep


def principal_zero_explorer(seed: int, count: int, max_vertices: int = 6, delta: float = 0.25,
                            out=None) -> list[dict]:
    """Look for a higher zero alpha_j (j >= 2) that grows when one coupling grows.

    Exploratory only.  Every hit is returned (and written as a JSON line to
    ``out`` if given) with the data needed to replay it.
    """
    rng = rng_for(seed, "principal-zeros")
    hits = []
    for i in range(count):
        inst = random_ly_instance(rng, max_vertices, unit_field=True)
        if not inst.graph.edges:
            continue
        eid = rng.choice(inst.graph.edge_ids)
        J2 = dict(inst.J)
        J2[eid] = min(J_MAX, J2[eid] + delta)
        if J2[eid] == inst.J[eid]:
            continue
        before = roots(partition_polynomial(inst.graph, inst.J, inst.lam), tol=math.inf).principal
        after = roots(partition_polynomial(inst.graph, J2, inst.lam), tol=math.inf).principal
        for j, (x, y) in enumerate(zip(before, after), start=1):
            if j >= 2 and y > x + 1e-9:
                rec = {"instance": i, "edge": eid, "index": j, "alpha_before": x, "alpha_after": y,
                       "J_after": {str(k): v for k, v in J2.items()}, **inst.to_json()}
                hits.append(rec)
                if out is not None:
                    out.write(json.dumps(rec, sort_keys=True) + "\n")
                break
    return hits


def cumulant_radius_diagnostic(G: BaseGraph, t: Mapping[int, Fraction], lam: Mapping[int, Fraction], K: int) -> dict:
    """|u_k(X)/k!|^(1/k) for even k <= K next to 1/alpha_1; no assertion."""
    if K % 2 or K > 12 or K < 2:
        raise ValueError("K must be even and at most 12")
    J = {e: math.atanh(float(x)) for e, x in t.items()}
    alpha1 = alpha1_scan(G, J, lam)
    seq = []
    for k in range(2, K + 1, 2):
        u = cumulant(G, t, lam, k)
        seq.append((k, u, abs(float(u) / math.factorial(k)) ** (1 / k)))
    return {"alpha1": alpha1, "inverse_alpha1": 1 / alpha1, "sequence": seq}
