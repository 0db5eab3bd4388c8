"""Verification suites behind ``ursell-lab verify``.

Each suite returns a :class:`SuiteResult`.  Results carry no timings so the
JSON report is byte-identical for a fixed configuration; wall time is only
shown in the console table.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Callable

from . import ising, leeyang
from .corpus import current_corpus
from .graphs import BaseGraph, Current, boundary, boundary_weight_table, switching_check
from .io import fmt_float
from .partitions import (
    Family, RestrictionSet, I_p, N_L, R_current, R_graph, add_self_loop, contract_pair,
    enumerate_partitions, make_special, reduce_self_loop, sign_scan,
)
from .series import lemma_u2krcr_check, realize


@dataclass
class Config:
    seed: int = 42
    count: int | None = None  # overrides every random-suite size when set
    max_vertices: int = 8
    max_edges: int = 6
    max_current: int = 7
    tolerance: float | None = None  # overrides the float tolerances when set

    def n(self, default: int) -> int:
        return default if self.count is None else self.count

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance


@dataclass
class SuiteResult:
    name: str
    criterion: str
    instances: int = 0
    violations: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def fail(self, note: str, keep: int = 20) -> None:
        self.violations += 1
        if len(self.notes) < keep:
            self.notes.append(note)

    def as_dict(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "instances": self.instances,
                "violations": self.violations, "notes": self.notes}


# ---------------------------------------------------------------- fixed paper values

PAPER_R = [
    ("H", 2, -2), ("H", 3, 0),
    ("K_I", 1, 1), ("K_II", 1, 1),
    ("K_I", 2, 0), ("K_II", 2, 0), ("K_I", 3, 0), ("K_II", 3, 0),
]
PAPER_I = {1: 1, 2: 0, 3: 0, 4: 0}

H2_PARTITIONS = {
    "E1={j1j2,j1j3,j4v0} E2={} E3={} n=1",
    "E1={j1j2} E2={j1j3,j4v0} E3={} n=2",
    "E1={j1j3} E2={j1j2,j4v0} E3={} n=2",
    "E1={j1j2,j1j3} E2={j4v0} E3={} n=2",
}
H21_RESTRICTED = {"E1={j1j2,j1j3,j4v0} E2={} E3={e1,e2} n=1"}
K2_HAT_RESTRICTED = {
    "E1={j2v0,j3j4} E2={j1j1} E3={} n=1",
    "E1={j2v0,j3j4} E2={} E3={j1j1} n=1",
    "E1={j3j4} E2={j2v0} E3={j1j1} n=2",
}


def paper_values(cfg: Config) -> SuiteResult:
    res = SuiteResult("paper values", "1")
    for fam, k, want in PAPER_R:
        got = R_graph(make_special(fam, k))
        res.instances += 1
        if got != want:
            res.fail(f"R({fam}_{k}) = {got}, expected {want}")
    for p, want in PAPER_I.items():
        res.instances += 1
        if I_p(p) != want:
            res.fail(f"I_{p} = {I_p(p)}, expected {want}")
    return res


def h21_restricted():
    g = make_special("H", 2, 1)
    r = RestrictionSet.of(separate=[(g.label("e1"), g.label("j1j2")), (g.label("e2"), g.label("j1j3"))])
    return g, r


def k2_hat_restricted():
    g, loop = add_self_loop(make_special("K_I", 2), 1, "j1j1")
    r = RestrictionSet.of(separate=[(loop, g.label("j2v0")), (loop, g.label("j3j4"))])
    return g, r


def h2_mixed_restricted():
    g = make_special("H", 2)
    r = RestrictionSet.of(separate=[(g.label("j1j2"), g.label("j1j3"))],
                          together=[(g.label("j1j2"), g.label("j4v0"))])
    return g, r


def paper_partitions(cfg: Config) -> SuiteResult:
    res = SuiteResult("paper partition lists", "2")
    g = make_special("H", 2)
    cases = [("H2", g, RestrictionSet(()), H2_PARTITIONS)]
    cases.append(("H21 restricted",) + h21_restricted() + (H21_RESTRICTED,))
    cases.append(("K2hat restricted",) + k2_hat_restricted() + (K2_HAT_RESTRICTED,))
    for name, graph, restr, want in cases:
        got = {p.describe(graph) for p in enumerate_partitions(graph, restr)}
        res.instances += 1
        if got != want:
            res.fail(f"{name}: got {sorted(got)}")
    for name, (graph, restr), want in [("H21", h21_restricted(), -1), ("K2hat", k2_hat_restricted(), -1),
                                       ("H2 mixed", h2_mixed_restricted(), 1)]:
        val = (-1) ** (graph.k - 1) * R_graph(graph, restr)
        res.instances += 1
        if val != want:
            res.fail(f"{name}: (-1)^(k-1) R = {val}, expected {want}")
    return res


# ---------------------------------------------------------------- corpus suites

def oracle_equivalence(cfg: Config) -> SuiteResult:
    res = SuiteResult("R_graph = R_current", "3")
    for inst in current_corpus(cfg.seed, cfg.n(150), max_vertices=cfg.max_vertices,
                               max_edges=cfg.max_edges, max_current=cfg.max_current):
        a = R_graph(inst.multigraph())
        b = R_current(inst.m, inst.sources, inst.marked)
        res.instances += 1
        if a != b:
            res.fail(f"m={inst.m.as_tuple()} on {inst.base.edges}: graph {a}, current {b}")
    return res


def _reduction_corpus(cfg: Config):
    return [inst.multigraph() for inst in current_corpus(cfg.seed + 1, cfg.n(60), max_vertices=cfg.max_vertices,
                                                         max_edges=cfg.max_edges,
                                                         max_current=min(cfg.max_current, 6))]


def self_loop_law(cfg: Config) -> SuiteResult:
    res = SuiteResult("self-loop law", "4")
    for g in _reduction_corpus(cfg):
        base = R_graph(g)
        for v in g.vertices:
            h, lab = add_self_loop(g, v)
            res.instances += 1
            if R_graph(h) != (g.k + 1) * base or R_graph(reduce_self_loop(h, lab)) != base:
                res.fail(f"loop at {v} on {g.edges}")
    return res


def contraction_pairs(g):
    """Pairs of distinct non-loop edges sharing an endpoint outside {u0, v0}."""
    for v in g.vertices:
        if v in g.marked:
            continue
        inc = [lab for lab, a, b in g.edges if a != b and v in (a, b)]
        for e1, e2 in itertools.combinations(inc, 2):
            yield v, e1, e2


def contraction_law(cfg: Config, degree: int | None = None) -> SuiteResult:
    """R(g) = R(contracted) + R(g; {e1,e2} separate) on every contractible pair.

    ``degree`` restricts to pairs whose shared vertex has exactly that degree.
    """
    label = "contraction law" + ("" if degree is None else f" (deg {degree})")
    res = SuiteResult(label, "4")
    for g in _reduction_corpus(cfg):
        r = R_graph(g)
        for v, e1, e2 in contraction_pairs(g):
            if degree is not None and g.degree(v) != degree:
                continue
            gt, _ = contract_pair(g, e1, e2, at=v)
            sep = R_graph(g, RestrictionSet.of(separate=[(e1, e2)]))
            rt = R_graph(gt)
            res.instances += 1
            if r != rt + sep:
                res.fail(f"edges {g.edges} sources {g.sources} marked {g.marked} e1={e1} e2={e2} v={v} "
                         f"deg={g.degree(v)}: R={r} R(contracted)={rt} R(separate)={sep}")
    return res


def special_reduction(cfg: Config) -> SuiteResult:
    res = SuiteResult("special graphs R(G_kL) = N(L) R(G_k)", "4")
    for fam in Family:
        for k in range(2 if fam is Family.H else 1, 4):
            r0 = R_graph(make_special(fam, k, 0))
            for L in range(0, 3):
                res.instances += 1
                got = R_graph(make_special(fam, k, L))
                if got != N_L(L, k - 1) * r0:
                    res.fail(f"{fam.value} k={k} L={L}: {got} vs N={N_L(L, k - 1)} * {r0}")
    return res


def sign_of_R(cfg: Config) -> SuiteResult:
    """(-1)^(k-1) R >= 0 on the corpus, also with one SEPARATE pair."""
    res = SuiteResult("sign of R", "-")
    items = []
    for g in _reduction_corpus(cfg):
        items.append(g)
        for _, e1, e2 in itertools.islice(contraction_pairs(g), 3):
            items.append((g, RestrictionSet.of(separate=[(e1, e2)])))
    rep = sign_scan(items)
    res.instances = rep.instances
    for v in rep.violations[:20]:
        res.fail(f"{v['graph'].edges}: R={v['R']}")
    res.violations = len(rep.violations)
    return res


def simple_graphs(max_vertices: int = 4, max_edges: int = 5):
    for nv in range(2, max_vertices + 1):
        pairs = list(itertools.combinations(range(nv), 2))
        for ne in range(1, max_edges + 1):
            for chosen in itertools.combinations(pairs, ne):
                yield BaseGraph.from_pairs(range(nv), chosen)


def currents_upto(G: BaseGraph, total: int):
    eids = G.edge_ids
    for combo in itertools.product(range(total + 1), repeat=len(eids)):
        if sum(combo) <= total:
            yield Current(G, dict(zip(eids, combo)))


def switching_exhaustive(cfg: Config) -> SuiteResult:
    res = SuiteResult("switching lemma (exhaustive)", "5")
    for G in simple_graphs(4, 5):
        for m in currents_upto(G, 6):
            table = boundary_weight_table(m)
            dm = boundary(m)
            for u, v in itertools.combinations_with_replacement(G.vertices, 2):
                A = dm ^ (frozenset((u, v)) if u != v else frozenset())
                res.instances += 1
                if not switching_check(m, A, u, v, table):
                    res.fail(f"G={G.edges} m={m.as_tuple()} A={sorted(A)} u={u} v={v}")
    return res


def series_oracle(cfg: Config) -> SuiteResult:
    res = SuiteResult("series oracle", "6")
    for fam in Family:
        for k in range(2 if fam is Family.H else 1, 6):
            for L in range(0, 3):
                g = make_special(fam, k, L)
                if len(g.edges) > 5:
                    continue
                G, m = realize(g)
                res.instances += 1
                if not lemma_u2krcr_check(G, g.sources, g.marked, m):
                    res.fail(f"{fam.value} k={k} L={L}")
    for inst in current_corpus(cfg.seed + 2, cfg.n(30), max_vertices=min(cfg.max_vertices, 7),
                               max_edges=min(cfg.max_edges, 5), max_current=5):
        res.instances += 1
        if not lemma_u2krcr_check(inst.base, inst.sources, inst.marked, inst.m):
            res.fail(f"m={inst.m.as_tuple()} on {inst.base.edges} sources {inst.sources} marked {inst.marked}")
    return res


# ---------------------------------------------------------------- Ising and Lee-Yang suites

def _wrap(rep, criterion: str) -> SuiteResult:
    res = SuiteResult(rep.name, criterion, rep.instances, rep.violations, list(rep.notes[:20]))
    if getattr(rep, "worst", 0):
        res.notes.append(f"worst deviation {fmt_float(rep.worst)}")
    return res


def ursell_signs(cfg: Config) -> SuiteResult:
    return _wrap(ising.monotonicity_harness(cfg.seed, cfg.n(500), max_vertices=min(cfg.max_vertices, 7)), "7")


def derivative_fd(cfg: Config) -> SuiteResult:
    return _wrap(ising.derivative_fd_harness(cfg.seed, cfg.n(50), tol=cfg.tol(1e-7)), "8")


def correlation_oracle(cfg: Config) -> SuiteResult:
    return _wrap(ising.correlation_oracle_harness(cfg.seed, cfg.n(100)), "-")


def gadget(cfg: Config) -> SuiteResult:
    return _wrap(ising.gadget_harness(cfg.seed, cfg.n(100), tol=cfg.tol(1e-10)), "-")


def reduction_formula(cfg: Config) -> SuiteResult:
    return _wrap(ising.reduction_harness(cfg.seed, cfg.n(100)), "-")


def cumulant_identity(cfg: Config) -> SuiteResult:
    return _wrap(ising.cumulant_harness(cfg.seed, cfg.n(60)), "-")


def lee_yang_circle(cfg: Config) -> SuiteResult:
    return _wrap(leeyang.unit_circle_harness(cfg.seed, cfg.n(500), max_vertices=min(cfg.max_vertices, 8),
                                             tol=cfg.tol(1e-9)), "9")


def first_zero_monotonicity(cfg: Config) -> SuiteResult:
    tol = cfg.tol(1e-9)
    res = _wrap(leeyang.alpha1_monotonicity_harness(cfg.seed, cfg.n(500), max_vertices=min(cfg.max_vertices, 8),
                                                    tol=tol), "10")
    # the scan/spectrum disagreement note is informational, not a violation
    two = BaseGraph.from_pairs([0, 1], [(0, 1)])
    worst = 0.0
    for i in range(61):
        J = 3.0 * i / 60
        err = abs(leeyang.alpha1_scan(two, {0: J}) - leeyang.two_spin_alpha1(J))
        worst = max(worst, err)
        res.instances += 1
        if err > min(tol, 1e-12):
            res.fail(f"two spins J={fmt_float(J)}: off by {err:.3e}")
    res.notes.append(f"two-spin closed form worst {fmt_float(worst)}")
    return res


SUITES: list[tuple[str, Callable[[Config], SuiteResult]]] = [
    ("paper-values", paper_values),
    ("paper-partitions", paper_partitions),
    ("oracle-equivalence", oracle_equivalence),
    ("self-loop", self_loop_law),
    ("contraction", contraction_law),
    ("contraction-deg2", lambda cfg: contraction_law(cfg, degree=2)),
    ("special-reduction", special_reduction),
    ("sign-of-R", sign_of_R),
    ("switching", switching_exhaustive),
    ("series-oracle", series_oracle),
    ("ursell-signs", ursell_signs),
    ("derivative-fd", derivative_fd),
    ("correlation-oracle", correlation_oracle),
    ("gadget", gadget),
    ("reduction-formula", reduction_formula),
    ("cumulants", cumulant_identity),
    ("lee-yang-circle", lee_yang_circle),
    ("first-zero", first_zero_monotonicity),
]


def run_all(cfg: Config, only: list[str] | None = None, echo=None) -> list[tuple[str, SuiteResult, float]]:
    out = []
    for key, fn in SUITES:
        if only and key not in only:
            continue
        t0 = time.perf_counter()
        res = fn(cfg)
        dt = time.perf_counter() - t0
        out.append((key, res, dt))
        if echo:
            echo(key, res, dt)
    return out


def report_json(cfg: Config, results) -> str:
    body = {
        "config": {"seed": cfg.seed, "count": cfg.count, "max_vertices": cfg.max_vertices,
                   "max_edges": cfg.max_edges, "max_current": cfg.max_current, "tolerance": cfg.tolerance},
        "suites": [dict(key=key, **res.as_dict()) for key, res, _ in results],
        "violations": sum(res.violations for _, res, _ in results),
    }
    return json.dumps(body, indent=2, sort_keys=True) + "\n"
