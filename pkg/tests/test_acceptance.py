"""The ten acceptance criteria, each at its stated tolerance and size.

Every test prints one PASS/FAIL line; conftest repeats them in the summary.
"""

import time

from ursell_lab import suites
from ursell_lab.suites import Config

SEED = 42


def _run(fn, cfg=None):
    t0 = time.perf_counter()
    res = fn(cfg or Config(seed=SEED))
    return res, time.perf_counter() - t0


def _detail(res, dt):
    return f"{res.instances} checks, {res.violations} violations, {dt:.2f}s"


def test_c01_paper_values(acceptance_line):
    res, dt = _run(suites.paper_values)
    ok = res.ok and dt < 1.0
    acceptance_line(1, ok, _detail(res, dt))
    assert res.ok, res.notes
    assert dt < 1.0


def test_c02_paper_partitions(acceptance_line):
    res, dt = _run(suites.paper_partitions)
    ok = res.ok and dt < 1.0
    acceptance_line(2, ok, _detail(res, dt))
    assert res.ok, res.notes
    assert dt < 1.0


def test_c03_oracle_equivalence(acceptance_line):
    # |E| <= 7 via |m| <= 7, k <= 3
    cfg = Config(seed=SEED, count=150, max_current=7)
    res, dt = _run(suites.oracle_equivalence, cfg)
    ok = res.ok and res.instances >= 100 and dt < 60
    acceptance_line(3, ok, _detail(res, dt))
    assert res.ok, res.notes
    assert res.instances >= 100 and dt < 60


def test_c04_reduction_laws(acceptance_line):
    cfg = Config(seed=SEED)
    parts = [_run(suites.self_loop_law, cfg), _run(suites.contraction_law, cfg), _run(suites.special_reduction, cfg)]
    ok = all(r.ok for r, _ in parts)
    detail = "; ".join(f"{r.name}: {r.violations}/{r.instances}" for r, _ in parts)
    acceptance_line(4, ok, detail)
    for r, _ in parts:
        assert r.ok, f"{r.name}: " + " | ".join(r.notes[:3])


def test_c05_switching_exhaustive(acceptance_line):
    res, dt = _run(suites.switching_exhaustive)
    ok = res.ok and dt < 60
    acceptance_line(5, ok, _detail(res, dt))
    assert res.ok, res.notes
    assert dt < 60


def test_c06_series_oracle(acceptance_line):
    res, dt = _run(suites.series_oracle, Config(seed=SEED, count=30))
    acceptance_line(6, res.ok, _detail(res, dt))
    assert res.ok, res.notes
    assert res.instances >= 20


def test_c07_ursell_signs(acceptance_line):
    res, dt = _run(suites.ursell_signs, Config(seed=SEED, count=500))
    ok = res.ok and res.instances == 500 and dt < 300
    acceptance_line(7, ok, _detail(res, dt))
    assert res.ok, res.notes
    assert dt < 300


def test_c08_derivative_fd(acceptance_line):
    res, dt = _run(suites.derivative_fd, Config(seed=SEED, count=50, tolerance=1e-7))
    acceptance_line(8, res.ok, _detail(res, dt) + " " + (res.notes[-1] if res.notes else ""))
    assert res.ok, res.notes


def test_c09_lee_yang_circle(acceptance_line):
    res, dt = _run(suites.lee_yang_circle, Config(seed=SEED, count=500, max_vertices=8, tolerance=1e-9))
    acceptance_line(9, res.ok, _detail(res, dt) + " " + (res.notes[-1] if res.notes else ""))
    assert res.ok, res.notes
    assert res.instances == 500


def test_c10_first_zero_monotonicity(acceptance_line):
    res, dt = _run(suites.first_zero_monotonicity, Config(seed=SEED, count=500, max_vertices=8, tolerance=1e-9))
    ok = res.ok and dt < 300
    acceptance_line(10, ok, _detail(res, dt))
    assert res.ok, res.notes
    assert dt < 300
