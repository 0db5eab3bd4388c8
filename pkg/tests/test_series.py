from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ursell_lab.graphs import BaseGraph, Current
from ursell_lab.partitions import make_special
from ursell_lab.series import SeriesError, TruncatedSeries, lemma_u2krcr_check, realize, source_series

E = (0,)


def x(cap=4):
    return TruncatedSeries.variable(E, (cap,), 0)


def test_ring_examples():
    one = TruncatedSeries.constant(E, (4,))
    assert (one + x()) * (one - x()) == one - x() * x()
    geo = (one - x()).inverse()
    assert geo.coef == {(i,): F(1) for i in range(5)}
    with pytest.raises(SeriesError):
        x().inverse()
    assert (one + x()) ** 3 == TruncatedSeries(E, (4,), {(0,): 1, (1,): 3, (2,): 3, (3,): 1})


def test_source_series_examples():
    single = BaseGraph.from_pairs([0, 1], [(0, 1)])
    assert source_series(single, (), {0: 0}).coef == {(0,): F(1)}
    assert source_series(single, {0, 1}, {0: 3}).coef == {(1,): F(1), (3,): F(1, 6)}
    assert source_series(single, (), {0: 4}).coef == {(0,): F(1), (2,): F(1, 2), (4,): F(1, 24)}


@pytest.mark.parametrize("fam,k,L", [("K_I", 1, 0), ("K_II", 1, 0), ("H", 2, 0), ("H", 2, 1), ("K_I", 2, 1), ("H", 3, 0)])
def test_lemma_on_special_graphs(fam, k, L):
    g = make_special(fam, k, L)
    G, m = realize(g)
    ok, lhs, rhs = lemma_u2krcr_check(G, g.sources, g.marked, m, detail=True)
    assert ok


def test_lemma_frozen_coefficients():
    g = make_special("H", 2)
    G, m = realize(g)
    assert lemma_u2krcr_check(G, g.sources, g.marked, m, detail=True)[1] == -2
    g = make_special("K_I", 1)
    G, m = realize(g)
    assert lemma_u2krcr_check(G, g.sources, g.marked, m, detail=True)[1] == 1


def test_lemma_wrong_boundary_is_vacuous():
    g = make_special("H", 2)
    G, m = realize(g)
    bad = Current(G, {**m.values, 0: 1})  # one unit on u0v0 flips both ends
    ok, lhs, rhs = lemma_u2krcr_check(G, g.sources, g.marked, bad, detail=True)
    assert ok and lhs == 0 and rhs == 0


def test_lemma_rejects_bad_sources():
    g = make_special("H", 2)
    G, m = realize(g)
    with pytest.raises(ValueError):
        lemma_u2krcr_check(G, (1, 1, 2, 3), g.marked, m)
    with pytest.raises(ValueError):
        lemma_u2krcr_check(G, (0, 2), g.marked, m)


coeffs = st.lists(st.fractions(-3, 3, max_denominator=5), min_size=9, max_size=9)


def mk(cs):
    return TruncatedSeries((0, 1), (2, 2), {(i // 3, i % 3): c for i, c in enumerate(cs)})


@given(coeffs, coeffs)
@settings(max_examples=40, deadline=None)
def test_division_round_trip(a, b):
    s, t = mk(a), mk(b)
    if t.const == 0:
        t = t + 1
    assert (s * t) / t == s


@given(coeffs, coeffs, coeffs)
@settings(max_examples=30, deadline=None)
def test_mul_is_associative_and_distributive(a, b, c):
    s, t, u = mk(a), mk(b), mk(c)
    assert (s * t) * u == s * (t * u)
    assert s * (t + u) == s * t + s * u
