import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ursell_lab.graphs import BaseGraph
from ursell_lab.ising import (
    CapError, Ising, correlation, correlation_float, correlation_oracle, cumulant, cumulant_via_ursell,
    gadget_split, reduction_check, split_coupling, ursell, ursell_derivative,
)

EDGE = BaseGraph.from_pairs([0, 1], [(0, 1)])
TRI = BaseGraph.from_pairs([1, 2, 3], [(1, 2), (1, 3), (2, 3)])
HALF = {0: F(1, 2), 1: F(1, 2), 2: F(1, 2)}


def test_correlation_examples():
    assert correlation(EDGE, {0: F(1, 3)}, [0, 1]) == F(1, 3)
    assert correlation_oracle(EDGE, {0: F(1, 3)}, [0, 1]) == F(1, 3)
    assert correlation(TRI, HALF, [1, 2]) == F(2, 3)
    assert correlation_oracle(TRI, HALF, [1, 2]) == F(2, 3)
    assert correlation(TRI, HALF, [1]) == 0


def test_correlation_factorizes_over_components():
    g = BaseGraph.from_pairs([0, 1, 2, 3], [(0, 1), (2, 3)])
    t = {0: F(1, 3), 1: F(2, 5)}
    assert correlation(g, t, [0, 2]) == 0
    assert correlation(g, t, [0, 1, 2, 3]) == F(1, 3) * F(2, 5)


def test_ursell_examples():
    assert ursell(TRI, HALF, [2, 2]).value == 1
    two = BaseGraph.from_pairs([1, 2, 3, 4], [(1, 2), (3, 4)])
    assert ursell(two, {0: F(1, 2), 1: F(1, 3)}, [1, 2, 3, 4]).value == 0
    assert ursell(EDGE, {0: F(1, 3)}, [0, 1]).value == F(1, 3)
    assert ursell(TRI, HALF, [1, 2, 3]).value == 0


def test_ursell_frozen_values():
    # frozen from the spin-enumeration route on the triangle
    assert ursell(TRI, HALF, [1, 2, 3, 1]).value == F(-8, 9)
    assert ursell_derivative(TRI, HALF, [1, 1, 2, 3], 0) == F(-28, 27)


def test_derivative_examples():
    assert ursell_derivative(EDGE, {0: F(1, 3)}, [0, 1], 0) == F(8, 9)
    g = BaseGraph.from_pairs([0, 1, 2, 3], [(0, 1), (2, 3)])
    assert ursell_derivative(g, {0: F(1, 3), 1: F(1, 2)}, [0, 1], 1) == 0


def test_cumulant_examples():
    free = BaseGraph((0,), ())
    assert cumulant(free, {}, {0: 1}, 2) == 1
    assert cumulant(free, {}, {0: 1}, 4) == -2
    assert cumulant(TRI, HALF, {1: 1, 2: 2}, 3) == 0


def test_reduction_examples():
    assert reduction_check(TRI, {0: F(1, 3), 1: F(2, 7), 2: F(1, 5)}, [1, 1, 2, 3])
    assert reduction_check(TRI, {0: 0, 1: 0, 2: 0}, [1, 1, 2, 3])
    five = BaseGraph.from_pairs(range(5), [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])
    t = {e: F(e + 1, 9) for e in five.edge_ids}
    assert reduction_check(five, t, [2, 2, 0, 1, 3, 4])
    with pytest.raises(ValueError):
        reduction_check(TRI, HALF, [1, 1])


def test_gadget_examples():
    assert split_coupling(0.0) == 0.0
    g = gadget_split(EDGE, 0, 1.0)
    assert abs(math.tanh(1.0) - math.tanh(g.beta_hat) ** 2) < 1e-12
    assert abs(correlation_float(EDGE, {0: 1.0}, [0, 1]) - correlation_float(g.graph, g.couplings({0: 1.0}), [0, 1])) < 1e-12


def test_caps_and_validation():
    with pytest.raises(ValueError):
        correlation(EDGE, {0: F(1)}, [0, 1])
    big = BaseGraph(tuple(range(17)), ())
    with pytest.raises(CapError):
        correlation_oracle(big, {}, [])


def test_odd_order_ursell_is_zero():
    assert ursell(TRI, HALF, [1]).value == 0


ts = st.fractions(min_value=0, max_value=F(9, 10), max_denominator=12)


@given(ts, ts, ts, st.sets(st.sampled_from([1, 2, 3])))
@settings(max_examples=60)
def test_expansion_matches_spin_sum(a, b, c, A):
    t = {0: a, 1: b, 2: c}
    assert correlation(TRI, t, A) == correlation_oracle(TRI, t, A)


@given(ts, ts, ts, st.lists(st.sampled_from([1, 2, 3]), min_size=2, max_size=4).filter(lambda s: len(s) % 2 == 0))
@settings(max_examples=60)
def test_signs_on_triangle(a, b, c, spins):
    t = {0: a, 1: b, 2: c}
    k = len(spins) // 2
    m = Ising(TRI, t)
    assert (-1) ** (k - 1) * m.ursell(spins) >= 0
    for e in TRI.edge_ids:
        assert (-1) ** (k - 1) * m.ursell_derivative(spins, e) >= 0


@given(ts, ts, st.integers(1, 4), st.fractions(0, 2, max_denominator=4), st.fractions(0, 2, max_denominator=4))
@settings(max_examples=30, deadline=None)
def test_cumulant_tuple_sum(a, b, r, l1, l2):
    g = BaseGraph.from_pairs([1, 2, 3], [(1, 2), (2, 3)])
    lam = {1: l1, 2: l2, 3: F(1)}
    t = {0: a, 1: b}
    assert cumulant(g, t, lam, r) == cumulant_via_ursell(g, t, lam, r)
