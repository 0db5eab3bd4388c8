from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ursell_lab.graphs import (
    BaseGraph, Current, GraphError, MultiGraph, boundary, boundary_weight_table, connected,
    current_weight, sub_currents, switching_check,
)

PATH = BaseGraph.from_pairs([0, 1, 2], [(1, 2), (2, 0)])  # j1 - u0 - v0 with j1=1, u0=2, v0=0


def test_boundary_examples():
    assert boundary(Current.zero(PATH)) == frozenset()
    single = BaseGraph.from_pairs([0, 1], [(0, 1)])
    assert boundary(Current(single, {0: 1})) == {0, 1}
    assert boundary(Current(PATH, {0: 1, 1: 1})) == {1, 0}


def test_multigraph_loop_never_changes_boundary():
    g = MultiGraph((0, 1), ((0, 0, 1), (1, 1, 1)), (0, 1), ())
    assert boundary(g) == {0, 1}
    assert boundary(g, [1]) == frozenset()


def test_connected_examples():
    empty = Current.zero(PATH)
    assert connected(1, 1, empty)
    assert not connected(1, 0, empty)
    assert connected(1, 0, Current(PATH, {0: 1, 1: 1}))
    assert not connected(1, 0, Current(PATH, {0: 1, 1: 0}))


def test_current_weight_examples():
    single = BaseGraph.from_pairs([0, 1], [(0, 1)])
    assert current_weight(Current.zero(single), {0: Fraction(1, 2)}) == 1
    assert current_weight(Current(single, {0: 2}), {0: Fraction(1, 2)}) == Fraction(1, 8)
    assert current_weight(Current(single, {0: 3}), {0: 0}) == 0


def test_sub_current_examples():
    single = BaseGraph.from_pairs([0, 1], [(0, 1)])
    assert [(n.as_tuple(), w) for n, w in sub_currents(Current.zero(single), ())] == [((0,), 1)]
    assert [(n.as_tuple(), w) for n, w in sub_currents(Current(single, {0: 1}), {0, 1})] == [((1,), 1)]
    items = [(n.as_tuple(), w) for n, w in sub_currents(Current(single, {0: 2}), ())]
    assert items == [((0,), 1), ((2,), 1)]


def test_switching_examples():
    single = BaseGraph.from_pairs([0, 1], [(0, 1)])
    assert switching_check(Current(single, {0: 1}), (), 0, 1)
    two_parts = BaseGraph.from_pairs([0, 1, 2, 3], [(0, 1), (2, 3)])
    m = Current(two_parts, {0: 1, 1: 1})
    # u=0, v=2 sit in different clusters of m; dm = {0,1,2,3} != {0,2}, so vacuous
    assert switching_check(m, (), 0, 2)
    m = Current(two_parts, {0: 0, 1: 2})
    assert boundary_weight_table(m)[frozenset()] == 2


def test_validation():
    with pytest.raises(GraphError):
        BaseGraph.from_pairs([0, 1], [(0, 0)])
    with pytest.raises(GraphError):
        Current(PATH, {0: -1})
    with pytest.raises(GraphError):
        Current(PATH, {7: 1})
    with pytest.raises(GraphError):
        MultiGraph((0, 1, 2), (), (0, 1), (1, 2))  # v0 = 1 among the sources
    with pytest.raises(GraphError):
        MultiGraph((0, 1, 2), (), (0, 1), (2,))


K4 = BaseGraph.from_pairs(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
currents = st.lists(st.integers(0, 3), min_size=6, max_size=6).map(lambda xs: Current(K4, dict(enumerate(xs))))


@given(currents, currents)
def test_boundary_is_additive(a, b):
    assert boundary(a + b) == boundary(a) ^ boundary(b)


@given(currents)
@settings(max_examples=50)
def test_binomial_completeness(m):
    assert sum(boundary_weight_table(m).values()) == 2 ** m.total


@given(currents, st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=60)
def test_switching_random(m, u, v):
    A = boundary(m) ^ (frozenset((u, v)) if u != v else frozenset())
    assert switching_check(m, A, u, v)


@given(currents, st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_connected_is_equivalence(m, a, b, c):
    assert connected(a, b, m) == connected(b, a, m)
    if connected(a, b, m) and connected(b, c, m):
        assert connected(a, c, m)
