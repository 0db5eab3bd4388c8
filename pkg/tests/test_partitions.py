import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ursell_lab.corpus import random_current_instance, rng_for
from ursell_lab.graphs import GraphError, MultiGraph
from ursell_lab.partitions import (
    Family, RestrictionSet, I_p, N_L, R_current, R_graph, SpecialGraphSpec, add_self_loop,
    contract_pair, count_partitions, enumerate_partitions, even_partitions, make_special,
    reduce_self_loop, set_partitions,
)


def test_partition_counts():
    assert sum(1 for _ in set_partitions(range(4))) == 15
    assert sum(1 for _ in even_partitions(range(6))) == 31
    with pytest.raises(ValueError):
        list(even_partitions(range(3)))


@pytest.mark.parametrize("fam,k,want", [
    ("H", 2, -2), ("H", 3, 0), ("K_I", 1, 1), ("K_II", 1, 1),
    ("K_I", 2, 0), ("K_II", 2, 0), ("K_I", 3, 0), ("K_II", 3, 0),
])
def test_special_values(fam, k, want):
    assert R_graph(make_special(fam, k)) == want


def test_small_constants():
    assert [I_p(p) for p in range(1, 5)] == [1, 0, 0, 0]
    assert N_L(0, 0) == 1 and N_L(1, 0) == 0
    assert N_L(1, 1) == 1 and N_L(1, 2) == 2 and N_L(2, 2) == 8
    with pytest.raises(ValueError):
        I_p(0)


def test_h2_count():
    assert count_partitions(make_special("H", 2)) == (-2, 4)


def test_spec_validation():
    with pytest.raises(ValueError):
        SpecialGraphSpec(Family.H, 1)
    with pytest.raises(ValueError):
        SpecialGraphSpec(Family.K_I, 0)


def test_restriction_validation():
    with pytest.raises(ValueError):
        RestrictionSet.of(separate=[(1, 1)])


def test_non_admissible_gives_zero():
    g = MultiGraph((0, 1, 2, 3), ((0, 1, 2),), (1, 0), (2, 3))
    assert not g.admissible
    assert R_graph(g) == 0


def test_contract_needs_shared_free_vertex():
    g = make_special("H", 2)
    with pytest.raises(ValueError):
        contract_pair(g, g.label("j1j2"), g.label("j4v0"))
    with pytest.raises(ValueError):
        contract_pair(g, g.label("j1j2"), g.label("j1j3"))  # shares u0 only


def test_contraction_counterexample():
    """Smallest case where merging two edges at a degree-3 vertex changes R.

    u0=0, v0=2, sources {0,1}.  Every partition of g has u0 joined to v0
    through 0-1-2, so R(g) = 0.  Merging the two parallel 0-1 edges at 1
    leaves a loop at 0 that joins nothing, and R of the merged graph is 2.
    """
    g = MultiGraph((0, 1, 2), ((0, 1, 2), (1, 0, 1), (2, 0, 1)), (0, 2), (1, 0))
    gt, _ = contract_pair(g, 1, 2, at=1)
    together = sum(p.weight for p in enumerate_partitions(g, RestrictionSet.of(together=[(1, 2)])))
    assert R_graph(g) == 0
    assert together == 0
    assert R_graph(gt) == 2
    assert R_graph(g, RestrictionSet.of(separate=[(1, 2)])) == 0


def test_contraction_holds_at_degree_two():
    g = make_special("K_II", 2)
    # j1 (vertex 1) has j1u0 only; add a second source path through a degree-2 vertex
    g = MultiGraph(g.vertices + (9,), g.edges[:-1] + ((10, 3, 9), (11, 9, 4)), g.marked, g.sources)
    gt, _ = contract_pair(g, 10, 11, at=9)
    sep = R_graph(g, RestrictionSet.of(separate=[(10, 11)]))
    assert R_graph(g) == R_graph(gt) + sep


@st.composite
def instances(draw):
    seed = draw(st.integers(0, 10 ** 6))
    return random_current_instance(rng_for(seed, "hyp"), max_vertices=7, max_edges=5, max_current=6)


@given(instances())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_graph_and_current_routes_agree(inst):
    assert R_graph(inst.multigraph()) == R_current(inst.m, inst.sources, inst.marked)


@given(instances(), st.data())
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_self_loop_factor(inst, data):
    g = inst.multigraph()
    v = data.draw(st.sampled_from(g.vertices))
    h, lab = add_self_loop(g, v)
    assert R_graph(h) == (g.k + 1) * R_graph(g)
    assert reduce_self_loop(h, lab).edges == g.edges


@given(instances())
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_sign_of_R(inst):
    g = inst.multigraph()
    assert (-1) ** (g.k - 1) * R_graph(g) >= 0


def test_multigraph_rejects_marked_equal():
    with pytest.raises(GraphError):
        MultiGraph((0,), (), (0, 0), ())
