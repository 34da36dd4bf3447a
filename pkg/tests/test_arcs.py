import pytest

from algebra.arcs import OrbitSummary, UnionFind, enumerate_arcs
from algebra.coset import Side


def test_union_find_classes():
    uf = UnionFind(6)
    uf.union(0, 3)
    uf.union(3, 5)
    uf.union(1, 2)
    assert uf.find(5) == uf.find(0)
    assert uf.classes() == [[0, 3, 5], [1, 2], [4]]


def test_arc_enumeration_on_toy_graph(toy_graph):
    assert enumerate_arcs(toy_graph, 0, 0) == [(0,)]
    assert len(enumerate_arcs(toy_graph, 0, 1)) == 3
    assert len(enumerate_arcs(toy_graph, 0, 2)) == 9
    assert len(enumerate_arcs(toy_graph, 0, 3)) == 18
    for arc in enumerate_arcs(toy_graph, 4, 3):
        assert all(arc[i - 1] != arc[i + 1] for i in range(1, len(arc) - 1))


def test_orbit_summary_text():
    summary = OrbitSummary(vertex=1, s=5, group="K", arcs=108, sizes=[108])
    assert summary.transitive
    assert summary.describe() == "orbits: 1, size 108"


@pytest.mark.slow
def test_arc_orbits_at_base_vertices(construction):
    analysis = construction.analysis
    assert analysis.arc_orbits(1, 5, "K").describe() == "orbits: 1, size 108"
    assert analysis.arc_orbits(0, 5, "K").sizes == [144]
    assert analysis.arc_orbits(1, 6, "K").sizes == [324]
    assert analysis.arc_orbits(1, 6, "H").transitive
    assert analysis.max_local_s("K") == 5
    assert analysis.max_local_s("H") == 5


@pytest.mark.slow
def test_kernel_chain_of_k(construction):
    orders = [G.order for G in construction.analysis.kernel_chain(0, "K")]
    assert orders == [1296, 54, 27, 3, 3, 1]
    orders = [G.order for G in construction.analysis.kernel_chain(1, "K")]
    assert orders == [972, 162, 9, 9, 1]


@pytest.mark.slow
def test_local_action_agrees_with_direct_kernel(construction):
    analysis = construction.analysis
    for v in (0, 1):
        for group in ("H", "K"):
            assert analysis.direct_kernel_one(v, group).same_elements(analysis.kernel(v, 1, group))


@pytest.mark.slow
def test_base_arc_is_a_path(construction):
    arc = construction.base_arc
    graph = construction.graph
    names = ["x-1", "x0", "x1", "x2", "x3", "x4"]
    for a, b in zip(names, names[1:]):
        assert arc[b] in graph.neighbors(arc[a]).tolist()
    assert graph.vertex(arc["x-1"]).side is Side.ONE
    assert graph.vertex(arc["x4"]).side is Side.TWO
    assert len(set(arc.values())) == 6
