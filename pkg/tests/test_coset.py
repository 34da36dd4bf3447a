import numpy as np
import pytest

from algebra.coset import (
    CosetSpace,
    Side,
    build_graph,
    edge_orbit_size,
    group_order_from_edges,
    group_order_from_graph,
    right_transversal,
    vertex_key,
)
from algebra.errors import ConstructionError
from algebra.grp import intersect
from algebra.reference import cyclic
from algebra.psu import unpack


def test_toy_graph_structure(toy_graph):
    assert toy_graph.num_vertices == 7
    assert toy_graph.num_edges == 12
    assert toy_graph.side_counts == {Side.ONE: 4, Side.TWO: 3}
    assert toy_graph.degrees.tolist() == [3, 3, 3, 3, 4, 4, 4]
    edges = toy_graph.edge_array()
    assert (edges[:, 0] < edges[:, 1]).all()
    assert edges.tolist() == sorted(edges.tolist())


def test_toy_graph_ball_and_lookup(toy_graph):
    order, distance = toy_graph.ball(0, 1)
    assert order.tolist() == [0, 4, 5, 6]
    assert distance.tolist() == [0, 1, 1, 1]
    order, distance = toy_graph.ball(0, 2)
    assert sorted(order.tolist()) == list(range(7))
    assert toy_graph.lookup(Side.TWO, 5) == 5
    assert toy_graph.vertex(5).side is Side.TWO
    assert vertex_key(Side.ONE, 3) != vertex_key(Side.TWO, 3)


def test_biregularity_is_side_aware(toy_graph):
    # K_{4,3} has valency 3 on side one, so it is not (4,3)-biregular in our orientation
    assert not toy_graph.is_bipartite_biregular()


def test_right_transversal_sizes(construction):
    g = construction.groups
    assert len(right_transversal(g["K1"], g["K12"])) == 4
    assert len(right_transversal(g["K2"], g["K12"])) == 3


def test_canonical_coset_representative(construction):
    unitary = construction.unitary
    K1 = construction.groups["K1"]
    space = CosetSpace(unitary, K1, Side.ONE)
    D = construction.exact("D")
    base = space.canon(D)
    for k in K1.elements[:: max(1, K1.order // 12)]:
        moved = unitary.compose(unpack(k), D, projective=False)
        assert space.canon(moved) == base
    assert space.canon(unitary.identity) == space.canon(unpack(K1.elements[7]))
    assert space.canon(construction.exact("E")) != space.canon(unitary.identity)


def test_batched_canonicalisation_matches_single(construction):
    unitary = construction.unitary
    space = CosetSpace(unitary, construction.groups["K2"], Side.TWO)
    elements = [construction.exact("D"), construction.exact("D", "E"), construction.exact("A", "D", "sigma")]
    mats = np.asarray([g.mat for g in elements], dtype=np.uint8).reshape(-1, 3, 3)
    twists = np.asarray([g.twist for g in elements])
    assert space.canon_batched(mats, twists, threads=2).tolist() == [space.canon(g) for g in elements]


ROTATE_ONE = np.asarray([1, 2, 3, 0, 4, 5, 6])
ROTATE_TWO = np.asarray([0, 1, 2, 3, 5, 6, 4])


def test_edge_orbit_on_toy_graph(toy_graph):
    assert edge_orbit_size(toy_graph, [ROTATE_ONE, ROTATE_TWO], edge=(0, 4)) == 12
    assert edge_orbit_size(toy_graph, [ROTATE_ONE], edge=(0, 4)) == 4
    assert edge_orbit_size(toy_graph, [], edge=(0, 4)) == 1
    assert group_order_from_edges(toy_graph, [ROTATE_ONE, ROTATE_TWO], cyclic(1)) == 12


def test_edge_orbit_rejects_non_automorphisms(toy_graph):
    swap = np.asarray([4, 1, 2, 3, 0, 5, 6])
    with pytest.raises(ConstructionError):
        edge_orbit_size(toy_graph, [swap], edge=(0, 4))
    with pytest.raises(ConstructionError):
        edge_orbit_size(toy_graph, [ROTATE_ONE], edge=(0, 1))


def test_group_order_from_vertex_orbits(toy_graph):
    assert group_order_from_graph(toy_graph, cyclic(3), cyclic(4)) == 12
    with pytest.raises(ConstructionError):
        group_order_from_graph(toy_graph, cyclic(3), cyclic(3))


def test_bfs_stops_at_vertex_cap(construction):
    g = construction.groups
    with pytest.raises(ConstructionError, match="passed 100 vertices"):
        build_graph(construction.unitary, g["K1"], g["K2"], g["K12"], cap=100)


@pytest.mark.slow
def test_edge_stabilizers_have_order_324(construction):
    graph = construction.graph
    edges = graph.edge_array()
    rng = np.random.default_rng(7)
    picks = [0, *rng.choice(len(edges), size=12, replace=False).tolist()]
    for i in picks:
        u, v = (int(x) for x in edges[i])
        meet = intersect(construction.analysis.stabilizer(u, "K"), construction.analysis.stabilizer(v, "K"))
        assert meet.order == 324, (u, v)


@pytest.mark.slow
def test_bfs_ids_do_not_depend_on_threads(construction):
    g = construction.groups
    single = construction.graph
    threaded = build_graph(construction.unitary, g["K1"], g["K2"], g["K12"], threads=4)
    assert np.array_equal(single.sides, threaded.sides)
    assert np.array_equal(single.reps, threaded.reps)
    assert np.array_equal(single.edge_array(), threaded.edge_array())
