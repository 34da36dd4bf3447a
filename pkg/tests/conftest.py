import networkx as nx
import numpy as np
import pytest

from algebra.coset import CosetGraph, Side
from algebra.gf64 import CONWAY_MODULUS, GF64
from algebra.psu import SemilinearUnitaryGroup, make_generators
from algebra.reference import reference_groups
from cache.storage import GraphStorage
from services.construction import Construction


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: needs the full 59,584-vertex coset graph")


@pytest.fixture(scope="session")
def field():
    return GF64()


@pytest.fixture(scope="session")
def unitary(field):
    return SemilinearUnitaryGroup(field)


@pytest.fixture(scope="session")
def generators(unitary):
    return make_generators(unitary)


@pytest.fixture(scope="session")
def refs():
    return reference_groups()


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("graph-cache"))


@pytest.fixture(scope="session")
def construction(cache_dir):
    """Shared build; the graph itself is only touched by slow tests."""
    return Construction(CONWAY_MODULUS, storage=GraphStorage(cache_dir), sample_size=20)


@pytest.fixture
def toy_graph():
    """Complete bipartite K_{4,3} with side-one vertices 0..3."""
    sides = np.asarray([Side.ONE] * 4 + [Side.TWO] * 3, dtype=np.int8)
    reps = np.arange(7, dtype=np.int64)
    edges = [(i, 4 + j) for i in range(4) for j in range(3)]
    return CosetGraph.from_edges(sides, reps, np.asarray(edges))


@pytest.fixture
def petersen_edges():
    G = nx.petersen_graph()
    return G.number_of_nodes(), np.asarray(sorted(G.edges()), dtype=np.int64)
