import pytest

from algebra.coset import Side
from algebra.errors import CacheMismatchError
from algebra.gf64 import CONWAY_MODULUS
from cache.models import Verdict
from cache.storage import GraphStorage
from services.claims import SUBGROUP_ORDERS, run_verification
from services.construction import EXPECTED_GRAPH, SUBGROUPS, Construction
from services.guard import ensure_cache_consistent


def test_subgroup_orders(construction):
    orders = {name: construction.groups[name].order for name in SUBGROUPS}
    assert orders["K1"] == 1296 and orders["K2"] == 972
    assert orders["H1"] == 432 and orders["H2"] == 324
    assert orders["S"] == 36
    assert construction.groups["K12"].order == 324
    assert construction.groups["H12"].order == 108


def test_alternate_modulus_keeps_relations_and_orders(construction):
    other = Construction(0b1000011)
    assert other.relations.passed
    assert other.relations.convention == construction.relations.convention
    assert {name: other.groups[name].order for name in SUBGROUP_ORDERS} == SUBGROUP_ORDERS
    assert other.group_hash != construction.group_hash


def test_group_hash_is_stable(construction):
    again = Construction(CONWAY_MODULUS)
    assert again.group_hash == construction.group_hash
    assert len(construction.group_hash) == 64


def test_guard_without_cache_file(construction, tmp_path):
    fresh = Construction(CONWAY_MODULUS, storage=GraphStorage(str(tmp_path)))
    assert ensure_cache_consistent(fresh) is None


@pytest.mark.slow
def test_graph_counts_and_cache(construction):
    graph = construction.graph
    counts = graph.side_counts
    assert {"side_one": counts[Side.ONE], "side_two": counts[Side.TWO], "edges": graph.num_edges} == EXPECTED_GRAPH
    assert graph.is_bipartite_biregular()
    assert construction.group_order("K") == 33_094_656
    assert construction.group_order("H") == 11_031_552
    header = ensure_cache_consistent(construction)
    assert header.num_vertices == 59_584

    reloaded = Construction(CONWAY_MODULUS, storage=construction.storage)
    assert reloaded.graph.num_edges == graph.num_edges
    assert reloaded.graph_source == "cache"


@pytest.mark.slow
def test_stale_cache_is_refused(construction, tmp_path):
    storage = GraphStorage(str(tmp_path))
    storage.save_graph(construction.graph, CONWAY_MODULUS, "00" * 32)
    stale = Construction(CONWAY_MODULUS, storage=storage)
    with pytest.raises(CacheMismatchError):
        ensure_cache_consistent(stale)
    rebuilt = Construction(CONWAY_MODULUS, storage=storage, use_cache=False)
    assert ensure_cache_consistent(rebuilt) is None


@pytest.mark.slow
def test_alternate_modulus_gives_the_same_verdicts(construction, tmp_path):
    other = Construction(0b1000011, storage=GraphStorage(str(tmp_path)), sample_size=20)
    assert other.graph.side_counts == construction.graph.side_counts
    first = {c.claim_id: c.verdict for c in run_verification(construction).claims}
    second = {c.claim_id: c.verdict for c in run_verification(other).claims}
    assert first == second
    assert Verdict.FAIL not in second.values()
