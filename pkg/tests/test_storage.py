import io
import json

import networkx as nx
import numpy as np
import pytest

from algebra.errors import CacheMismatchError
from cache.models import ClaimRecord, EnvironmentBlock, ExportFormat, Verdict, VerificationReport
from cache.storage import (
    GraphStorage,
    ReportStorage,
    export_graph,
    graph6_size_bytes,
    write_graph6,
    write_orbit_table,
)

GROUP_HASH = "ab" * 32


def _graph6(n, edges, chunk=1 << 24):
    out = io.BytesIO()
    write_graph6(out, n, edges, chunk=chunk)
    return out.getvalue()


def test_graph6_matches_networkx(petersen_edges):
    n, edges = petersen_edges
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges.tolist())
    assert _graph6(n, edges) == nx.to_graph6_bytes(G, header=False)


def test_graph6_large_order_and_chunks():
    rng = np.random.default_rng(7)
    n = 100
    pairs = rng.integers(0, n, size=(300, 2))
    pairs = np.unique(np.sort(pairs[pairs[:, 0] != pairs[:, 1]], axis=1), axis=0)
    data = _graph6(n, pairs, chunk=16)
    assert data.startswith(graph6_size_bytes(n))
    decoded = nx.from_graph6_bytes(data.strip())
    assert sorted(tuple(sorted(e)) for e in decoded.edges()) == [tuple(p) for p in pairs.tolist()]


def test_graph6_size_prefix():
    assert graph6_size_bytes(62) == bytes([125])
    assert graph6_size_bytes(63) == bytes([126, 63, 63 + 0, 63 + 63])
    assert len(graph6_size_bytes(59_584)) == 4


def test_graph_cache_roundtrip(toy_graph, tmp_path):
    storage = GraphStorage(str(tmp_path))
    storage.save_graph(toy_graph, 0b1011011, GROUP_HASH)
    loaded = storage.load_graph(0b1011011, GROUP_HASH)
    assert loaded.num_vertices == toy_graph.num_vertices
    assert np.array_equal(loaded.edge_array(), toy_graph.edge_array())
    assert np.array_equal(loaded.sides, toy_graph.sides)
    assert storage.load_graph(0b1000011, GROUP_HASH) is None


def test_graph_cache_mismatch(toy_graph, tmp_path):
    storage = GraphStorage(str(tmp_path))
    storage.save_graph(toy_graph, 0b1011011, GROUP_HASH)
    with pytest.raises(CacheMismatchError):
        storage.load_graph(0b1011011, "cd" * 32)
    with open(storage.path_for(0b1011011), "r+b") as f:
        f.write(b"JUNK")
    with pytest.raises(CacheMismatchError):
        storage.load_graph(0b1011011, GROUP_HASH)


def test_exports(toy_graph, tmp_path):
    path = export_graph(toy_graph, ExportFormat.EDGE_LIST, str(tmp_path / "g.edges"))
    lines = open(path, encoding="utf-8").read().splitlines()
    assert len(lines) == 12
    assert lines[0] == "0 4"
    path = export_graph(toy_graph, ExportFormat.SPARSE6, str(tmp_path / "g.s6"))
    assert nx.is_isomorphic(nx.read_sparse6(path), nx.complete_bipartite_graph(4, 3))
    path = export_graph(toy_graph, ExportFormat.JSON, str(tmp_path / "out" / "g.json"))
    payload = json.load(open(path, encoding="utf-8"))
    assert payload["num_edges"] == 12
    assert payload["vertices"][4]["side"] == 2


def test_orbit_table(tmp_path):
    path = write_orbit_table(str(tmp_path / "orbits.csv"), [("K", 2, 1, 5, 108, 1, "108")])
    rows = open(path, encoding="utf-8").read().splitlines()
    assert rows[0] == "group,side,vertex,s,arcs,orbits,sizes"
    assert rows[1] == "K,2,1,5,108,1,108"


def test_report_storage_and_schema(tmp_path):
    storage = ReportStorage(str(tmp_path))
    report = VerificationReport(
        environment=EnvironmentBlock(modulus=0b1011011, modulus_bits="1011011"),
        claims=[
            ClaimRecord(claim_id="a.pass", statement="s", verdict=Verdict.PASS),
            ClaimRecord(claim_id="a.fail", statement="s", verdict=Verdict.FAIL),
            ClaimRecord(claim_id="a.info", statement="s", verdict=Verdict.INFO),
        ],
    ).finalize()
    assert report.overall is Verdict.FAIL
    assert report.counts() == {"pass": 1, "fail": 1, "info": 1, "skipped": 0}
    storage.save_report(report, "run")
    loaded = storage.load_report("run")
    assert loaded.by_id()["a.fail"].verdict is Verdict.FAIL
    schema = json.load(open(tmp_path / "run.schema.json", encoding="utf-8"))
    assert "claims" in schema["properties"]
    assert storage.load_report("missing") is None
