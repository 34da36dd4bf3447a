import json
import os

import pytest

import main
from cache.storage import GraphStorage, ReportStorage
from commands import verify


@pytest.fixture
def isolated_cache(tmp_path, monkeypatch):
    storage = GraphStorage(str(tmp_path))
    monkeypatch.setattr(main, "graph_storage", storage)
    return storage


def test_field_table_json(capsys):
    assert main.main(["field-table", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["antilog"]) == 63
    assert payload["antilog"][0] == 1


def test_field_table_text(capsys):
    assert main.main(["field-table", "--modulus", "0b1000011"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("modulus 0b1000011")
    assert len(out) == 64


def test_reducible_modulus_is_a_configuration_error(isolated_cache):
    assert main.main(["build", "--modulus", "0b1000001"]) == main.EXIT_CONFIGURATION
    assert main.main(["field-table", "--modulus", "0b1000001"]) == main.EXIT_CONFIGURATION


def test_bad_thread_count(isolated_cache):
    assert main.main(["build", "--threads", "0"]) == main.EXIT_CONFIGURATION


def test_unknown_claim_prefix(isolated_cache):
    assert main.main(["verify", "--claims", "no-such-claim"]) == main.EXIT_CONFIGURATION


def test_verify_single_lemma(isolated_cache, monkeypatch, tmp_path, capsys):
    monkeypatch.setattr(verify, "report_storage", ReportStorage(str(tmp_path / "reports")))
    assert main.main(["verify", "--claims", "L3.1", "--no-cache", "--json"]) == main.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    evaluated = [c["claim_id"] for c in payload["claims"] if c["verdict"] != "skipped"]
    assert evaluated == ["L3.1"]
    assert "T1.2.iv" in payload["coverage"]


def test_foreign_cache_file_is_a_mismatch(isolated_cache):
    path = isolated_cache.path_for(main.Config.MODULUS)
    os.makedirs(isolated_cache.directory, exist_ok=True)
    with open(path, "wb") as f:
        f.write(b"not a graph cache at all, just some bytes to fill the header" * 2)
    assert main.main(["export"]) == main.EXIT_CACHE_MISMATCH


def test_parser_rejects_unknown_format():
    with pytest.raises(SystemExit):
        main.build_parser().parse_args(["export", "--format", "dot"])


@pytest.mark.slow
def test_arcs_and_export_commands(construction, monkeypatch, tmp_path, capsys):
    construction.graph
    monkeypatch.setattr(main, "graph_storage", construction.storage)
    assert main.main(["arcs", "--side", "2", "--s", "5", "--group", "K"]) == 0
    assert capsys.readouterr().out.strip() == "orbits: 1, size 108"
    out = tmp_path / "delta.edges"
    assert main.main(["export", "--format", "edge-list", "--out", str(out)]) == 0
    with open(out, encoding="utf-8") as f:
        assert sum(1 for _ in f) == 102_144
