import pytest

from algebra.arcs import pushing_up
from algebra.checks import CheckBundle
from algebra.reference import cyclic
from cache.models import GroupScope, Verdict
from services.claims import COVERAGE, Claim, evaluate_claim, lambda_members, registry, run_verification

GROUP_FREE_PREFIXES = ["relations", "subgroups"]


def test_claim_ids_are_unique_and_labelled():
    ids = registry.ids()
    labels = [c.label for c in registry.claims]
    assert len(ids) == len(set(ids))
    assert len(labels) == len(set(labels))
    assert all("." in label for label in labels)
    assert all(c.statement for c in registry.claims)


def test_registry_matches_coverage_manifest():
    assert sorted(registry.ids()) == sorted(COVERAGE)
    for required in ("L3.1", "L3.4.iv", "L3.9", "L3.11", "T1.1.v", "T1.2.iii", "NS"):
        assert required in COVERAGE
    assert any(i.startswith("L3.10.") for i in COVERAGE)


def test_prefix_filter_respects_dots():
    by_id = {c.claim_id: c for c in registry.claims}
    table = by_id["L3.1"]
    assert registry.selected(table, ["L3.1"], GroupScope.BOTH)
    assert registry.selected(table, ["relations"], GroupScope.BOTH)
    assert registry.selected(table, ["relations.table-first"], GroupScope.BOTH)
    assert not registry.selected(table, ["relations.table"], GroupScope.BOTH)
    assert registry.selected(table, ["L3"], GroupScope.BOTH)
    assert registry.selected(table, [], GroupScope.H)


def test_lemma_prefix_does_not_reach_longer_numbers():
    picked = [c.claim_id for c in registry.claims if registry.selected(c, ["L3.1"], GroupScope.BOTH)]
    assert picked == ["L3.1"]
    tenth = [c.claim_id for c in registry.claims if registry.selected(c, ["L3.10"], GroupScope.BOTH)]
    assert sorted(tenth) == ["L3.10.automorphisms", "L3.10.counts", "L3.10.faithful"]
    part = [c.claim_id for c in registry.claims if registry.selected(c, ["T1.2.i"], GroupScope.BOTH)]
    assert part == ["T1.2.i"]


def test_group_scope_filters_group_claims():
    by_id = {c.claim_id: c for c in registry.claims}
    assert not registry.selected(by_id["L3.6.ii"], [], GroupScope.H)
    assert registry.selected(by_id["L3.6.i"], [], GroupScope.H)
    assert registry.selected(by_id["T1.1.ii"], [], GroupScope.K)
    assert not registry.selected(by_id["T1.2.iii"], [], GroupScope.H)


def test_failing_check_is_recorded_not_raised():
    def broken(construction):
        raise RuntimeError("boom")

    record = evaluate_claim(None, Claim("X.1", "test.broken", "always raises", broken))
    assert record.verdict is Verdict.FAIL
    assert record.label == "test.broken"
    assert "boom" in record.error


def test_informational_claim_is_never_a_failure():
    record = evaluate_claim(None, Claim("X.2", "test.info", "reported", lambda c: (False, {"x": 1}),
                                        informational=True))
    assert record.verdict is Verdict.INFO
    assert record.witness == {"x": 1}


class _SameKernels:
    def kernel(self, z, i, group):
        return cyclic(3)


def _characteristic(passed):
    bundle = CheckBundle("local characteristic")
    bundle.add("edge.0-1", "C_G(O_3) <= O_3 at both ends", passed)
    return bundle


def test_pushing_up_needs_local_characteristic():
    bundle = pushing_up(_SameKernels(), "H", _characteristic(False))
    assert not bundle.passed
    assert bundle.failed() == ["H.characteristic"]


def test_pushing_up_with_characteristic():
    bundle = pushing_up(_SameKernels(), "K", _characteristic(True))
    assert bundle.passed
    assert [item.key for item in bundle.items] == ["K.characteristic", "K.containment"]


def test_unknown_prefix_is_a_configuration_error(construction):
    with pytest.raises(ValueError):
        run_verification(construction, ["no-such-claim"])


def test_lambda_has_three_members(construction):
    members = lambda_members(construction)
    assert len(members) == 3
    assert any(X.same_elements(construction.groups["Q1"]) for X in members)


def test_first_relation_table_alone(construction):
    report = run_verification(construction, ["L3.1"])
    assert report.overall is Verdict.PASS
    evaluated = [c.claim_id for c in report.claims if c.verdict is not Verdict.SKIPPED]
    assert evaluated == ["L3.1"]
    assert report.by_id()["L3.1"].label == "relations.table-first"
    assert report.coverage == list(COVERAGE)
    assert report.coverage_gaps() == []


def test_coverage_ids_reported_exactly_once(construction):
    report = run_verification(construction, ["S3"])
    ids = [c.claim_id for c in report.claims]
    assert all(ids.count(i) == 1 for i in COVERAGE)


def test_coverage_gap_fails_the_report(construction):
    report = run_verification(construction, ["S3"])
    report.claims = [c for c in report.claims if c.claim_id != "NS"]
    assert report.finalize().overall is Verdict.FAIL
    assert report.coverage_gaps() == ["NS"]


def test_group_level_claims_pass(construction):
    report = run_verification(construction, GROUP_FREE_PREFIXES)
    records = report.by_id()
    for record in report.claims:
        if any(record.label.startswith(p + ".") for p in GROUP_FREE_PREFIXES):
            assert record.verdict is Verdict.PASS, (record.claim_id, record.witness, record.error)
        else:
            assert record.verdict is Verdict.SKIPPED
    assert records["S3.orders"].witness["orders"]["K12"] == 324
    assert records["L3.3"].witness["failed"] == []
    assert report.environment.commutator_convention is not None


def test_amalgam_claims_pass(construction):
    report = run_verification(construction, ["L3.6"])
    assert report.overall is Verdict.PASS, [(c.claim_id, c.witness) for c in report.failed()]


@pytest.mark.slow
def test_full_verification(construction):
    report = run_verification(construction)
    assert report.overall is Verdict.PASS, [(c.claim_id, c.witness, c.error) for c in report.failed()]
    records = report.by_id()
    assert records["L3.11.ii"].verdict is Verdict.INFO
    assert records["L3.10.counts"].witness["edges"] == 102_144
    order = records["T1.1"].witness
    assert (order["K"], order["H"], order["PSU3(8)"]) == (33_094_656, 11_031_552, 5_515_776)
    assert set(records) == set(COVERAGE)


@pytest.mark.slow
def test_h_scope_skips_k_claims(construction):
    report = run_verification(construction, ["T1.2"], GroupScope.H)
    records = report.by_id()
    assert records["T1.2.i"].verdict is Verdict.PASS
    assert records["T1.2.ii"].verdict is Verdict.PASS
    assert records["T1.2.iii"].verdict is Verdict.SKIPPED
    assert records["T1.2"].verdict is Verdict.PASS
