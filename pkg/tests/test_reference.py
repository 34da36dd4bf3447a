from algebra.grp import is_normal, iso_check, structure_predicates
from algebra.reference import EXPECTED_ORDERS, index_two_subgroups


def test_reference_orders(refs):
    for name, order in EXPECTED_ORDERS.items():
        assert refs[name].order == order, name


def test_affine_sections(refs):
    V, S, V0 = refs["AGL2(3):V"], refs["AGL2(3):S"], refs["AGL2(3):V0"]
    assert structure_predicates(V).is_elementary_abelian
    assert V0.is_subgroup_of(V) and V.is_subgroup_of(S)
    assert is_normal(refs["AGL2(3)"], V)
    assert is_normal(refs["AGL2(3,S)"], S)


def test_sharp_and_star_are_index_two(refs):
    N = refs["AGL2(3,S)"]
    halves = index_two_subgroups(N)
    for name in ("AGL2(3,S)#", "AGL2(3,S)*"):
        assert refs[name].is_subgroup_of(N)
        assert any(refs[name].same_elements(Y) for Y in halves)


def test_small_isomorphisms(refs):
    assert iso_check(refs["Sym3xC2"], refs["C2xAGL1(3)"]).isomorphic
    assert not iso_check(refs["Dih18xC2"], refs["C2xAGL1(3)"]).isomorphic
    assert not iso_check(refs["SP2"], refs["C3xAGL2(3,S)#"]).isomorphic
