import pytest

from algebra.errors import GroupOrderExceeded
from algebra.grp import (
    FunctionOps,
    PermutationOps,
    center,
    centralizer,
    class_equation_holds,
    closure,
    commutator_subgroup,
    conjugacy_classes,
    derived,
    direct_product,
    frattini_p,
    intersect,
    is_normal,
    is_split_extension,
    iso_check,
    normal_closure,
    normalizer,
    p_core,
    quotient,
    structure_predicates,
    sylow_subgroup,
)


@pytest.fixture(scope="module")
def sym4():
    return closure([(1, 0, 2, 3), (1, 2, 3, 0)], PermutationOps(4), name="Sym4")


@pytest.fixture(scope="module")
def c4():
    return closure([(1, 2, 3, 0)], PermutationOps(4), name="C4")


def test_closure_and_basic_invariants(sym4):
    assert sym4.order == 24
    assert sym4.identity == (0, 1, 2, 3)
    assert center(sym4).order == 1
    assert sym4.exponent == 12
    assert not sym4.is_abelian
    assert len(conjugacy_classes(sym4)) == 5
    assert class_equation_holds(sym4)


def test_closure_cap():
    with pytest.raises(GroupOrderExceeded):
        closure([(1, 0, 2, 3, 4), (1, 2, 3, 4, 0)], PermutationOps(5), cap=50)


def test_conjugation_is_right_action(sym4):
    g, x = (1, 2, 0, 3), (1, 0, 2, 3)
    expected = sym4.mul(sym4.mul(sym4.inv(g), x), g)
    assert sym4.elements[sym4.conjugation[sym4.index[g], sym4.index[x]]] == expected


def test_derived_series(sym4):
    A4 = derived(sym4)
    assert A4.order == 12
    assert derived(A4).order == 4
    assert commutator_subgroup(sym4, sym4, sym4).same_elements(A4)


def test_sylow_and_cores(sym4):
    assert sylow_subgroup(sym4, 2).order == 8
    P3 = sylow_subgroup(sym4, 3)
    assert P3.order == 3
    assert normalizer(sym4, P3).order == 6
    assert p_core(sym4, 2).order == 4
    assert p_core(sym4, 3).order == 1
    assert normal_closure(sym4, P3).order == 12


def test_centralizer_and_intersection(sym4):
    C = centralizer(sym4, [(1, 0, 2, 3)])
    assert C.order == 4
    stabilizer = sym4.subgroup([i for i, p in enumerate(sym4.elements) if p[3] == 3])
    assert intersect(C, stabilizer).order == 2


def test_quotient_by_klein_four(sym4, refs):
    V = p_core(sym4, 2)
    assert is_normal(sym4, V)
    Q = quotient(sym4, V)
    assert Q.order == 6
    assert iso_check(Q, refs["Sym3"]).isomorphic
    assert Q.image((1, 0, 3, 2)) == Q.identity


def test_quotient_needs_normal_subgroup(sym4):
    with pytest.raises(ValueError):
        quotient(sym4, sylow_subgroup(sym4, 3))


def test_isomorphism_checks(sym4, c4, refs):
    V = p_core(sym4, 2)
    assert not iso_check(c4, V).isomorphic
    assert iso_check(refs["Sym3"], refs["AGL1(3)"]).isomorphic
    assert not iso_check(refs["C9"], refs["E9"]).isomorphic
    assert iso_check(direct_product(refs["C3"], refs["C3"]), refs["E9"]).isomorphic


def test_split_extensions(sym4, c4):
    V = p_core(sym4, 2)
    result = is_split_extension(sym4, V)
    assert result.split is True
    assert result.complement.order == 6
    middle = c4.subgroup(c4.generate([c4.index[(2, 3, 0, 1)]]))
    result = is_split_extension(c4, middle)
    assert result.split is False
    assert not result.inconclusive


def test_structure_predicates(refs, c4):
    sp = structure_predicates(refs["SP2"])
    assert sp.is_special and sp.is_extraspecial
    assert sp.exponent == 9
    e9 = structure_predicates(refs["E9"])
    assert e9.is_elementary_abelian and not e9.is_special
    assert structure_predicates(c4).is_cyclic
    assert frattini_p(c4, 2).order == 2


def test_function_ops_pairs():
    def mul(x, y):
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 2)

    G = closure([(1, 0), (0, 1)], FunctionOps((0, 0), mul), name="C6")
    assert G.order == 6
    assert structure_predicates(G).is_cyclic


def test_cyclic_nine_does_not_split_over_c3():
    c9 = closure([(1, 2, 3, 4, 5, 6, 7, 8, 0)], PermutationOps(9), name="C9")
    c3 = c9.subgroup(c9.generate([c9.index[(3, 4, 5, 6, 7, 8, 0, 1, 2)]]))
    assert c3.order == 3
    result = is_split_extension(c9, c3)
    assert result.split is False
    assert not result.inconclusive


INCLUSIONS = [("Q1", "H1"), ("H1", "K1"), ("Qhat1", "K1"), ("K12", "K1"), ("H12", "H1"), ("H12", "H2"),
              ("Q2", "H2"), ("Qstar", "Q2"), ("S", "H2"), ("H2", "K2"), ("Qhat2", "K2"), ("K12", "K2")]


@pytest.mark.parametrize("sub, host", INCLUSIONS)
def test_lagrange_on_stabilizer_subgroups(construction, sub, host):
    g = construction.groups
    assert g[sub].is_subgroup_of(g[host])
    assert g[host].order % g[sub].order == 0


@pytest.mark.parametrize("name", ["Q2", "S", "H12", "H1", "H2", "K12"])
def test_class_equation_on_stabilizer_subgroups(construction, name):
    G = construction.groups[name]
    assert class_equation_holds(G)
    assert sum(len(c) for c in conjugacy_classes(G)) == G.order
