import pytest

from algebra.amalgam import Amalgam, action_semidirect, core_in, shape_D2, shape_E2
from algebra.grp import PermutationOps, closure, structure_predicates


@pytest.fixture(scope="module")
def toy_amalgam():
    """Sym3 on {0,1,2} and the Klein group <(0 1), (2 3)> meeting in <(0 1)>."""
    ops = PermutationOps(4)
    H1 = closure([(1, 0, 2, 3), (1, 2, 0, 3)], ops, name="Sym3")
    H2 = closure([(1, 0, 2, 3), (0, 1, 3, 2)], ops, name="V")
    return Amalgam("toy", H1, H2)


def test_toy_cores(toy_amalgam):
    assert toy_amalgam.H12.order == 2
    assert toy_amalgam.T1.order == 1
    assert toy_amalgam.T2.same_elements(toy_amalgam.H12)
    assert toy_amalgam.X.same_elements(toy_amalgam.H12)
    assert toy_amalgam.compute_X((2, 1)).same_elements(toy_amalgam.X)
    assert toy_amalgam.is_minimal()


def test_toy_amalgam_has_neither_shape(toy_amalgam, refs):
    assert not shape_D2(toy_amalgam, refs).passed
    assert not shape_E2(toy_amalgam, refs).passed


def test_core_is_normal_in_both(construction):
    g = construction.groups
    T1 = core_in(g["H12"], g["H1"])
    T2 = core_in(g["H12"], g["H2"])
    assert T1.order == 18
    assert T2.order == 54


def test_h_amalgam_is_d2(construction, refs):
    amalgam = construction.amalgams["H"]
    bundle = shape_D2(amalgam, refs)
    assert bundle.passed, bundle.failed()
    assert amalgam.X.same_elements(amalgam.H12)
    assert amalgam.O3X.same_elements(construction.groups["Q2"])


def test_k_amalgam_is_e2(construction, refs):
    amalgam = construction.amalgams["K"]
    bundle = shape_E2(amalgam, refs)
    assert bundle.passed, bundle.failed()
    assert not shape_D2(amalgam, refs).passed
    assert amalgam.T1.order == 54


def test_action_semidirect_of_k_edge(construction):
    amalgam = construction.amalgams["K"]
    Z = amalgam.ZO3X
    semidirect = action_semidirect(amalgam.H2.subgroup(amalgam.H2.locate(Z)), amalgam.H2)
    assert semidirect.order == 54
    assert structure_predicates(Z).is_elementary_abelian
