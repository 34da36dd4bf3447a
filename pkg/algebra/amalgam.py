"""Vertex stabilizer amalgams and their shape predicates."""
from __future__ import annotations

import logging
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .checks import CheckBundle
from .errors import ConstructionError
from .grp import (
    FunctionOps,
    SmallGroup,
    center,
    centralizer,
    closure,
    intersect,
    is_normal,
    iso_check,
    normal_closure,
    p_core,
    quotient,
    sylow_subgroup,
)

logger = logging.getLogger("delta_amalgam.amalgam")


def core_in(H12: SmallGroup, Hi: SmallGroup) -> SmallGroup:
    """Largest subgroup of H12 normal in Hi: intersect H12 with its conjugates until stable."""
    mask = np.zeros(Hi.order, dtype=bool)
    mask[Hi.locate(H12)] = True
    gens = Hi.locate(Hi.generators) if Hi.generators else np.asarray(Hi.small_generating_set(), dtype=np.int64)
    conj = Hi.conjugation
    inverse = Hi.inverse
    while True:
        before = int(mask.sum())
        for g in gens:
            # x lies in C^g iff g x g^-1 lies in C
            mask &= mask[conj[inverse[g]]]
        if int(mask.sum()) == before:
            break
    core = Hi.subgroup(np.flatnonzero(mask))
    return H12.subgroup(H12.locate(core), name=f"T({Hi.name})")


def _closed(Y: SmallGroup, H12: SmallGroup, Hi: SmallGroup) -> bool:
    return intersect(H12, normal_closure(Hi, Y)).same_elements(Y)


class Amalgam:
    """(H1, H2; H12) with H12 = H1 & H2, over a shared labelling of elements."""

    def __init__(self, name: str, H1: SmallGroup, H2: SmallGroup, H12: Optional[SmallGroup] = None):
        self.name = name
        self.H1 = H1
        self.H2 = H2
        self.H12 = H12 if H12 is not None else intersect(H1, H2, name=f"{name}_12")

    @cached_property
    def T1(self) -> SmallGroup:
        return core_in(self.H12, self.H1)

    @cached_property
    def T2(self) -> SmallGroup:
        return core_in(self.H12, self.H2)

    @cached_property
    def X(self) -> SmallGroup:
        return self.compute_X()

    @cached_property
    def O3X(self) -> SmallGroup:
        return p_core(self.X, 3)

    @cached_property
    def ZO3X(self) -> SmallGroup:
        return center(self.O3X)

    @cached_property
    def O3H2(self) -> SmallGroup:
        return p_core(self.H2, 3)

    def compute_X(self, order: Tuple[int, int] = (1, 2)) -> SmallGroup:
        """Least X >= T1 T2 with X = H12 & <X^Hi> for i = 1, 2."""
        sides = {1: self.H1, 2: self.H2}
        X = self.H12.generated(list(self.T1.elements) + list(self.T2.elements), name=f"X({self.name})")
        rounds = 0
        while True:
            rounds += 1
            before = X.order
            for i in order:
                X = intersect(self.H12, normal_closure(sides[i], X), name=f"X({self.name})")
            if X.order == before:
                break
        if not (_closed(X, self.H12, self.H1) and _closed(X, self.H12, self.H2)):
            raise ConstructionError("closure iteration stopped at a non-closed subgroup")
        logger.debug(f"X of {self.name}: order {X.order} after {rounds} rounds")
        return X

    def is_minimal(self) -> bool:
        """Dropping any generator of an irredundant generating set of X breaks a defining condition."""
        X = self.X
        gens = X.small_generating_set()
        T1T2 = set(self.T1.elements) | set(self.T2.elements)
        for k in range(len(gens)):
            Y = X.subgroup(X.generate(gens[:k] + gens[k + 1:]))
            holds = (T1T2 <= Y.element_set and _closed(Y, self.H12, self.H1)
                     and _closed(Y, self.H12, self.H2))
            if holds and Y.order < X.order:
                return False
        return True

    def sylow_two_of_T2(self) -> SmallGroup:
        return sylow_subgroup(self.T2, 2)

    def witness(self) -> Dict[str, object]:
        return {
            "orders": {"H1": self.H1.order, "H2": self.H2.order, "H12": self.H12.order,
                       "T1": self.T1.order, "T2": self.T2.order, "X": self.X.order,
                       "O3(X)": self.O3X.order, "Z(O3(X))": self.ZO3X.order},
            "T1": [hex(x) for x in self.T1.generator_labels()],
            "T2": [hex(x) for x in self.T2.generator_labels()],
            "X": [hex(x) for x in self.X.generator_labels()],
        }


def shape_AGL23S(amalgam: Amalgam, refs: Dict[str, SmallGroup]) -> CheckBundle:
    bundle = CheckBundle(f"{amalgam.name} has shape AGL2(3,S)")
    bundle.add("x-is-edge", "H12 = X", amalgam.X.same_elements(amalgam.H12), order=amalgam.X.order)
    Z = amalgam.ZO3X
    C = centralizer(amalgam.X, Z)
    bundle.add("t2-centralizer", "T2 = C_X(Z(O_3(X)))", C.same_elements(amalgam.T2), order=C.order)
    if is_normal(amalgam.H2, Z):
        Q = quotient(amalgam.H2, amalgam.H2.subgroup(amalgam.H2.locate(Z)))
        ok = iso_check(Q, refs["AGL2(3,S)"]).isomorphic
    else:
        ok = False
    bundle.add("h2-quotient", "H2/Z(O_3(X)) = AGL2(3,S)", ok, center_order=Z.order)
    return bundle


def _extension_check(amalgam: Amalgam, bundle: CheckBundle, top: SmallGroup) -> None:
    H2, O = amalgam.H2, amalgam.O3X
    if is_normal(H2, O):
        Q = quotient(H2, H2.subgroup(H2.locate(O)))
        ok = iso_check(Q, top).isomorphic
    else:
        ok = False
    bundle.add("h2-extension", f"H2 = O_3(X).({top.name})", ok, core_order=O.order)


def centralizer_of(amalgam: Amalgam, labels: Sequence[int]) -> SmallGroup:
    """C_{O_3(H2)}(<labels>) for elements of H2."""
    return intersect(amalgam.O3H2, centralizer(amalgam.H2, list(labels)), name="C_O3(H2)")


def _sylow_centralizer(amalgam: Amalgam) -> SmallGroup:
    return centralizer_of(amalgam, amalgam.sylow_two_of_T2().elements)


def shape_D2(amalgam: Amalgam, refs: Dict[str, SmallGroup]) -> CheckBundle:
    bundle = shape_AGL23S(amalgam, refs)
    bundle.name = f"{amalgam.name} has shape D2"
    bundle.add("h1", "H1 = AGL2(3)", iso_check(amalgam.H1, refs["AGL2(3)"]).isomorphic)
    bundle.add("h12", "H12 = AGL2(3,S)", iso_check(amalgam.H12, refs["AGL2(3,S)"]).isomorphic)
    _extension_check(amalgam, bundle, refs["C2xAGL1(3)"])
    bundle.add("t2", "T2 = AGL2(3,S)#", iso_check(amalgam.T2, refs["AGL2(3,S)#"]).isomorphic,
               order=amalgam.T2.order)
    C = _sylow_centralizer(amalgam)
    bundle.add("sylow-centralizer", "C_{O_3(H2)}(T) = C9 for T in Syl_2(T2)",
               iso_check(C, refs["C9"]).isomorphic, order=C.order)
    return bundle


def action_semidirect(Z: SmallGroup, H: SmallGroup, name: str = "") -> SmallGroup:
    """Z x| (image of H in Aut(Z)) as pairs (z, phi), with phi_h(z) = h z h^-1.

    (z1, phi1)(z2, phi2) = (z1 phi1(z2), phi1 phi2).
    """
    member = np.full(H.order, -1, dtype=np.int64)
    member[H.locate(Z)] = np.arange(Z.order)
    z_idx = H.locate(Z)
    gens_h = H.locate(H.generators) if H.generators else np.asarray(H.small_generating_set(), dtype=np.int64)
    # conjugation[h^-1, z] = h z h^-1
    phis = [tuple(int(x) for x in member[H.conjugation[H.inverse[h], z_idx]]) for h in gens_h]
    if any(x < 0 for phi in phis for x in phi):
        raise ValueError(f"{Z.name} is not normal in {H.name}")
    identity_phi = tuple(range(Z.order))

    def mul(a: Tuple[int, Tuple[int, ...]], b: Tuple[int, Tuple[int, ...]]) -> Tuple[int, Tuple[int, ...]]:
        z1, phi1 = a
        z2, phi2 = b
        # (phi1 phi2)(z) = phi1(phi2(z))
        return int(Z.table[z1, phi1[z2]]), tuple(phi1[x] for x in phi2)

    gens = [(int(z), identity_phi) for z in Z.small_generating_set()] + [(0, phi) for phi in phis]
    return closure(gens, FunctionOps((0, identity_phi), mul), name=name or f"{Z.name} x| {H.name}")


def shape_E2(amalgam: Amalgam, refs: Dict[str, SmallGroup]) -> CheckBundle:
    bundle = shape_AGL23S(amalgam, refs)
    bundle.name = f"{amalgam.name} has shape E2"
    bundle.add("h1", "H1 = C3 x AGL2(3)", iso_check(amalgam.H1, refs["C3xAGL2(3)"]).isomorphic)
    bundle.add("h12", "H12 = C3 x AGL2(3,S)", iso_check(amalgam.H12, refs["C3xAGL2(3,S)"]).isomorphic)
    _extension_check(amalgam, bundle, refs["C2xAGL1(3)"])
    bundle.add("t2", "T2 = C3 x AGL2(3,S)#", iso_check(amalgam.T2, refs["C3xAGL2(3,S)#"]).isomorphic,
               order=amalgam.T2.order)
    H2, Z = amalgam.H2, amalgam.ZO3X
    try:
        semidirect = action_semidirect(H2.subgroup(H2.locate(Z)), H2)
        ok = iso_check(semidirect, refs["AGL2(3,S)*"]).isomorphic
        order = semidirect.order
    except ValueError:
        ok, order = False, 0
    bundle.add("action-semidirect", "Z(O_3(X)) x| H2/C_H2(Z(O_3(X))) = AGL2(3,S)*", ok, order=order)
    C = _sylow_centralizer(amalgam)
    bundle.add("sylow-centralizer", "C_{O_3(H2)}(T) = SP2 for T in Syl_2(T2)",
               iso_check(C, refs["SP2"]).isomorphic, order=C.order)
    return bundle
