"""Reference groups for isomorphism checks, built from GF(3) affine maps and permutations."""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .errors import ConstructionError
from .grp import (
    FunctionOps,
    PermutationOps,
    SmallGroup,
    centralizer,
    closure,
    direct_product,
    from_elements,
    intersect,
    normalizer,
    powers,
    quotient,
    structure_predicates,
    sylow_subgroup,
)

logger = logging.getLogger("delta_amalgam.reference")

Perm = Tuple[int, ...]
Matrix2 = Tuple[int, int, int, int]

EXPECTED_ORDERS = {
    "C2": 2,
    "C3": 3,
    "C9": 9,
    "E9": 9,
    "Sym3": 6,
    "AGL1(3)": 6,
    "Sym4": 24,
    "Sym3xC2": 12,
    "C2xAGL1(3)": 12,
    "GL2(3)": 48,
    "Dih18xC2": 36,
    "SP2": 27,
    "AGL2(3)": 432,
    "AGL2(3,S)": 108,
    "AGL2(3,S)#": 54,
    "AGL2(3,S)*": 54,
    "C3xAGL2(3)": 1296,
    "C3xAGL2(3,S)": 324,
    "C3xAGL2(3,S)#": 162,
}


def _point(x: int, y: int) -> int:
    return (x % 3) + 3 * (y % 3)


def _affine(m: Matrix2, t: Tuple[int, int]) -> Perm:
    """v -> v M + t on row vectors of GF(3)^2."""
    a, b, c, d = m
    image = []
    for p in range(9):
        x, y = p % 3, p // 3
        image.append(_point(x * a + y * c + t[0], x * b + y * d + t[1]))
    return tuple(image)


def _gl2_3() -> List[Matrix2]:
    return [m for m in itertools.product(range(3), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 3]


def cyclic(n: int) -> SmallGroup:
    return closure([tuple((i + 1) % n for i in range(n))], PermutationOps(n), name=f"C{n}")


def symmetric(n: int) -> SmallGroup:
    ops = PermutationOps(n)
    return from_elements(list(itertools.permutations(range(n))), ops, name=f"Sym{n}")


def agl1_3() -> SmallGroup:
    maps = [tuple((a * x + b) % 3 for x in range(3)) for a in (1, 2) for b in range(3)]
    return from_elements(maps, PermutationOps(3), name="AGL1(3)")


def gl2_3() -> SmallGroup:
    return from_elements([_affine(m, (0, 0)) for m in _gl2_3()], PermutationOps(9), name="GL2(3)")


def agl2_3() -> SmallGroup:
    maps = [_affine(m, (tx, ty)) for m in _gl2_3() for tx in range(3) for ty in range(3)]
    return from_elements(maps, PermutationOps(9), name="AGL2(3)")


def translations(G: SmallGroup) -> SmallGroup:
    labels = [_affine((1, 0, 0, 1), (tx, ty)) for tx in range(3) for ty in range(3)]
    return G.subgroup(G.locate(labels), name="V")


def elementary_nine() -> SmallGroup:
    a = (1, 2, 0, 3, 4, 5)
    b = (0, 1, 2, 4, 5, 3)
    return closure([a, b], PermutationOps(6), name="E9")


def dihedral18_times_c2() -> SmallGroup:
    rotation = tuple((i + 1) % 9 for i in range(9)) + (9, 10)
    reflection = tuple((-i) % 9 for i in range(9)) + (9, 10)
    swap = tuple(range(9)) + (10, 9)
    return closure([rotation, reflection, swap], PermutationOps(11), name="Dih18xC2")


def sp2() -> SmallGroup:
    """Z9 x| Z3 with (i, j)(k, l) = (i + 4^j k, j + l): extraspecial of order 27, exponent 9."""

    def mul(x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        return ((x[0] + pow(4, x[1], 9) * y[0]) % 9, (x[1] + y[1]) % 3)

    return closure([(1, 0), (0, 1)], FunctionOps((0, 0), mul), name="SP2")


def section_centralizer(X: SmallGroup, V: SmallGroup, V0: SmallGroup) -> SmallGroup:
    """Elements of X acting trivially on V/V0: v^x v^-1 lies in V0 for every v in V."""
    v = X.locate(V)
    member = np.zeros(X.order, dtype=bool)
    member[X.locate(V0)] = True
    moved = X.table[X.conjugation[:, v], X.inverse[v][None, :]]
    return X.subgroup(np.flatnonzero(member[moved].all(axis=1)), name=f"C_{X.name}(V/V0)")


def index_two_subgroups(G: SmallGroup) -> List[SmallGroup]:
    squares = G.subgroup(G.generate(np.unique(powers(G, 2))), name="G^2")
    Q = quotient(G, squares)
    found = set()
    for pair in itertools.combinations(range(Q.order), 2):
        members = frozenset(Q.generate(pair).tolist())
        if len(members) * 2 == Q.order:
            found.add(members)
    result = []
    for members in sorted(found, key=sorted):
        mask = np.isin(Q.projection, sorted(members))
        result.append(G.subgroup(np.flatnonzero(mask)))
    return result


def _product_order(A: SmallGroup, B: SmallGroup) -> int:
    return A.order * B.order // intersect(A, B).order


def sharp_and_star(N: SmallGroup, S: SmallGroup, V: SmallGroup, V0: SmallGroup) -> Tuple[SmallGroup, SmallGroup]:
    """The two index-2 subgroups of N_AGL(S) singled out by their action on V0 and V/V0."""
    sharp = star = None
    for Y in index_two_subgroups(N):
        on_line = centralizer(Y, V0)
        on_quotient = section_centralizer(Y, V, V0)
        if (on_quotient.same_elements(S) and on_line.order == 2 * S.order
                and _product_order(on_line, on_quotient) == Y.order):
            sharp = Y
        if on_line.same_elements(S) and on_quotient.order == 2 * S.order:
            star = Y
    if sharp is None or star is None:
        raise ConstructionError("could not identify the # and * subgroups of AGL2(3,S)")
    sharp.name, star.name = "AGL2(3,S)#", "AGL2(3,S)*"
    return sharp, star


@lru_cache(maxsize=1)
def reference_groups() -> Dict[str, SmallGroup]:
    """Named reference groups, each order-checked; raises ConstructionError on any mismatch."""
    refs: Dict[str, SmallGroup] = {}
    refs["C2"] = cyclic(2)
    refs["C3"] = cyclic(3)
    refs["C9"] = cyclic(9)
    refs["E9"] = elementary_nine()
    refs["Sym3"] = symmetric(3)
    refs["AGL1(3)"] = agl1_3()
    refs["Sym4"] = symmetric(4)
    refs["Sym3xC2"] = direct_product(refs["Sym3"], refs["C2"], name="Sym3xC2")
    refs["C2xAGL1(3)"] = direct_product(refs["C2"], refs["AGL1(3)"], name="C2xAGL1(3)")
    refs["GL2(3)"] = gl2_3()
    refs["Dih18xC2"] = dihedral18_times_c2()
    refs["SP2"] = sp2()

    agl = agl2_3()
    refs["AGL2(3)"] = agl
    V = translations(agl)
    S = sylow_subgroup(agl, 3)
    V0 = intersect(V, centralizer(agl, S), name="V0")
    N = normalizer(agl, S)
    N.name = "AGL2(3,S)"
    refs["AGL2(3,S)"] = N
    refs["AGL2(3,S)#"], refs["AGL2(3,S)*"] = sharp_and_star(N, S, V, V0)
    refs["AGL2(3):V"] = V
    refs["AGL2(3):S"] = S
    refs["AGL2(3):V0"] = V0

    refs["C3xAGL2(3)"] = direct_product(refs["C3"], agl, name="C3xAGL2(3)")
    refs["C3xAGL2(3,S)"] = direct_product(refs["C3"], N, name="C3xAGL2(3,S)")
    refs["C3xAGL2(3,S)#"] = direct_product(refs["C3"], refs["AGL2(3,S)#"], name="C3xAGL2(3,S)#")

    for name, expected in EXPECTED_ORDERS.items():
        if refs[name].order != expected:
            raise ConstructionError(f"reference group {name} has order {refs[name].order}, expected {expected}")
    if V0.order != 3 or S.order != 27 or V.order != 9:
        raise ConstructionError("affine sections of AGL2(3) have unexpected orders")
    sp = structure_predicates(refs["SP2"])
    if not sp.is_extraspecial or sp.exponent != 9:
        raise ConstructionError("SP2 is not extraspecial of exponent 9")
    if not structure_predicates(refs["E9"]).is_elementary_abelian:
        raise ConstructionError("E9 is not elementary abelian")
    logger.info(f"reference groups ready: {len(refs)} entries")
    return refs
