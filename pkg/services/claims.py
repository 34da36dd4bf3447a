"""Манифест проверяемых утверждений и их вычисление.

Каждое утверждение - функция от Construction, возвращающая (passed, witness).
Утверждения регистрируются в ClaimRegistry так же, как обработчики в роутере.
"""
import itertools
import logging
import time
import traceback
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pydantic

from algebra.amalgam import centralizer_of, shape_D2, shape_E2
from algebra.arcs import enumerate_arcs, hat_cores_check, pushing_up, verify_kernel_theorems
from algebra.coset import Side, apply_element, group_order_from_edges
from algebra.grp import (
    PermutationOps,
    SmallGroup,
    center,
    centralizer,
    closure,
    commutator_subgroup,
    intersect,
    is_normal,
    is_split_extension,
    iso_check,
    normalizer,
    p_core,
    quotient,
    structure_predicates,
)
from cache.models import ClaimRecord, EnvironmentBlock, GroupScope, Verdict, VerificationReport
from cache.storage import to_networkx

from .construction import EXPECTED_GRAPH, EXPECTED_K_ORDER, Construction

logger = logging.getLogger("delta_amalgam.claims")

Outcome = Tuple[bool, Dict[str, Any]]
ClaimCheck = Callable[[Construction], Outcome]


@dataclass(frozen=True)
class Claim:
    claim_id: str
    label: str
    statement: str
    check: ClaimCheck
    group: Optional[str] = None
    informational: bool = False


def _matches(name: str, prefix: str) -> bool:
    prefix = prefix.rstrip(".")
    return name == prefix or name.startswith(prefix + ".")


class ClaimRegistry:
    def __init__(self):
        self.claims: List[Claim] = []

    def claim(self, claim_id: str, label: str, statement: str, *, group: Optional[str] = None,
              informational: bool = False) -> Callable[[ClaimCheck], ClaimCheck]:
        def register(check: ClaimCheck) -> ClaimCheck:
            if any(claim_id in (c.claim_id, c.label) or label in (c.claim_id, c.label) for c in self.claims):
                raise ValueError(f"duplicate claim {claim_id} ({label})")
            self.claims.append(Claim(claim_id, label, statement, check, group, informational))
            return check
        return register

    def ids(self) -> List[str]:
        return [c.claim_id for c in self.claims]

    def selected(self, claim: Claim, prefixes: Sequence[str], scope: GroupScope) -> bool:
        if not scope.includes(claim.group):
            return False
        if not prefixes:
            return True
        return any(_matches(claim.claim_id, p) or _matches(claim.label, p) for p in prefixes)


registry = ClaimRegistry()
claim = registry.claim

# Каждый id ниже попадает в отчет ровно один раз, проверен он или пропущен.
COVERAGE = (
    "S3.generators", "S3.twist", "S3.orders",
    "L3.1",
    "L3.2.i", "L3.2.ii", "L3.2.iii", "L3.2.iv", "L3.2.v", "L3.2.lambda",
    "L3.3",
    "L3.4.i", "L3.4.ii", "L3.4.iii", "L3.4.iv", "L3.4.v",
    "L3.5.i", "L3.5.ii",
    "L3.6.i", "L3.6.ii", "L3.6.cores-h", "L3.6.cores-k", "L3.6.not-e2",
    "L3.7", "L3.7.arcs", "L3.7.chain", "L3.7.centralizers",
    "L3.8", "L3.8.i", "L3.8.ii",
    "L3.9",
    "L3.10.counts", "L3.10.automorphisms", "L3.10.faithful",
    "L3.11", "L3.11.i", "L3.11.ii", "L3.11.alpha", "L3.11.index",
    "T1.1", "T1.1.i", "T1.1.ii", "T1.1.iii", "T1.1.iv", "T1.1.v", "T1.1.characteristic",
    "T1.2", "T1.2.i", "T1.2.ii", "T1.2.iii", "T1.2.iv", "T1.2.remark",
    "NS",
)


def _gen(c: Construction, home: str, *names: str) -> SmallGroup:
    return c.groups[home].generated(c.labels(names))


def _sub(G: SmallGroup, H: SmallGroup) -> SmallGroup:
    """H, заново прочитанная как подгруппа G."""
    return G.subgroup(G.locate(H), name=H.name)


# --- relations -----------------------------------------------------------------------------

FIRST_TABLE = ("comm.A.B", "comm.A.C", "comm.B.C", "comm.D.A", "comm.D.B",
               "twist.A", "twist.B", "twist.C", "twist.D", "power.C", "power.D")
SECOND_TABLE = ("comm.E.A", "comm.E.B", "comm.E.C", "comm.F.A", "comm.F.B", "comm.F.C", "comm.F.E",
                "twist.E", "twist.F", "power.E")


def _table(c: Construction, keys: Sequence[str]) -> Dict[str, Any]:
    r = c.relations
    rows = {x.key: x.passed for x in r.checks if x.key in keys}
    return {
        "passed": len(rows) == len(keys) and all(rows.values()),
        "convention": r.convention.value if r.convention else None,
        "failed": [k for k in keys if not rows.get(k, False)],
    }


@claim("S3.generators", "relations.unitary", "A, B, C, D, E, F, Z are unitary of determinant 1")
def _unitary(c: Construction) -> Outcome:
    u = c.unitary
    found = {name: (u.is_unitary(g.mat), u.det(g.mat)) for name, g in c.generators.items() if name != "sigma"}
    return all(ok and det == 1 for ok, det in found.values()), {"determinants": {k: v[1] for k, v in found.items()}}


@claim("L3.1", "relations.table-first", "relations among A, B, C, D, sigma hold and [<C,D>, Q1] = Q1")
def _first_table(c: Construction) -> Outcome:
    table = _table(c, FIRST_TABLE)
    g = c.groups
    tail = commutator_subgroup(g["K1"], _gen(c, "K1", "C", "D"), g["Q1"]).same_elements(g["Q1"])
    return table.pop("passed") and tail, {**table, "cd-q1": tail}


@claim("L3.3", "relations.table-second",
       "relations involving E and F hold, [<E>, Q2] = Q* and [<E>, <sigma^2, B>] = <B>")
def _second_table(c: Construction) -> Outcome:
    table = _table(c, SECOND_TABLE)
    g = c.groups
    K2 = g["K2"]
    E = _gen(c, "K2", "E")
    tails = {
        "e-q2": commutator_subgroup(K2, E, g["Q2"]).same_elements(g["Qstar"]),
        "e-hat": commutator_subgroup(K2, E, _gen(c, "K2", "sigma2", "B")).same_elements(_gen(c, "K2", "B")),
    }
    return table.pop("passed") and all(tails.values()), {**table, **tails}


@claim("S3.twist", "relations.twist-conjugation", "sigma^-1 X sigma is the entrywise Frobenius image of X")
def _twist(c: Construction) -> Outcome:
    return c.relations.twist_conjugation, {}


# --- subgroups -----------------------------------------------------------------------------

SUBGROUP_ORDERS = {"Q1": 9, "Q2": 27, "Qstar": 9, "S": 36, "H1": 432, "H2": 324, "H12": 108,
                   "K1": 1296, "K2": 972, "K12": 324, "Qhat1": 27, "Qhat2": 81}


@claim("S3.orders", "subgroups.orders", "|Q1|=9, |Q2|=27, |S|=36, |H1|=432, |H2|=324, |H12|=108, "
                                        "|K1|=1296, |K2|=972, |K12|=324")
def _orders(c: Construction) -> Outcome:
    found = {name: c.groups[name].order for name in SUBGROUP_ORDERS}
    return found == SUBGROUP_ORDERS, {"orders": found}


@claim("L3.2.i", "subgroups.q1-qstar", "Q1 and Q* are abelian of order 9 and [Q1, Q*] = <B>")
def _q1_qstar(c: Construction) -> Outcome:
    g = c.groups
    p1, ps = structure_predicates(g["Q1"]), structure_predicates(g["Qstar"])
    comm = commutator_subgroup(g["K1"], g["Q1"], g["Qstar"])
    checks = {
        "q1": p1.is_abelian and p1.order == 9,
        "qstar": ps.is_abelian and ps.order == 9,
        "commutator": comm.same_elements(_gen(c, "K1", "B")),
    }
    return all(checks.values()), checks


@claim("L3.2.ii", "subgroups.q2-special", "Q2 = Q1 Q* is special of order 27 and exponent 3 with center <B>")
def _q2(c: Construction) -> Outcome:
    g = c.groups
    Q2 = g["Q2"]
    product = g["Q1"].order * g["Qstar"].order // intersect(g["Q1"], g["Qstar"]).order
    p = structure_predicates(Q2)
    checks = {
        "product": product == Q2.order,
        "special": p.is_special and p.order == 27 and p.exponent == 3,
        "center": center(Q2).same_elements(_gen(c, "K1", "B")),
    }
    return all(checks.values()), checks


@claim("L3.2.iii", "subgroups.h1-agl", "H1 = AGL2(3) with O_3(H1) = Q1")
def _h1(c: Construction) -> Outcome:
    g = c.groups
    checks = {
        "iso": iso_check(g["H1"], c.refs["AGL2(3)"]).isomorphic,
        "core": p_core(g["H1"], 3).same_elements(g["Q1"]),
    }
    return all(checks.values()), checks


def _direct_with_sigma2(c: Construction, Q: SmallGroup, hat: SmallGroup) -> bool:
    s2 = hat.generated([c.codes["sigma2"]])
    sub = _sub(hat, Q)
    return (is_normal(hat, sub) and s2.is_subgroup_of(center(hat))
            and intersect(Q, s2).order == 1 and hat.order == Q.order * s2.order)


@claim("L3.2.iv", "subgroups.hat-products", "Qhat1 = Q1 x <sigma^2> and Qhat2 = Q2 x <sigma^2>")
def _hats(c: Construction) -> Outcome:
    g = c.groups
    checks = {
        "qhat1": _direct_with_sigma2(c, g["Q1"], g["Qhat1"]),
        "qhat2": _direct_with_sigma2(c, g["Q2"], g["Qhat2"]),
    }
    return all(checks.values()), checks


@claim("L3.2.v", "subgroups.k1-agl", "K1 = C3 x AGL2(3), O_3(K1) = Qhat1, Z(Q2) <= Q1, Z(Qhat2) <= Qhat1")
def _k1(c: Construction) -> Outcome:
    g = c.groups
    checks = {
        "iso": iso_check(g["K1"], c.refs["C3xAGL2(3)"]).isomorphic,
        "core": p_core(g["K1"], 3).same_elements(g["Qhat1"]),
        "z-q2": center(g["Q2"]).is_subgroup_of(g["Q1"]),
        "z-qhat2": center(g["Qhat2"]).is_subgroup_of(g["Qhat1"]),
    }
    return all(checks.values()), checks


def lambda_members(c: Construction) -> List[SmallGroup]:
    """Элементарные абелевы подгруппы порядка 9 в Q2, кроме Q*."""
    Q2 = c.groups["Q2"]
    found = {}
    for a, b in itertools.combinations(range(1, Q2.order), 2):
        members = Q2.generate([a, b])
        if members.size != 9:
            continue
        key = tuple(members.tolist())
        if key not in found:
            found[key] = Q2.subgroup(members)
    qstar = c.groups["Qstar"]
    return [X for X in found.values()
            if structure_predicates(X).is_elementary_abelian and not X.same_elements(qstar)]


@claim("L3.2.lambda", "subgroups.lambda", "Lambda has three members and contains Q1")
def _lambda(c: Construction) -> Outcome:
    members = lambda_members(c)
    return len(members) == 3 and any(X.same_elements(c.groups["Q1"]) for X in members), {"size": len(members)}


@claim("L3.4.i", "subgroups.s-dihedral", "S = <E,F> x <F sigma^3> = Dih(18) x C2")
def _s(c: Construction) -> Outcome:
    S = c.groups["S"]
    EF = S.generated(c.labels(("E", "F")))
    t = S.generated([c.codes["Fsigma3"]])
    checks = {
        "iso": iso_check(S, c.refs["Dih18xC2"]).isomorphic,
        "ef-dihedral": EF.order == 18 and not EF.is_abelian,
        "twist-central": t.order == 2 and t.is_subgroup_of(center(S)),
        "direct": intersect(EF, t).order == 1 and EF.order * t.order == S.order,
    }
    return all(checks.values()), checks


@claim("L3.4.ii", "subgroups.s-normalizes",
       "S normalizes Q2, Qhat2 and Q*, not Q1; S & Q2 = Z(Q2); S/Z(Q2) = Sym3 x C2")
def _s_normalizes(c: Construction) -> Outcome:
    g = c.groups
    K2, S = g["K2"], g["S"]
    ZQ2 = center(g["Q2"])
    checks = {
        "q2": S.is_subgroup_of(normalizer(K2, g["Q2"])),
        "qhat2": S.is_subgroup_of(normalizer(K2, g["Qhat2"])),
        "qstar": S.is_subgroup_of(normalizer(K2, g["Qstar"])),
        "not-q1": not S.is_subgroup_of(normalizer(K2, g["Q1"])),
        "meet": intersect(S, g["Q2"]).same_elements(ZQ2),
        "quotient": iso_check(quotient(S, _sub(S, ZQ2)), c.refs["Sym3xC2"]).isomorphic,
    }
    return all(checks.values()), checks


def _action_on_sets(G: SmallGroup, members: Sequence[SmallGroup], labels: Sequence[int]) -> List[Tuple[int, ...]]:
    """Перестановки ``members``, индуцированные сопряжением каждым элементом из labels."""
    keys = [frozenset(X.elements) for X in members]
    perms = []
    for label in labels:
        g = G.index[label]
        images = []
        for X in members:
            moved = frozenset(G.labels(G.conjugation[g, G.locate(X)]))
            images.append(keys.index(moved))
        perms.append(tuple(images))
    return perms


@claim("L3.4.iii", "subgroups.s-on-lambda", "S acts on Lambda as Sym(3) with <F sigma^3> in the kernel")
def _s_lambda(c: Construction) -> Outcome:
    K2 = c.groups["K2"]
    members = lambda_members(c)
    perms = _action_on_sets(K2, members, c.labels(("E", "F", "sigma3")))
    image = closure(perms, PermutationOps(len(members)), name="S on Lambda")
    twist = _action_on_sets(K2, members, [c.codes["Fsigma3"]])[0]
    checks = {
        "sym3": iso_check(image, c.refs["Sym3"]).isomorphic,
        "twist-trivial": twist == tuple(range(len(members))),
    }
    return all(checks.values()), checks


@claim("L3.4.iv", "subgroups.h2-quotients", "H2 = Q2 S = Q2.(AGL1(3) x C2) and H2/Z(Q2) = AGL2(3,S)")
def _h2(c: Construction) -> Outcome:
    g = c.groups
    H2, Q2 = g["H2"], g["Q2"]
    checks = {
        "product": Q2.order * g["S"].order // intersect(Q2, g["S"]).order == H2.order,
        "extension": iso_check(quotient(H2, _sub(H2, Q2)), c.refs["C2xAGL1(3)"]).isomorphic,
        "agl": iso_check(quotient(H2, _sub(H2, center(Q2))), c.refs["AGL2(3,S)"]).isomorphic,
    }
    return all(checks.values()), checks


@claim("L3.4.v", "subgroups.k2-quotients",
       "K2 = Qhat2.(AGL1(3) x C2), Z(Qhat2) = <sigma^2, B>, K2/Z(Qhat2) = AGL2(3,S)")
def _k2(c: Construction) -> Outcome:
    g = c.groups
    K2, Qh = g["K2"], g["Qhat2"]
    Z = center(Qh)
    checks = {
        "extension": iso_check(quotient(K2, _sub(K2, Qh)), c.refs["C2xAGL1(3)"]).isomorphic,
        "center": Z.same_elements(_gen(c, "K2", "sigma2", "B")),
        "agl": iso_check(quotient(K2, _sub(K2, Z)), c.refs["AGL2(3,S)"]).isomorphic,
    }
    return all(checks.values()), checks


@claim("L3.5.i", "subgroups.h-edge", "H1 & H2 = <A,B,C,F,sigma^3> = AGL2(3,S)")
def _h_edge(c: Construction) -> Outcome:
    g = c.groups
    checks = {
        "generators": g["H12"].same_elements(_gen(c, "K1", "A", "B", "C", "F", "sigma3")),
        "iso": iso_check(g["H12"], c.refs["AGL2(3,S)"]).isomorphic,
    }
    return all(checks.values()), checks


@claim("L3.5.ii", "subgroups.k-edge", "K1 & K2 = <A,B,C,F,sigma^3,sigma^2> = C3 x AGL2(3,S)")
def _k_edge(c: Construction) -> Outcome:
    g = c.groups
    checks = {
        "generators": g["K12"].same_elements(_gen(c, "K1", "A", "B", "C", "F", "sigma3", "sigma2")),
        "iso": iso_check(g["K12"], c.refs["C3xAGL2(3,S)"]).isomorphic,
    }
    return all(checks.values()), checks


# --- graph ---------------------------------------------------------------------------------

H_GENERATORS = ("A", "B", "C", "D", "E", "F", "sigma3")


@claim("L3.10.counts", "graph.counts",
       "25,536 + 34,048 vertices, 102,144 edges, bipartite (4,3)-biregular and connected")
def _counts(c: Construction) -> Outcome:
    graph = c.graph
    g = c.groups
    counts = graph.side_counts
    found = {"side_one": counts[Side.ONE], "side_two": counts[Side.TWO], "edges": graph.num_edges}
    checks = {
        "counts": found == EXPECTED_GRAPH,
        "biregular": graph.is_bipartite_biregular(),
        "connected": nx.is_connected(to_networkx(graph)),
        "indices": (g["K1"].order // g["K12"].order, g["K2"].order // g["K12"].order) == (4, 3),
    }
    return all(checks.values()), {**checks, **found}


def generator_images(c: Construction, names: Sequence[str]) -> Dict[str, np.ndarray]:
    everything = np.arange(c.graph.num_vertices)
    return {name: apply_element(c.graph, c.spaces, c.unitary, everything, c.codes[name], c.threads)
            for name in names}


@claim("T1.1", "graph.group-order",
       "|K| = |Delta_1| |K1| = 33,094,656 = 6 |PSU3(8)| and |H| = |H-edge orbit| |H12| = 11,031,552")
def _group_order(c: Construction) -> Outcome:
    k = c.group_order("K")
    h = group_order_from_edges(c.graph, generator_images(c, H_GENERATORS).values(), c.groups["H12"])
    psu = EXPECTED_K_ORDER // 6
    checks = {
        "k": k == EXPECTED_K_ORDER,
        "h": h == EXPECTED_K_ORDER // 3,
        "psu-k": k % psu == 0 and k // psu == 6,
        "psu-h": h % psu == 0 and h // psu == 2,
    }
    return all(checks.values()), {**checks, "K": k, "H": h, "PSU3(8)": psu}


@claim("L3.10.automorphisms", "graph.automorphisms", "every generator of K induces an automorphism of the graph")
def _automorphisms(c: Construction) -> Outcome:
    edges = c.graph.edge_array()
    result = {}
    for name, image in generator_images(c, ("A", "B", "C", "D", "E", "F", "sigma")).items():
        mapped = np.sort(image[edges], axis=1)
        mapped = mapped[np.lexsort((mapped[:, 1], mapped[:, 0]))]
        bijective = np.unique(image).size == image.size
        result[name] = bool(bijective and np.array_equal(mapped, edges)
                            and np.array_equal(c.graph.sides[image], c.graph.sides))
    return all(result.values()), result


@claim("L3.10.faithful", "graph.faithful", "K acts faithfully on the vertices: K_x1^[5] = 1")
def _faithful(c: Construction) -> Outcome:
    kernel = c.analysis.kernel(0, 5, "K")
    return kernel.order == 1, {"kernel_order": kernel.order}


@claim("L3.11.index", "graph.h-normal-index",
       "H has two orbits on vertices, sigma^2 normalizes H1 and H2, |K:H| = 3")
def _h_index(c: Construction) -> Outcome:
    g = c.groups
    images = generator_images(c, H_GENERATORS)
    orbit_graph = nx.Graph()
    orbit_graph.add_nodes_from(range(c.graph.num_vertices))
    for image in images.values():
        orbit_graph.add_edges_from(zip(range(c.graph.num_vertices), image.tolist()))
    orbits = nx.number_connected_components(orbit_graph)
    s2 = c.codes["sigma2"]
    checks = {
        "orbits": orbits == 2,
        "normalizes-h1": g["H1"].same_elements(_conjugated(c, g["K1"], g["H1"], s2)),
        "normalizes-h2": g["H2"].same_elements(_conjugated(c, g["K2"], g["H2"], s2)),
        "index": g["K1"].order == 3 * g["H1"].order and g["K2"].order == 3 * g["H2"].order,
    }
    return all(checks.values()), {**checks, "orbit_count": orbits}


def _conjugated(c: Construction, G: SmallGroup, X: SmallGroup, label: int) -> SmallGroup:
    return G.subgroup(G.conjugation[G.index[label], G.locate(X)])


# --- amalgams ------------------------------------------------------------------------------

CORES = {
    "H": (("A", "B", "F"), ("A", "B", "C", "Fsigma3")),
    "K": (("sigma2", "A", "B", "F"), ("sigma2", "A", "B", "C", "Fsigma3")),
}


def _core_claim(c: Construction, group: str) -> Outcome:
    amalgam = c.amalgams[group]
    t1_names, t2_names = CORES[group]
    home = amalgam.H12
    checks = {
        "t1": amalgam.T1.same_elements(home.generated(c.labels(t1_names))),
        "t2": amalgam.T2.same_elements(home.generated(c.labels(t2_names))),
        "t1-normal": is_normal(amalgam.H1, _sub(amalgam.H1, amalgam.T1)),
        "t2-normal": is_normal(amalgam.H2, _sub(amalgam.H2, amalgam.T2)),
        "x-edge": amalgam.X.same_elements(amalgam.H12),
        "x-order-free": amalgam.compute_X((2, 1)).same_elements(amalgam.X),
        "x-minimal": amalgam.is_minimal(),
    }
    return all(checks.values()), {**checks, **amalgam.witness()}


@claim("L3.6.cores-h", "amalgam.h-cores", "T1 = <A,B,F>, T2 = <A,B,C,F sigma^3>, X = H1 & H2", group="H")
def _h_cores(c: Construction) -> Outcome:
    return _core_claim(c, "H")


@claim("L3.6.cores-k", "amalgam.k-cores", "T1 = <sigma^2,A,B,F>, T2 = <sigma^2,A,B,C,F sigma^3>, X = K1 & K2",
       group="K")
def _k_cores(c: Construction) -> Outcome:
    return _core_claim(c, "K")


@claim("L3.6.i", "amalgam.h-d2",
       "(H1, H2; H12) has shape AGL2(3,S) and D2, with C_{O_3(H2)}(F sigma^3) = <E>", group="H")
def _h_d2(c: Construction) -> Outcome:
    amalgam = c.amalgams["H"]
    bundle = shape_D2(amalgam, c.refs)
    C = centralizer_of(amalgam, [c.codes["Fsigma3"]])
    bundle.add("centralizer-e", "C_{O_3(H2)}(F sigma^3) = <E>", C.same_elements(_gen(c, "K2", "E")))
    return bundle.passed, bundle.witness()


@claim("L3.6.ii", "amalgam.k-e2",
       "(K1, K2; K12) has shape AGL2(3,S) and E2, with C_{O_3(K2)}(F sigma^3) = <sigma^2, E>", group="K")
def _k_e2(c: Construction) -> Outcome:
    amalgam = c.amalgams["K"]
    bundle = shape_E2(amalgam, c.refs)
    C = centralizer_of(amalgam, [c.codes["Fsigma3"]])
    bundle.add("centralizer-e", "C_{O_3(K2)}(F sigma^3) = <sigma^2, E>",
               C.same_elements(_gen(c, "K2", "sigma2", "E")))
    return bundle.passed, bundle.witness()


@claim("L3.6.not-e2", "amalgam.h-not-e2", "(H1, H2; H12) is not of shape E2", group="H")
def _h_not_e2(c: Construction) -> Outcome:
    bundle = shape_E2(c.amalgams["H"], c.refs)
    return not bundle.passed, {"failed_items": bundle.failed()}


def _stabilizer_amalgam(c: Construction, group: str) -> Outcome:
    base = c.base[group]
    bundle = (shape_D2 if group == "H" else shape_E2)(c.amalgams[group], c.refs)
    checks = {
        "x1": c.analysis.stabilizer(0, group).same_elements(base[Side.ONE]),
        "x2": c.analysis.stabilizer(1, group).same_elements(base[Side.TWO]),
        "shape": bundle.passed,
    }
    return all(checks.values()), {**checks, "failed_items": bundle.failed()}


@claim("T1.1.iv", "amalgam.h-stabilizers",
       "(H_x1, H_x2; H_x1x2) = (H1, H2; H12), of shape AGL2(3,S) and D2", group="H")
def _h_stabilizers(c: Construction) -> Outcome:
    return _stabilizer_amalgam(c, "H")


@claim("T1.1.v", "amalgam.k-stabilizers",
       "(K_x1, K_x2; K_x1x2) = (K1, K2; K12), of shape AGL2(3,S) and E2", group="K")
def _k_stabilizers(c: Construction) -> Outcome:
    return _stabilizer_amalgam(c, "K")


# --- arcs ----------------------------------------------------------------------------------

ARC_COUNTS = {Side.ONE: [1, 4, 8, 24, 48, 144, 288], Side.TWO: [1, 3, 9, 18, 54, 108, 324]}


@claim("T1.1.i", "arcs.counts",
       "|Delta(x1)| = 4, |Delta(x2)| = 3 and s-arc counts for s <= 6 match the valency products")
def _arc_counts(c: Construction) -> Outcome:
    found = {int(side): [len(enumerate_arcs(c.graph, v, s)) for s in range(7)] for v, side in zip((0, 1), Side)}
    valency = {"x1": int(c.graph.neighbors(0).size), "x2": int(c.graph.neighbors(1).size)}
    passed = found == {int(k): v for k, v in ARC_COUNTS.items()} and valency == {"x1": 4, "x2": 3}
    return passed, {"counts": found, "valency": valency}


def _orbit_table(c: Construction, group: str, smax: int = 6) -> Dict[str, List[int]]:
    return {f"x{v + 1}.s{s}": c.analysis.arc_orbits(v, s, group).sizes for v in (0, 1) for s in range(1, smax + 1)}


def _local_five(c: Construction, group: str) -> Outcome:
    best = c.analysis.max_local_s(group)
    return best == 5, {"max_s": best, "orbits": _orbit_table(c, group)}


@claim("L3.7.arcs", "arcs.k-local-5", "the graph is locally 5-arc transitive for K and no more", group="K")
def _k_local(c: Construction) -> Outcome:
    return _local_five(c, "K")


@claim("L3.11", "arcs.h-local-5", "the graph is locally 5-arc transitive for H and no more", group="H")
def _h_local(c: Construction) -> Outcome:
    return _local_five(c, "H")


ARC_CHAIN = (
    (("x1", "x2", "x3"), ("A", "B", "C", "Fsigma3", "sigma2")),
    (("x0", "x1", "x2"), ("A", "B", "F", "sigma3", "sigma2")),
    (("x0", "x1", "x2", "x3"), ("A", "B", "sigma2", "Fsigma3")),
    (("x0", "x1", "x2", "x3", "x4"), ("B", "sigma2", "Fsigma3")),
    (("x-1", "x0", "x1", "x2", "x3"), ("A", "B", "sigma2")),
    (("x-1", "x0", "x1", "x2", "x3", "x4"), ("B", "sigma2")),
)


@claim("L3.7.chain", "arcs.k-stabilizer-chain",
       "arc stabilizers along (x-1, ..., x4) have the listed generators", group="K")
def _chain(c: Construction) -> Outcome:
    arc = c.base_arc
    K12 = c.groups["K12"]
    result = {}
    for names, gens in ARC_CHAIN:
        stab = c.analysis.arc_stabilizer([arc[n] for n in names], "K")
        result[",".join(names)] = stab.same_elements(K12.generated(c.labels(gens)))
    alpha = [arc[n] for n in ARC_CHAIN[-1][0]]
    orbit = c.analysis.arc_orbits(alpha[0], 5, "K")
    stab = c.analysis.arc_stabilizer(alpha, "K")
    result["orbit-stabilizer"] = orbit.transitive and orbit.arcs * stab.order == c.analysis.stabilizer(alpha[0], "K").order
    return all(result.values()), result


@claim("L3.7", "arcs.k-alpha-center", "K_alpha = Z(O_3(K_{x1,x2})) of order 9, elementary abelian", group="K")
def _k_alpha(c: Construction) -> Outcome:
    arc = c.base_arc
    stab = c.analysis.arc_stabilizer([arc[n] for n in ARC_CHAIN[-1][0]], "K")
    Z = center(p_core(c.groups["K12"], 3))
    checks = {"center": stab.same_elements(Z), "iso": iso_check(stab, c.refs["E9"]).isomorphic}
    return all(checks.values()), {**checks, "order": stab.order}


@claim("L3.11.alpha", "arcs.h-alpha", "H_alpha = <B> of order 3", group="H")
def _h_alpha(c: Construction) -> Outcome:
    arc = c.base_arc
    stab = c.analysis.arc_stabilizer([arc[n] for n in ARC_CHAIN[-1][0]], "H")
    return stab.same_elements(_gen(c, "K1", "B")), {"order": stab.order}


def _six_at_two(c: Construction, group: str) -> Dict[str, Any]:
    summary = c.analysis.arc_orbits(1, 6, group)
    return {"transitive": summary.transitive, "arcs": summary.arcs, "orbits": summary.sizes}


@claim("L3.9", "arcs.k-alpha-tail",
       "K_alpha is transitive on Delta(x-1) minus x0, so K_x2 is transitive on the 324 6-arcs from x2", group="K")
def _k_tail(c: Construction) -> Outcome:
    arc = c.base_arc
    alpha = [arc[n] for n in ARC_CHAIN[-1][0]]
    action = c.analysis.action(alpha[0], "K", 5)
    stab = action.fixing(alpha)
    tail = [w for w in c.graph.neighbors(arc["x-1"]).tolist() if w != arc["x0"]]
    orbits = action.orbits_of(stab, action.positions(tail))
    six = _six_at_two(c, "K")
    return len(orbits) == 1 and six["transitive"], {"orbits": len(orbits), "points": len(tail), "six_arcs": six}


@claim("T1.1.iii", "arcs.six-arcs", "H_x2 and K_x2 are transitive on the 324 6-arcs starting at x2")
def _six_arcs(c: Construction) -> Outcome:
    result = {group: _six_at_two(c, group) for group in ("H", "K")}
    return all(r["transitive"] and r["arcs"] == 324 for r in result.values()), result


@claim("L3.11.ii", "arcs.six-arcs-valency4", "6-arc orbits at the valency-4 vertex x1 (reported, not pinned)",
       informational=True)
def _six_four(c: Construction) -> Outcome:
    result = {}
    for group in ("H", "K"):
        summary = c.analysis.arc_orbits(0, 6, group)
        result[group] = {"arcs": summary.arcs, "orbits": summary.count, "sizes": summary.sizes}
    note = "6-arc transitivity at a valency-4 vertex would need 288 | |G_x1|; computed orbit counts are recorded"
    return True, {**result, "note": note}


# --- local structure -----------------------------------------------------------------------


def _characteristic(c: Construction, group: str) -> Outcome:
    bundle = c.characteristic(group)
    return bundle.passed, {**bundle.witness(), "reduction": "edge-transitivity: base edge plus a random sample"}


@claim("T1.1.characteristic", "local.characteristic-h", "the H-graph is of local characteristic 3", group="H")
def _char_h(c: Construction) -> Outcome:
    return _characteristic(c, "H")


@claim("L3.8", "local.characteristic-k", "the K-graph is of local characteristic 3", group="K")
def _char_k(c: Construction) -> Outcome:
    return _characteristic(c, "K")


@claim("T1.1.ii", "local.pushing-up",
       "for G in {H, K}: local characteristic 3 and O_3(G_x1^[1]) <= O_3(G_x2^[1])")
def _pushing(c: Construction) -> Outcome:
    bundles = {group: pushing_up(c.analysis, group, c.characteristic(group)) for group in ("H", "K")}
    return all(b.passed for b in bundles.values()), {group: b.witness() for group, b in bundles.items()}


@claim("L3.7.centralizers", "local.centralizers", "C_K1(Qhat1) <= Qhat1 and C_K2(Qhat2) <= Qhat2", group="K")
def _centralizers(c: Construction) -> Outcome:
    g = c.groups
    checks = {
        "k1": centralizer(g["K1"], g["Qhat1"]).is_subgroup_of(g["Qhat1"]),
        "k2": centralizer(g["K2"], g["Qhat2"]).is_subgroup_of(g["Qhat2"]),
    }
    return all(checks.values()), checks


# --- kernels -------------------------------------------------------------------------------


def _kernel_side(c: Construction, group: str, side: Side) -> Outcome:
    bundle = verify_kernel_theorems(c.analysis, group, c.refs, sides=(side,))
    return bundle.passed, bundle.witness()


@claim("T1.2.i", "kernels.h-x1", "H_x1^[1] = E9:2, H_x1^[2] = W1 = E9, H_x1^[3] = 1, H_x1/H_x1^[1] = Sym4",
       group="H")
def _kernels_h1(c: Construction) -> Outcome:
    return _kernel_side(c, "H", Side.ONE)


@claim("T1.2.ii", "kernels.h-x2", "H_x2/H_x2^[1] = Sym3, W2 = O_3(H_x2^[1]) special of order 27, "
                                  "H_x2^[2] = H_x2^[3] of order 3, H_x2^[4] = 1", group="H")
def _kernels_h2(c: Construction) -> Outcome:
    return _kernel_side(c, "H", Side.TWO)


@claim("T1.2.iii", "kernels.k-x1", "K_x1/K_x1^[1] = Sym4, kernel chain at x1 ends with K_x1^[5] = 1", group="K")
def _kernels_k1(c: Construction) -> Outcome:
    return _kernel_side(c, "K", Side.ONE)


@claim("T1.2.iv", "kernels.k-x2", "K_x2/K_x2^[1] = Sym3, kernel chain at x2 ends with K_x2^[4] = 1", group="K")
def _kernels_k2(c: Construction) -> Outcome:
    return _kernel_side(c, "K", Side.TWO)


@claim("T1.2", "kernels.hat-cores", "O_3(K_xi^[1]) = O_3(H_xi^[1]) x C3 for i = 1, 2")
def _hat_cores(c: Construction) -> Outcome:
    bundle = hat_cores_check(c.analysis, c.refs)
    return bundle.passed, bundle.witness()


def _kernel_elements(c: Construction, group: str, v: int, expected: Dict[int, Tuple[str, ...]]) -> Outcome:
    home = ("K1", "K2")[v]
    checks = {}
    for i, names in expected.items():
        kernel = c.analysis.kernel(v, i, group)
        checks[f"x{v + 1}-{i}"] = kernel.order == 1 if not names else kernel.same_elements(_gen(c, home, *names))
    return all(checks.values()), checks


@claim("L3.8.i", "kernels.k-x1-elements",
       "K_x1^[1] = Qhat1 <F>, K_x1^[2] = Qhat1, K_x1^[3] = K_x1^[4] = <sigma^2>, K_x1^[5] = 1", group="K")
def _k_x1_elements(c: Construction) -> Outcome:
    return _kernel_elements(c, "K", 0, {
        1: ("A", "B", "sigma2", "F"),
        2: ("A", "B", "sigma2"),
        3: ("sigma2",),
        4: ("sigma2",),
        5: (),
    })


@claim("L3.8.ii", "kernels.k-x2-elements",
       "K_x2^[1] = Qhat2 <F sigma^3>, K_x2^[2] = K_x2^[3] = <sigma^2, B>, K_x2^[4] = 1", group="K")
def _k_x2_elements(c: Construction) -> Outcome:
    return _kernel_elements(c, "K", 1, {
        1: ("A", "B", "C", "sigma2", "Fsigma3"),
        2: ("sigma2", "B"),
        3: ("sigma2", "B"),
        4: (),
    })


@claim("L3.11.i", "kernels.h-elements",
       "H_x1^[1] = Q1 <F>, H_x1^[2] = Q1, H_x1^[3] = 1; H_x2^[1] = Q2 <F sigma^3>, H_x2^[2] = H_x2^[3] = <B>, "
       "H_x2^[4] = 1", group="H")
def _h_elements(c: Construction) -> Outcome:
    first, at_x1 = _kernel_elements(c, "H", 0, {1: ("A", "B", "F"), 2: ("A", "B"), 3: ()})
    second, at_x2 = _kernel_elements(c, "H", 1, {1: ("A", "B", "C", "Fsigma3"), 2: ("B",), 3: ("B",), 4: ()})
    return first and second, {**at_x1, **at_x2}


@claim("T1.2.remark", "kernels.k-remark", "K_x1^[3] != 1", group="K")
def _remark(c: Construction) -> Outcome:
    order = c.analysis.kernel(0, 3, "K").order
    return order > 1, {"order": order}


# --- extensions ----------------------------------------------------------------------------


@claim("NS", "extensions.non-split", "some G_z does not split over O_3(G_z^[1]), G in {H, K}, z in {x1, x2}")
def _non_split(c: Construction) -> Outcome:
    result = {}
    for group in ("H", "K"):
        for v in (0, 1):
            G = c.analysis.stabilizer(v, group)
            O = _sub(G, p_core(c.analysis.kernel(v, 1, group), 3))
            split = is_split_extension(G, O)
            state = "inconclusive" if split.inconclusive else ("split" if split.split else "non-split")
            result[f"{group}.x{v + 1}"] = {"extension": state, "tried": split.tried}
    return any(r["extension"] == "non-split" for r in result.values()), result


# --- evaluation ----------------------------------------------------------------------------


def evaluate_claim(construction: Construction, item: Claim) -> ClaimRecord:
    started = time.perf_counter()
    error = None
    try:
        passed, witness = item.check(construction)
        if item.informational:
            verdict = Verdict.INFO
        else:
            verdict = Verdict.PASS if passed else Verdict.FAIL
    except Exception as e:
        logger.error(f"claim {item.claim_id} raised: {e}\n{traceback.format_exc()}")
        verdict, witness, error = Verdict.FAIL, {}, f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - started
    logger.info(f"{item.claim_id} ({item.label}): {verdict.value} ({elapsed:.2f}s)")
    return ClaimRecord(claim_id=item.claim_id, label=item.label, statement=item.statement, group=item.group,
                       verdict=verdict, witness=witness, error=error, wall_time=round(elapsed, 3))


def evaluate(construction: Construction, prefixes: Sequence[str] = (),
             scope: GroupScope = GroupScope.BOTH) -> List[ClaimRecord]:
    records = []
    for item in registry.claims:
        if registry.selected(item, prefixes, scope):
            records.append(evaluate_claim(construction, item))
        else:
            records.append(ClaimRecord(claim_id=item.claim_id, label=item.label, statement=item.statement,
                                       group=item.group, verdict=Verdict.SKIPPED))
    return records


def environment_block(construction: Construction) -> EnvironmentBlock:
    relations = construction.relations
    return EnvironmentBlock(
        modulus=construction.modulus,
        modulus_bits=f"{construction.modulus:b}",
        commutator_convention=relations.convention.value if relations.convention else None,
        group_hash=construction.group_hash,
        threads=construction.threads,
        versions={"numpy": np.__version__, "networkx": nx.__version__, "pydantic": pydantic.VERSION},
    )


def run_verification(construction: Construction, prefixes: Sequence[str] = (),
                     scope: GroupScope = GroupScope.BOTH) -> VerificationReport:
    started = time.perf_counter()
    unknown = [p for p in prefixes if not any(registry.selected(c, [p], GroupScope.BOTH) for c in registry.claims)]
    if unknown:
        raise ValueError(f"no claims match {', '.join(unknown)}")
    report = VerificationReport(environment=environment_block(construction), coverage=list(COVERAGE))
    report.claims = evaluate(construction, prefixes, scope)
    report.notes.append(f"graph source: {construction.graph_source}")
    report.wall_time = round(time.perf_counter() - started, 3)
    return report.finalize()
