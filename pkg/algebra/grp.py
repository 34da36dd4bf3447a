"""Small explicitly enumerated groups.

Every group is a tuple of hashable element labels with the identity at
index 0 and an int32 Cayley table (row = left factor). Subgroups keep the
parent's labels, so subgroups of a common parent compare by label sets.
Conjugation is x^g = g^-1 x g throughout.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from .errors import GroupOrderExceeded

logger = logging.getLogger("delta_amalgam.grp")

DEFAULT_CAP = 20_000

Label = Hashable


class GroupOps(Protocol):
    identity_code: Label

    def mul(self, a: Label, b: Label) -> Label: ...


class FunctionOps:
    """Ops built from a multiplication callable (pair groups and other tiny constructions)."""

    def __init__(self, identity: Label, mul: Callable[[Label, Label], Label]):
        self.identity_code = identity
        self.mul = mul


class PermutationOps:
    """Permutations of range(degree) as tuples, composed left to right: (a*b)[x] = b[a[x]]."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity_code: Tuple[int, ...] = tuple(range(degree))

    @staticmethod
    def mul(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(b[x] for x in a)

    def multiplication_table(self, elements: Sequence[Tuple[int, ...]]) -> np.ndarray:
        perms = np.asarray(elements, dtype=np.int64)
        weights = self.degree ** np.arange(self.degree - 1, -1, -1, dtype=np.int64)
        keys = perms @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]
        table = np.empty((len(elements), len(elements)), dtype=np.int32)
        for i in range(len(elements)):
            products = perms[:, perms[i]] @ weights
            table[i] = order[np.searchsorted(sorted_keys, products)]
        return table


class SmallGroup:
    def __init__(self, elements: Sequence[Label], table: np.ndarray, *, name: str = "",
                 generators: Sequence[Label] = ()):
        self.elements: Tuple[Label, ...] = tuple(elements)
        self.index: Dict[Label, int] = {e: i for i, e in enumerate(self.elements)}
        self.table = np.asarray(table, dtype=np.int32)
        self.name = name
        self.generators: Tuple[Label, ...] = tuple(generators)

    def __repr__(self) -> str:
        return f"SmallGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, label: Label) -> bool:
        return label in self.index

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Label:
        return self.elements[0]

    # --- labels and indices -----------------------------------------------------------

    def idx(self, labels: Iterable[Label]) -> np.ndarray:
        return np.fromiter((self.index[x] for x in labels), dtype=np.int64)

    def labels(self, indices: Iterable[int]) -> List[Label]:
        return [self.elements[int(i)] for i in indices]

    def mul(self, a: Label, b: Label) -> Label:
        return self.elements[self.table[self.index[a], self.index[b]]]

    def inv(self, a: Label) -> Label:
        return self.elements[self.inverse[self.index[a]]]

    @cached_property
    def element_set(self) -> FrozenSet[Label]:
        return frozenset(self.elements)

    def same_elements(self, other: "SmallGroup") -> bool:
        return self.element_set == other.element_set

    def is_subgroup_of(self, other: "SmallGroup") -> bool:
        return self.element_set <= other.element_set

    # --- cached invariants -------------------------------------------------------------

    @cached_property
    def inverse(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        inverse = np.empty(self.order, dtype=np.int64)
        inverse[rows] = cols
        return inverse

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.order
        result = np.zeros(n, dtype=np.int64)
        result[0] = 1
        everything = np.arange(n)
        current = everything.copy()
        k = 1
        while (result == 0).any():
            current = self.table[current, everything]
            k += 1
            hit = (current == 0) & (result == 0)
            result[hit] = k
        return result

    @cached_property
    def conjugation(self) -> np.ndarray:
        """conjugation[g, x] = g^-1 x g."""
        left = self.table[self.inverse]
        return self.table[left, np.arange(self.order)[:, None]]

    @cached_property
    def class_rep(self) -> np.ndarray:
        return self.conjugation.min(axis=0)

    @cached_property
    def class_size(self) -> np.ndarray:
        counts = np.bincount(self.class_rep, minlength=self.order)
        return counts[self.class_rep]

    @cached_property
    def exponent(self) -> int:
        return lcm(*(int(o) for o in np.unique(self.orders)))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    # --- generation and subgroups ------------------------------------------------------

    def generate(self, gens: Iterable[int], cap: Optional[int] = None) -> Optional[np.ndarray]:
        """Sorted indices of the subgroup generated by ``gens``; None once it outgrows ``cap``."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        count = 1
        frontier = np.zeros(1, dtype=np.int64)
        while frontier.size and gens.size:
            reached = self.table[frontier[:, None], gens[None, :]].ravel()
            fresh = np.unique(reached[~seen[reached]])
            if fresh.size == 0:
                break
            seen[fresh] = True
            count += fresh.size
            if cap is not None and count > cap:
                return None
            frontier = fresh
        return np.flatnonzero(seen)

    def subgroup(self, indices: Iterable[int], name: str = "",
                 generators: Sequence[Label] = ()) -> "SmallGroup":
        idx = np.unique(np.asarray(list(indices), dtype=np.int64))
        if idx.size == 0 or idx[0] != 0:
            raise ValueError("a subgroup must contain the identity")
        remap = np.full(self.order, -1, dtype=np.int32)
        remap[idx] = np.arange(idx.size, dtype=np.int32)
        table = remap[self.table[np.ix_(idx, idx)]]
        if (table < 0).any():
            raise ValueError(f"subset of {self.name} is not closed")
        return SmallGroup(self.labels(idx), table, name=name, generators=generators)

    def generated(self, labels: Iterable[Label], name: str = "") -> "SmallGroup":
        labels = list(labels)
        return self.subgroup(self.generate(self.idx(labels)), name=name, generators=labels)

    def locate(self, other: Union["SmallGroup", Iterable[Label]]) -> np.ndarray:
        """Indices in ``self`` of the elements of ``other``."""
        return self.idx(other.elements if isinstance(other, SmallGroup) else other)

    def small_generating_set(self, seed: int = 0, attempts: int = 256) -> List[int]:
        n = self.order
        if n == 1:
            return []
        cyclic = np.flatnonzero(self.orders == n)
        if cyclic.size:
            return [int(cyclic[0])]
        rng = random.Random(seed)
        for _ in range(attempts):
            pair = [rng.randrange(1, n), rng.randrange(1, n)]
            if self.generate(pair).size == n:
                return pair
        gens: List[int] = []
        members = self.generate(gens)
        by_order = np.argsort(-self.orders, kind="stable")
        while members.size < n:
            inside = np.zeros(n, dtype=bool)
            inside[members] = True
            pick = int(next(x for x in by_order if not inside[x]))
            gens.append(pick)
            members = self.generate(gens)
        return gens

    def generator_labels(self, seed: int = 0) -> List[Label]:
        return self.labels(self.small_generating_set(seed))


SubgroupLike = Union[SmallGroup, Sequence[Label]]


def _generating_indices(G: SmallGroup, H: SubgroupLike) -> np.ndarray:
    if isinstance(H, SmallGroup):
        labels = H.generators if H.generators else H.generator_labels()
        return G.locate(labels)
    return G.locate(H)


def _member_mask(G: SmallGroup, H: SubgroupLike) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.locate(H)] = True
    return mask


# --- construction ------------------------------------------------------------------------


def closure(gens: Sequence[Label], ops: GroupOps, cap: int = DEFAULT_CAP, name: str = "") -> SmallGroup:
    """Group generated by ``gens`` under ``ops``; raises GroupOrderExceeded past ``cap``."""
    identity = ops.identity_code
    elements: List[Label] = [identity]
    seen = {identity}
    gens = list(dict.fromkeys(gens))
    i = 0
    while i < len(elements):
        x = elements[i]
        i += 1
        for g in gens:
            y = ops.mul(x, g)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > cap:
                    raise GroupOrderExceeded(cap, name)
    table_builder = getattr(ops, "multiplication_table", None)
    if table_builder is not None:
        table = table_builder(elements)
    else:
        table = generic_table(elements, ops.mul)
    logger.debug(f"closure {name or '?'}: order {len(elements)}")
    return SmallGroup(elements, table, name=name, generators=gens)


def from_elements(elements: Sequence[Label], ops: GroupOps, name: str = "") -> SmallGroup:
    """Group on an explicitly listed element set (identity is moved to the front)."""
    elements = list(dict.fromkeys(elements))
    elements.remove(ops.identity_code)
    elements.insert(0, ops.identity_code)
    table_builder = getattr(ops, "multiplication_table", None)
    table = table_builder(elements) if table_builder is not None else generic_table(elements, ops.mul)
    return SmallGroup(elements, table, name=name)


def generic_table(elements: Sequence[Label], mul: Callable[[Label, Label], Label]) -> np.ndarray:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    return table


def direct_product(G1: SmallGroup, G2: SmallGroup, name: str = "") -> SmallGroup:
    n1, n2 = G1.order, G2.order
    t1 = G1.table.astype(np.int64)
    t2 = G2.table.astype(np.int64)
    table = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    elements = [(a, b) for a in G1.elements for b in G2.elements]
    return SmallGroup(elements, table, name=name or f"{G1.name} x {G2.name}")


def conjugate_group(G: SmallGroup, g: Label, ops: Any, name: str = "") -> SmallGroup:
    """g^-1 G g inside the ambient group of ``ops``; the Cayley table carries over."""
    g_inv = ops.inv(g)
    elements = [ops.mul(ops.mul(g_inv, k), g) for k in G.elements]
    generators = [ops.mul(ops.mul(g_inv, k), g) for k in G.generators]
    return SmallGroup(elements, G.table, name=name, generators=generators)


# --- structural subgroups ----------------------------------------------------------------


def center(G: SmallGroup) -> SmallGroup:
    mask = (G.table == G.table.T).all(axis=1)
    return G.subgroup(np.flatnonzero(mask), name=f"Z({G.name})")


def centralizer(G: SmallGroup, H: SubgroupLike) -> SmallGroup:
    mask = np.ones(G.order, dtype=bool)
    for h in _generating_indices(G, H):
        mask &= G.table[:, h] == G.table[h, :]
    return G.subgroup(np.flatnonzero(mask), name=f"C_{G.name}")


def normalizer(G: SmallGroup, H: SubgroupLike) -> SmallGroup:
    member = _member_mask(G, H)
    everything = np.arange(G.order)
    mask = np.ones(G.order, dtype=bool)
    for h in _generating_indices(G, H):
        # g^-1 h g for every g
        mask &= member[G.table[G.table[G.inverse, h], everything]]
    return G.subgroup(np.flatnonzero(mask), name=f"N_{G.name}")


def normal_closure(G: SmallGroup, X: SubgroupLike) -> SmallGroup:
    idx = G.locate(X.elements if isinstance(X, SmallGroup) else X)
    conjugates = G.conjugation[:, idx]
    return G.subgroup(G.generate(np.unique(conjugates)), name=f"ncl_{G.name}")


def intersect(H1: SmallGroup, H2: SmallGroup, name: str = "") -> SmallGroup:
    keep = [i for i, x in enumerate(H1.elements) if x in H2.index]
    return H1.subgroup(keep, name=name or f"{H1.name} & {H2.name}")


def commutator_subgroup(G: SmallGroup, A: SubgroupLike, B: SubgroupLike) -> SmallGroup:
    a = G.locate(A.elements if isinstance(A, SmallGroup) else A)
    b = G.locate(B.elements if isinstance(B, SmallGroup) else B)
    inv = G.inverse
    # [x, y] = x^-1 y^-1 x y
    left = G.table[inv[a][:, None], inv[b][None, :]]
    right = G.table[a[:, None], b[None, :]]
    comms = np.unique(G.table[left, right])
    return G.subgroup(G.generate(comms), name=f"[{G.name}]")


def derived(G: SmallGroup) -> SmallGroup:
    everything = range(G.order)
    return commutator_subgroup(G, G.labels(everything), G.labels(everything))


def powers(G: SmallGroup, k: int) -> np.ndarray:
    everything = np.arange(G.order)
    current = np.zeros(G.order, dtype=np.int64)
    for _ in range(k):
        current = G.table[current, everything]
    return current


def frattini_p(G: SmallGroup, p: int) -> SmallGroup:
    """Frattini subgroup of a p-group: G' G^p."""
    gens = np.union1d(G.locate(derived(G)), powers(G, p))
    return G.subgroup(G.generate(gens), name=f"Phi({G.name})")


def _p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part


def sylow_subgroup(G: SmallGroup, p: int) -> SmallGroup:
    """Grows a p-subgroup by p-elements of its normalizer until it reaches the full p-part."""
    target = _p_part(G.order, p)
    p_element = np.array([_p_part(int(o), p) == o for o in G.orders])
    members = np.zeros(1, dtype=np.int64)
    while members.size < target:
        inside = np.zeros(G.order, dtype=bool)
        inside[members] = True
        if members.size > 1:
            around = G.locate(normalizer(G, G.labels(members)))
        else:
            around = np.arange(G.order)
        candidates = around[p_element[around] & ~inside[around]]
        members = G.generate(np.append(members, candidates[0]))
    return G.subgroup(members, name=f"Syl{p}({G.name})")


def p_core(G: SmallGroup, p: int) -> SmallGroup:
    P = sylow_subgroup(G, p)
    conjugates = G.conjugation[:, G.locate(P)]
    hits = np.bincount(conjugates.ravel(), minlength=G.order)
    return G.subgroup(np.flatnonzero(hits == G.order), name=f"O{p}({G.name})")


def is_normal(G: SmallGroup, H: SubgroupLike) -> bool:
    member = _member_mask(G, H)
    idx = np.flatnonzero(member)
    return bool(member[G.conjugation[:, idx]].all())


def conjugacy_classes(G: SmallGroup) -> List[List[Label]]:
    classes: Dict[int, List[Label]] = {}
    for i, rep in enumerate(G.class_rep):
        classes.setdefault(int(rep), []).append(G.elements[i])
    return [classes[r] for r in sorted(classes)]


def class_equation_holds(G: SmallGroup) -> bool:
    sizes = [len(c) for c in conjugacy_classes(G)]
    return center(G).order + sum(s for s in sizes if s > 1) == G.order


# --- quotients ---------------------------------------------------------------------------


class QuotientGroup(SmallGroup):
    """G/N with elements labelled by the lowest-index representative of each coset."""

    def __init__(self, parent: SmallGroup, normal: SmallGroup, projection: np.ndarray,
                 representatives: np.ndarray, table: np.ndarray, name: str = ""):
        super().__init__(parent.labels(representatives), table, name=name)
        self.parent = parent
        self.normal = normal
        self.projection = projection
        self.representatives = representatives

    def image(self, label: Label) -> Label:
        return self.elements[self.projection[self.parent.index[label]]]


def quotient(G: SmallGroup, N: SmallGroup, name: str = "") -> QuotientGroup:
    if not is_normal(G, N):
        raise ValueError(f"{N.name} is not normal in {G.name}")
    n_idx = G.locate(N)
    projection = np.full(G.order, -1, dtype=np.int64)
    reps: List[int] = []
    for g in range(G.order):
        if projection[g] < 0:
            projection[G.table[n_idx, g]] = len(reps)
            reps.append(g)
    reps_arr = np.asarray(reps, dtype=np.int64)
    table = projection[G.table[np.ix_(reps_arr, reps_arr)]]
    return QuotientGroup(G, N, projection, reps_arr, table, name=name or f"{G.name}/{N.name}")


# --- predicates --------------------------------------------------------------------------


@dataclass(frozen=True)
class StructurePredicates:
    order: int
    exponent: int
    is_abelian: bool
    is_cyclic: bool
    prime: Optional[int]
    is_elementary_abelian: bool
    is_special: bool
    is_extraspecial: bool


def _prime_of(n: int) -> Optional[int]:
    if n == 1:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    return p if _p_part(n, p) == n else None


def structure_predicates(G: SmallGroup) -> StructurePredicates:
    p = _prime_of(G.order)
    elementary = p is not None and G.is_abelian and G.exponent == p
    special = extraspecial = False
    if p is not None and not G.is_abelian:
        Z = center(G)
        special = Z.same_elements(derived(G)) and Z.same_elements(frattini_p(G, p))
        extraspecial = special and Z.order == p
    return StructurePredicates(
        order=G.order,
        exponent=G.exponent,
        is_abelian=G.is_abelian,
        is_cyclic=bool((G.orders == G.order).any()),
        prime=p,
        is_elementary_abelian=elementary,
        is_special=special,
        is_extraspecial=extraspecial,
    )


# --- isomorphism -------------------------------------------------------------------------


@dataclass
class IsoResult:
    isomorphic: bool
    images: Optional[Dict[Label, Label]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def invariants(G: SmallGroup) -> Tuple[Any, ...]:
    profile = Counter(zip(G.orders.tolist(), G.class_size.tolist()))
    return (
        G.order,
        tuple(sorted(profile.items())),
        center(G).order,
        derived(G).order,
    )


def _extends_to_isomorphism(G1: SmallGroup, G2: SmallGroup, gens: Sequence[int],
                            images: Sequence[int]) -> bool:
    phi = np.full(G1.order, -1, dtype=np.int64)
    phi[0] = 0
    frontier = np.zeros(1, dtype=np.int64)
    while frontier.size:
        fresh_parts = []
        for s, c in zip(gens, images):
            targets = G1.table[frontier, s].astype(np.int64)
            mapped = G2.table[phi[frontier], c].astype(np.int64)
            known = phi[targets] >= 0
            if not np.array_equal(phi[targets[known]], mapped[known]):
                return False
            new_targets, new_images = targets[~known], mapped[~known]
            if new_targets.size:
                uniq, first, inverse = np.unique(new_targets, return_index=True, return_inverse=True)
                if not np.array_equal(new_images[first][inverse], new_images):
                    return False
                phi[uniq] = new_images[first]
                fresh_parts.append(uniq)
        frontier = np.unique(np.concatenate(fresh_parts)) if fresh_parts else np.zeros(0, dtype=np.int64)
    if (phi < 0).any():
        return False
    return np.unique(phi).size == G1.order


def iso_check(G1: SmallGroup, G2: SmallGroup, seed: int = 0) -> IsoResult:
    """Isomorphism test: invariant precheck, then backtracking over generator images."""
    inv1, inv2 = invariants(G1), invariants(G2)
    if inv1 != inv2:
        return IsoResult(False, reason="invariants differ")
    if G1.order == 1:
        return IsoResult(True, images={G1.identity: G2.identity})
    gens = G1.small_generating_set(seed)
    candidates = []
    for k, g in enumerate(gens):
        mask = (G2.orders == G1.orders[g]) & (G2.class_size == G1.class_size[g])
        options = np.flatnonzero(mask)
        if k == 0:
            # an inner automorphism of G2 moves the first image to its class representative
            options = options[G2.class_rep[options] == options]
        candidates.append(options)

    def compatible(chosen: List[int], c: int) -> bool:
        k = len(chosen)
        for j in range(k):
            if G1.orders[G1.table[gens[j], gens[k]]] != G2.orders[G2.table[chosen[j], c]]:
                return False
            if G1.orders[G1.table[gens[j], G1.inverse[gens[k]]]] != G2.orders[G2.table[chosen[j], G2.inverse[c]]]:
                return False
        return True

    def search(chosen: List[int]) -> Optional[List[int]]:
        if len(chosen) == len(gens):
            return chosen if _extends_to_isomorphism(G1, G2, gens, chosen) else None
        for c in candidates[len(chosen)]:
            c = int(c)
            if compatible(chosen, c):
                found = search(chosen + [c])
                if found is not None:
                    return found
        return None

    images = search([])
    if images is None:
        return IsoResult(False, reason="no generator assignment extends to an isomorphism")
    return IsoResult(True, images=dict(zip(G1.labels(gens), G2.labels(images))))


# --- extensions --------------------------------------------------------------------------


@dataclass
class SplitResult:
    split: Optional[bool]
    complement: Optional[SmallGroup] = None
    tried: int = 0

    @property
    def inconclusive(self) -> bool:
        return self.split is None


def is_split_extension(G: SmallGroup, N: SmallGroup, limit: int = 1_000_000) -> SplitResult:
    """Exhaustive complement search over lifts of a generating set of G/N."""
    Q = quotient(G, N)
    if Q.order == 1:
        return SplitResult(True, G.subgroup([0], name="1"))
    if N.order == 1:
        return SplitResult(True, G)
    lifts = [int(Q.representatives[q]) for q in Q.small_generating_set()]
    n_idx = G.locate(N)
    cosets = [G.table[n_idx, r] for r in lifts]
    if N.order ** len(lifts) > limit:
        logger.warning(f"complement search for {G.name} over {N.name} exceeds {limit} lift tuples")
        return SplitResult(None)
    tried = 0
    for combo in itertools.product(*cosets):
        tried += 1
        members = G.generate(combo, cap=Q.order)
        # |C| = |G/N| and C maps onto G/N, so C meets N trivially
        if members is not None and members.size == Q.order:
            return SplitResult(True, G.subgroup(members, name=f"complement in {G.name}"), tried)
    return SplitResult(False, None, tried)
