"""s-arcs of the coset graph and the local action of vertex stabilizers.

A vertex stabilizer acts on the ball of radius r around its vertex. The
action of each generator is computed through coset canonicalisation; the
action of every other element is composed along the Cayley graph of the
stabilizer, with a few elements re-checked directly.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .checks import CheckBundle
from .coset import CosetGraph, CosetSpace, Side, apply_element, vertex_stabilizer
from .errors import ConstructionError
from .grp import (
    PermutationOps,
    QuotientGroup,
    SmallGroup,
    center,
    centralizer,
    closure,
    direct_product,
    is_split_extension,
    iso_check,
    p_core,
    quotient,
    structure_predicates,
)
from .psu import SemilinearUnitaryGroup

logger = logging.getLogger("delta_amalgam.arcs")

Arc = Tuple[int, ...]
BASE_VERTICES = (0, 1)


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def classes(self) -> List[List[int]]:
        groups: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(groups.values(), key=lambda c: (-len(c), c[0]))


def enumerate_arcs(graph: CosetGraph, v: int, s: int) -> List[Arc]:
    """All s-arcs (x0, ..., xs) with x0 = v and x_{i-1} != x_{i+1}."""
    arcs: List[Arc] = [(int(v),)]
    for _ in range(s):
        extended = []
        for arc in arcs:
            previous = arc[-2] if len(arc) > 1 else -1
            for w in graph.neighbors(arc[-1]).tolist():
                if w != previous:
                    extended.append(arc + (w,))
        arcs = extended
    return arcs


class LocalAction:
    """Permutation action of a vertex stabilizer on the ball of radius ``radius``."""

    def __init__(self, graph: CosetGraph, spaces: Dict[Side, CosetSpace], unitary: SemilinearUnitaryGroup,
                 center_vertex: int, stabilizer: SmallGroup, radius: int, *, threads: int = 1,
                 seed: int = 0, spot_checks: int = 4):
        self.graph = graph
        self.center = int(center_vertex)
        self.stabilizer = stabilizer
        self.radius = radius
        self.ball, self.distance = graph.ball(center_vertex, radius)
        self._position = np.full(graph.num_vertices, -1, dtype=np.int64)
        self._position[self.ball] = np.arange(self.ball.size)

        def local_image(code: int) -> np.ndarray:
            images = self._position[apply_element(graph, spaces, unitary, self.ball, code, threads)]
            if (images < 0).any():
                raise ConstructionError(f"stabilizer of {self.center} does not preserve its ball")
            return images

        self.generator_indices = stabilizer.small_generating_set(seed)
        generator_perms = [local_image(stabilizer.elements[g]) for g in self.generator_indices]
        self.perms = self._compose(generator_perms)
        self.generator_perms = generator_perms

        rng = random.Random(seed)
        for _ in range(min(spot_checks, stabilizer.order - 1)):
            x = rng.randrange(1, stabilizer.order)
            if not np.array_equal(local_image(stabilizer.elements[x]), self.perms[x]):
                raise ConstructionError(f"composed action disagrees with direct action at vertex {self.center}")

    def _compose(self, generator_perms: Sequence[np.ndarray]) -> np.ndarray:
        G = self.stabilizer
        perms = np.empty((G.order, self.ball.size), dtype=np.int64)
        perms[0] = np.arange(self.ball.size)
        seen = np.zeros(G.order, dtype=bool)
        seen[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        while frontier.size:
            parts = []
            for s, p in zip(self.generator_indices, generator_perms):
                targets = G.table[frontier, s]
                fresh = ~seen[targets]
                if not fresh.any():
                    continue
                uniq, first = np.unique(targets[fresh], return_index=True)
                # u (x s) = (u x) s
                perms[uniq] = p[perms[frontier[fresh][first]]]
                seen[uniq] = True
                parts.append(uniq)
            frontier = np.unique(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)
        if not seen.all():
            raise ConstructionError("stabilizer generators do not generate the stabilizer")
        return perms

    def positions(self, vertices: Iterable[int]) -> np.ndarray:
        pos = self._position[np.asarray(list(vertices), dtype=np.int64)]
        if (pos < 0).any():
            raise ValueError(f"vertices outside the radius-{self.radius} ball of {self.center}")
        return pos

    def fixing(self, vertices: Iterable[int], name: str = "") -> SmallGroup:
        pos = self.positions(vertices)
        mask = (self.perms[:, pos] == pos[None, :]).all(axis=1)
        return self.stabilizer.subgroup(np.flatnonzero(mask), name=name)

    def kernel(self, i: int) -> SmallGroup:
        if i > self.radius:
            raise ValueError(f"kernel radius {i} exceeds ball radius {self.radius}")
        return self.fixing(self.ball[self.distance <= i], name=f"{self.stabilizer.name}^[{i}]")

    def local_arcs(self, s: int) -> np.ndarray:
        if s > self.radius:
            raise ValueError(f"{s}-arcs leave the radius-{self.radius} ball")
        arcs = enumerate_arcs(self.graph, self.center, s)
        return self.positions(np.asarray(arcs).ravel()).reshape(len(arcs), s + 1)

    def orbits(self, local_rows: np.ndarray) -> List[List[int]]:
        """Orbits of the stabilizer on a set of tuples of ball positions (row indices)."""
        keys = {tuple(row): i for i, row in enumerate(local_rows.tolist())}
        uf = UnionFind(len(keys))
        for p in self.generator_perms:
            for i, row in enumerate(p[local_rows].tolist()):
                uf.union(i, keys[tuple(row)])
        return uf.classes()

    def orbits_of(self, subgroup: SmallGroup, local_points: np.ndarray) -> List[List[int]]:
        """Orbits of a subgroup of the stabilizer on single ball positions."""
        idx = self.stabilizer.locate(subgroup)
        images = self.perms[idx][:, local_points]
        seen: Dict[int, int] = {}
        orbits: List[List[int]] = []
        for j, point in enumerate(local_points.tolist()):
            if point in seen:
                continue
            orbit = sorted(set(images[:, j].tolist()))
            for q in orbit:
                seen[q] = len(orbits)
            orbits.append(orbit)
        return orbits

    def induced_on_neighbors(self) -> QuotientGroup:
        return quotient(self.stabilizer, self.kernel(1), name=f"{self.stabilizer.name} on neighbours")

    def neighbor_permutation_image(self) -> SmallGroup:
        """The permutation group induced on the neighbours, built from generator images."""
        neighbours = np.flatnonzero(self.distance == 1)
        relabel = {int(p): i for i, p in enumerate(neighbours)}
        gens = [tuple(relabel[int(x)] for x in p[neighbours]) for p in self.generator_perms]
        return closure(gens, PermutationOps(len(neighbours)), name="induced")


@dataclass
class OrbitSummary:
    vertex: int
    s: int
    group: str
    arcs: int
    sizes: List[int] = field(default_factory=list)
    representatives: List[Arc] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def transitive(self) -> bool:
        return self.count == 1

    def describe(self) -> str:
        sizes = ", ".join(str(x) for x in self.sizes)
        return f"orbits: {self.count}, size {sizes}"


class ArcAnalysis:
    """Local actions of H and K on the coset graph, cached per (group, vertex)."""

    def __init__(self, graph: CosetGraph, spaces: Dict[Side, CosetSpace], unitary: SemilinearUnitaryGroup,
                 base: Dict[str, Dict[Side, SmallGroup]], *, threads: int = 1, seed: int = 0):
        self.graph = graph
        self.spaces = spaces
        self.unitary = unitary
        self.base = base
        self.threads = threads
        self.seed = seed
        self._actions: Dict[Tuple[str, int], LocalAction] = {}

    def stabilizer(self, v: int, group: str) -> SmallGroup:
        return vertex_stabilizer(self.graph, v, self.base[group], self.unitary, label=f"{group}_{v}")

    def action(self, v: int, group: str, radius: int) -> LocalAction:
        cached = self._actions.get((group, v))
        if cached is not None and cached.radius >= radius:
            return cached
        logger.debug(f"local action of {group} at {v}, radius {radius}")
        action = LocalAction(self.graph, self.spaces, self.unitary, v, self.stabilizer(v, group), radius,
                             threads=self.threads, seed=self.seed)
        self._actions[(group, v)] = action
        return action

    def arc_orbits(self, v: int, s: int, group: str) -> OrbitSummary:
        action = self.action(v, group, s)
        local = action.local_arcs(s)
        orbits = action.orbits(local)
        reps = [tuple(int(x) for x in action.ball[local[orbit[0]]]) for orbit in orbits]
        return OrbitSummary(v, s, group, len(local), [len(o) for o in orbits], reps)

    def max_local_s(self, group: str, smax: int = 8, vertices: Sequence[int] = BASE_VERTICES) -> int:
        """Largest s <= smax with every listed vertex stabilizer transitive on s-arcs."""
        best = 0
        for s in range(1, smax + 1):
            if not all(self.arc_orbits(v, s, group).transitive for v in vertices):
                break
            best = s
        return best

    def arc_stabilizer(self, arc: Sequence[int], group: str) -> SmallGroup:
        action = self.action(arc[0], group, len(arc) - 1)
        return action.fixing(arc, name=f"{group}_arc")

    def kernel(self, z: int, i: int, group: str) -> SmallGroup:
        return self.action(z, group, i).kernel(i)

    def kernel_chain(self, z: int, group: str, limit: int = 6) -> List[SmallGroup]:
        """[G_z, G_z^[1], ...] up to the first trivial kernel."""
        chain = [self.stabilizer(z, group)]
        for i in range(1, limit + 1):
            chain.append(self.kernel(z, i, group))
            if chain[-1].order == 1:
                break
        return chain

    def direct_kernel_one(self, z: int, group: str) -> SmallGroup:
        """G_z^[1] by applying every element of G_z to the neighbours of z directly."""
        G = self.stabilizer(z, group)
        neighbours = self.graph.neighbors(z)
        keep = [i for i, h in enumerate(G.elements)
                if np.array_equal(apply_element(self.graph, self.spaces, self.unitary, neighbours, h), neighbours)]
        return G.subgroup(keep, name=f"{G.name}^[1]")


# --- kernel and local structure checks -----------------------------------------------------

KERNEL_SHAPES = {
    # (group, side): induced action, deeper kernels as (radius, description)
    ("H", Side.ONE): ("Sym4", 3),
    ("H", Side.TWO): ("Sym3", 4),
    ("K", Side.ONE): ("Sym4", 5),
    ("K", Side.TWO): ("Sym3", 4),
}


def _is_trivial(G: SmallGroup) -> bool:
    return G.order == 1


def verify_kernel_theorems(analysis: ArcAnalysis, group: str, refs: Dict[str, SmallGroup],
                           sides: Sequence[Side] = tuple(Side)) -> CheckBundle:
    """Kernel chains at the base vertices on ``sides`` against the expected structure."""
    bundle = CheckBundle(f"kernels of {group}")
    for v, side in zip(BASE_VERTICES, Side):
        if side not in sides:
            continue
        induced_name, trivial_at = KERNEL_SHAPES[(group, side)]
        action = analysis.action(v, group, trivial_at)
        label = f"{group}.{int(side)}"
        k1 = action.kernel(1)
        induced = action.induced_on_neighbors()
        bundle.add(f"{label}.induced", f"{group}_z acts on the neighbours of z as {induced_name}",
                   iso_check(induced, refs[induced_name]).isomorphic, order=induced.order)
        direct = analysis.direct_kernel_one(v, group)
        bundle.add(f"{label}.kernel1-direct", "the composed and the direct kernel on the neighbours agree",
                   direct.same_elements(k1), order=k1.order)
        W = p_core(k1, 3)
        split = is_split_extension(k1, W)
        bundle.add(f"{label}.kernel1", "G_z^[1] is O_3(G_z^[1]) extended by an involution, split",
                   k1.order == 2 * W.order and split.split is True, order=k1.order, core_order=W.order)
        kernels = {i: action.kernel(i) for i in range(2, trivial_at + 1)}
        bundle.add(f"{label}.trivial", f"G_z^[{trivial_at}] = 1 and G_z^[{trivial_at - 1}] != 1",
                   _is_trivial(kernels[trivial_at]) and not _is_trivial(kernels[trivial_at - 1]),
                   orders={i: k.order for i, k in kernels.items()})
        Z = center(W)
        if group == "H" and side is Side.ONE:
            bundle.add(f"{label}.kernel2", "G_z^[2] = O_3(G_z^[1])", kernels[2].same_elements(W))
        elif group == "H":
            bundle.add(f"{label}.kernel2", "G_z^[2] = G_z^[3] = Z(O_3(G_z^[1])) of order 3",
                       kernels[2].same_elements(Z) and kernels[3].same_elements(Z) and Z.order == 3)
        elif side is Side.ONE:
            Zs = center(action.stabilizer)
            bundle.add(f"{label}.kernel2", "G_z^[2] = O_3(G_z^[1])", kernels[2].same_elements(W))
            bundle.add(f"{label}.kernel3", "G_z^[3] = G_z^[4] = Z(G_z), cyclic of order 3",
                       kernels[3].same_elements(Zs) and kernels[4].same_elements(Zs)
                       and iso_check(Zs, refs["C3"]).isomorphic, center_order=Zs.order)
        else:
            bundle.add(f"{label}.kernel2", "G_z^[2] = G_z^[3] = Z(O_3(G_z^[1])) elementary of order 9",
                       kernels[2].same_elements(Z) and kernels[3].same_elements(Z)
                       and iso_check(Z, refs["E9"]).isomorphic, center_order=Z.order)

        if group == "H":
            shape = structure_predicates(W)
            if side is Side.ONE:
                bundle.add("H.W1", "O_3(H_x1^[1]) is elementary abelian of order 9",
                           shape.is_elementary_abelian and shape.order == 9)
            else:
                bundle.add("H.W2", "O_3(H_x2^[1]) is special of order 27 and exponent 3",
                           shape.is_special and shape.order == 27 and shape.exponent == 3)
    return bundle


def hat_cores_check(analysis: ArcAnalysis, refs: Dict[str, SmallGroup]) -> CheckBundle:
    """O_3 of the K-kernels is the H-core times a cyclic group of order 3."""
    bundle = CheckBundle("hat cores")
    for v, side in zip(BASE_VERTICES, Side):
        W = p_core(analysis.kernel(v, 1, "H"), 3)
        W_hat = p_core(analysis.kernel(v, 1, "K"), 3)
        target = direct_product(W, refs["C3"])
        bundle.add(f"K.{int(side)}.hat", f"O_3(K_x{int(side)}^[1]) = O_3(H_x{int(side)}^[1]) x C3",
                   iso_check(W_hat, target).isomorphic, order=W_hat.order)
    return bundle


def local_characteristic(analysis: ArcAnalysis, group: str, p: int = 3, samples: int = 100,
                         seed: int = 0) -> CheckBundle:
    """C_{G_x}(O_p(G_z^[1])) <= O_p(G_z^[1]) for z and x in {z} or a neighbour of z.

    Checked on the base edge exhaustively and on ``samples`` further vertices.
    """
    bundle = CheckBundle(f"local characteristic {p} for {group}")
    rng = random.Random(seed)
    graph = analysis.graph
    others = sorted(rng.sample(range(2, graph.num_vertices), min(samples, graph.num_vertices - 2)))
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    for z in others:
        pairs.append((z, z))
        pairs.append((z, int(graph.neighbors(z)[0])))
    cores: Dict[int, SmallGroup] = {}
    failures = []
    for z, x in pairs:
        if z not in cores:
            cores[z] = p_core(analysis.kernel(z, 1, group), p)
        O = cores[z]
        C = centralizer(analysis.stabilizer(x, group), O)
        if not C.is_subgroup_of(O):
            failures.append((z, x))
    bundle.add(f"{group}.base", "condition holds on the base edge",
               not any(z in (0, 1) for z, _ in failures))
    bundle.add(f"{group}.sample", f"condition holds on {len(others)} sampled vertices and a neighbour of each",
               not failures, failures=failures[:10], sampled=len(others))
    return bundle


def pushing_up(analysis: ArcAnalysis, group: str, characteristic: CheckBundle, p: int = 3) -> CheckBundle:
    """Pushing-up type for the 1-arc (x1, x2): local characteristic p and
    O_p(G_x1^[1]) <= O_p(G_x2^[1]).

    ``characteristic`` is the result of ``local_characteristic`` for the same group.
    """
    bundle = CheckBundle(f"pushing up for {group}")
    bundle.add(f"{group}.characteristic", f"the graph is of local characteristic {p}",
               characteristic.passed, failed=characteristic.failed())
    first = p_core(analysis.kernel(0, 1, group), p)
    second = p_core(analysis.kernel(1, 1, group), p)
    bundle.add(f"{group}.containment", f"O_{p}(G_x1^[1]) <= O_{p}(G_x2^[1])",
               first.is_subgroup_of(second), orders=(first.order, second.order))
    return bundle
