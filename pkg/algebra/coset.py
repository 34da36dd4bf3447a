"""Bipartite coset graph on the right cosets of two vertex stabilizers.

Vertex (i, g) stands for the right coset K_i g, represented by the smallest
projective code among {k g : k in K_i}. A group element h maps K_i g to
K_i g h, and the stabilizer of K_i g is g^-1 K_i g. K_1 g and K_2 g' are
adjacent when the cosets intersect; the neighbours of K_1 g are K_2 t g for t
in a right transversal of K_1 & K_2 in K_1 (and dually).
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConstructionError
from .grp import SmallGroup, conjugate_group
from .psu import TWISTS, GroupElement, SemilinearUnitaryGroup, unpack

logger = logging.getLogger("delta_amalgam.coset")

INT64_MAX = np.iinfo(np.int64).max
BATCH = 64
# a larger BFS means the coset convention is broken
VERTEX_CAP = 1_000_000


class Side(IntEnum):
    ONE = 1
    TWO = 2

    @property
    def other(self) -> "Side":
        return Side.TWO if self is Side.ONE else Side.ONE


@dataclass(frozen=True)
class CosetVertex:
    id: int
    side: Side
    rep: int


class CosetSpace:
    """Canonical representatives of right cosets of one stabilizer K."""

    def __init__(self, unitary: SemilinearUnitaryGroup, K: SmallGroup, side: Side):
        self.unitary = unitary
        self.K = K
        self.side = side
        mats, twists = unitary.unpack_many(np.asarray(K.elements, dtype=np.int64))
        frob = unitary.field.frob_table
        self.twisted = np.stack([frob[k][mats] for k in range(TWISTS)])
        self.leading = np.ascontiguousarray(self.twisted[:, :, 0, :])
        self.twists = twists
        self.scalars = np.asarray(unitary.scalars, dtype=np.uint8)

    def canon_many(self, mats: np.ndarray, twists: np.ndarray) -> np.ndarray:
        """Canonical codes of K g for a batch of exact elements g = (mats, twists).

        The leading rows of every k g and its scalar multiples are compared
        first; only the candidates tied on the smallest leading row are
        multiplied out in full.
        """
        mul = self.unitary.field.mul_table
        m = mats.shape[0]
        lead = self.leading[twists]
        rows = np.bitwise_xor.reduce(mul[lead[:, :, :, None], mats[:, None, :, :]], axis=2)
        scaled = mul[self.scalars[:, None, None, None], rows[None]].astype(np.int64)
        keys = (scaled[..., 0] << 12) | (scaled[..., 1] << 6) | scaled[..., 2]
        best = keys.min(axis=(0, 2))
        si, mi, ki = np.nonzero(keys == best[None, :, None])
        full = self.unitary.mat_mul_many(self.twisted[twists[mi], ki], mats[mi])
        full = mul[self.scalars[si][:, None, None], full]
        codes = self.unitary.pack_many(full, (self.twists[ki] + twists[mi]) % TWISTS)
        out = np.full(m, INT64_MAX, dtype=np.int64)
        np.minimum.at(out, mi, codes)
        return out

    def canon_batched(self, mats: np.ndarray, twists: np.ndarray, threads: int = 1) -> np.ndarray:
        chunks = [(mats[i:i + BATCH], twists[i:i + BATCH]) for i in range(0, mats.shape[0], BATCH)]
        if not chunks:
            return np.zeros(0, dtype=np.int64)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(lambda c: self.canon_many(*c), chunks))
        else:
            parts = [self.canon_many(*c) for c in chunks]
        return np.concatenate(parts)

    def canon(self, g: GroupElement) -> int:
        mats = np.asarray(g.mat, dtype=np.uint8).reshape(1, 3, 3)
        return int(self.canon_many(mats, np.asarray([g.twist]))[0])


def coset_canon(space: CosetSpace, g: GroupElement) -> GroupElement:
    return unpack(space.canon(g))


def right_transversal(K: SmallGroup, sub: SmallGroup) -> List[int]:
    """Representatives t with K = union of sub * t, first element of each coset in K's order."""
    sub_idx = K.locate(sub)
    covered = np.zeros(K.order, dtype=bool)
    reps = []
    for t in range(K.order):
        if not covered[t]:
            covered[K.table[sub_idx, t]] = True
            reps.append(K.elements[t])
    return reps


def vertex_key(side: int, code: int) -> int:
    return (int(code) << 2) | int(side)


class CosetGraph:
    """CSR adjacency with per-vertex side and representative."""

    def __init__(self, sides: np.ndarray, reps: np.ndarray, offsets: np.ndarray, targets: np.ndarray):
        self.sides = np.asarray(sides, dtype=np.int8)
        self.reps = np.asarray(reps, dtype=np.int64)
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.targets = np.asarray(targets, dtype=np.int64)

    @classmethod
    def from_edges(cls, sides: np.ndarray, reps: np.ndarray, edges: np.ndarray) -> "CosetGraph":
        n = len(sides)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        both = np.concatenate([edges, edges[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        counts = np.bincount(both[:, 0], minlength=n)
        offsets = np.concatenate([[0], np.cumsum(counts)])
        return cls(sides, reps, offsets, both[:, 1])

    @property
    def num_vertices(self) -> int:
        return len(self.sides)

    @property
    def num_edges(self) -> int:
        return len(self.targets) // 2

    @cached_property
    def side_counts(self) -> Dict[Side, int]:
        return {side: int((self.sides == side).sum()) for side in Side}

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def index(self) -> Dict[int, int]:
        return {vertex_key(s, r): i for i, (s, r) in enumerate(zip(self.sides.tolist(), self.reps.tolist()))}

    def lookup(self, side: int, code: int) -> int:
        return self.index[vertex_key(side, code)]

    def vertex(self, v: int) -> CosetVertex:
        return CosetVertex(int(v), Side(int(self.sides[v])), int(self.reps[v]))

    def neighbors(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v]:self.offsets[v + 1]]

    def edge_array(self) -> np.ndarray:
        """Edges (u, v) with u < v, sorted lexicographically."""
        sources = np.repeat(np.arange(self.num_vertices), self.degrees)
        keep = sources < self.targets
        return np.stack([sources[keep], self.targets[keep]], axis=1)

    def ball(self, v: int, radius: int) -> Tuple[np.ndarray, np.ndarray]:
        """Vertices within ``radius`` of v in BFS order, with their distances."""
        order = [int(v)]
        distance = {int(v): 0}
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            if distance[u] == radius:
                continue
            for w in self.neighbors(u).tolist():
                if w not in distance:
                    distance[w] = distance[u] + 1
                    order.append(w)
        return np.asarray(order, dtype=np.int64), np.asarray([distance[u] for u in order], dtype=np.int64)

    def is_bipartite_biregular(self) -> bool:
        src = np.repeat(np.arange(self.num_vertices), self.degrees)
        if (self.sides[src] == self.sides[self.targets]).any():
            return False
        return bool((self.degrees[self.sides == Side.ONE] == 4).all()
                    and (self.degrees[self.sides == Side.TWO] == 3).all())


def _compose_left(unitary: SemilinearUnitaryGroup, left_codes: Sequence[int],
                  g_mats: np.ndarray, g_twists: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Exact products t g for every t in ``left_codes`` (columns) and g in the batch (rows)."""
    t_mats, t_twists = unitary.unpack_many(np.asarray(left_codes, dtype=np.int64))
    frob = unitary.field.frob_table
    t_twisted = np.stack([frob[k][t_mats] for k in range(TWISTS)])
    left = t_twisted[g_twists[:, None], np.arange(len(left_codes))[None, :]]
    mats = unitary.mat_mul_many(left, g_mats[:, None, :, :])
    twists = (t_twists[None, :] + g_twists[:, None]) % TWISTS
    return mats, twists


def build_graph(unitary: SemilinearUnitaryGroup, K1: SmallGroup, K2: SmallGroup,
                K12: SmallGroup, threads: int = 1, cap: int = VERTEX_CAP) -> CosetGraph:
    """Level-synchronous BFS from the base edge (K1, K2).

    Vertex 0 is K1, vertex 1 is K2; vertices discovered at the same level are
    numbered in (side, code) order, so ids do not depend on ``threads``.
    Raises ConstructionError once more than ``cap`` vertices are discovered.
    """
    spaces = {Side.ONE: CosetSpace(unitary, K1, Side.ONE), Side.TWO: CosetSpace(unitary, K2, Side.TWO)}
    transversals = {Side.ONE: right_transversal(K1, K12), Side.TWO: right_transversal(K2, K12)}
    logger.info(f"transversal sizes: {len(transversals[Side.ONE])} and {len(transversals[Side.TWO])}")

    identity = unitary.identity_code
    sides: List[int] = [Side.ONE, Side.TWO]
    reps: List[int] = [identity, identity]
    index: Dict[int, int] = {vertex_key(Side.ONE, identity): 0, vertex_key(Side.TWO, identity): 1}
    adjacency: Dict[int, np.ndarray] = {}
    frontier = [0, 1]
    level = 0
    while frontier:
        found: Dict[int, np.ndarray] = {}
        for side in Side:
            members = [v for v in frontier if sides[v] == side]
            if not members:
                continue
            g_mats, g_twists = unitary.unpack_many(np.asarray([reps[v] for v in members], dtype=np.int64))
            mats, twists = _compose_left(unitary, transversals[side], g_mats, g_twists)
            width = mats.shape[1]
            codes = spaces[side.other].canon_batched(mats.reshape(-1, 3, 3), twists.reshape(-1), threads)
            codes = codes.reshape(len(members), width)
            for v, row in zip(members, codes):
                found[v] = row
        fresh = set()
        for v, row in found.items():
            other = Side(sides[v]).other
            for code in row.tolist():
                key = vertex_key(other, code)
                if key not in index:
                    fresh.add((int(other), code))
        if len(sides) + len(fresh) > cap:
            raise ConstructionError(f"coset BFS passed {cap} vertices at level {level + 1}")
        next_frontier = []
        for side, code in sorted(fresh):
            index[vertex_key(side, code)] = len(sides)
            next_frontier.append(len(sides))
            sides.append(side)
            reps.append(code)
        for v, row in found.items():
            other = Side(sides[v]).other
            adjacency[v] = np.asarray([index[vertex_key(other, c)] for c in row.tolist()], dtype=np.int64)
        level += 1
        logger.info(f"level {level}: expanded {len(frontier)}, discovered {len(next_frontier)}, total {len(sides)}")
        frontier = next_frontier

    n = len(sides)
    sides_arr = np.asarray(sides, dtype=np.int8)
    for v in range(n):
        if np.unique(adjacency[v]).size != adjacency[v].size:
            raise ConstructionError(f"vertex {v} has a repeated neighbour")
    one = [v for v in range(n) if sides[v] == Side.ONE]
    two = [v for v in range(n) if sides[v] == Side.TWO]
    from_one = np.array([(v, w) for v in one for w in adjacency[v].tolist()], dtype=np.int64)
    from_two = np.array([(w, v) for v in two for w in adjacency[v].tolist()], dtype=np.int64)
    from_one = from_one[np.lexsort((from_one[:, 1], from_one[:, 0]))] if from_one.size else from_one
    from_two = from_two[np.lexsort((from_two[:, 1], from_two[:, 0]))] if from_two.size else from_two
    if not np.array_equal(from_one, from_two):
        raise ConstructionError("adjacency is not symmetric")
    edges = np.stack([from_one.min(axis=1), from_one.max(axis=1)], axis=1)
    graph = CosetGraph.from_edges(sides_arr, np.asarray(reps, dtype=np.int64), edges)
    logger.info(f"coset graph: {graph.num_vertices} vertices, {graph.num_edges} edges")
    return graph


def coset_spaces(unitary: SemilinearUnitaryGroup, K1: SmallGroup, K2: SmallGroup) -> Dict[Side, CosetSpace]:
    return {Side.ONE: CosetSpace(unitary, K1, Side.ONE), Side.TWO: CosetSpace(unitary, K2, Side.TWO)}


def apply_element(graph: CosetGraph, spaces: Dict[Side, CosetSpace], unitary: SemilinearUnitaryGroup,
                  vertices: Iterable[int], h: int, threads: int = 1) -> np.ndarray:
    """Ids of K_i g h for the given vertices K_i g."""
    vertices = np.asarray(list(vertices), dtype=np.int64)
    result = np.empty(vertices.size, dtype=np.int64)
    h_el = unpack(int(h))
    frob = unitary.field.frob_table
    h_mat = np.asarray(h_el.mat, dtype=np.uint8).reshape(3, 3)
    for side in Side:
        mask = graph.sides[vertices] == side
        if not mask.any():
            continue
        g_mats, g_twists = unitary.unpack_many(graph.reps[vertices[mask]])
        mats = unitary.mat_mul_many(frob[h_el.twist][g_mats], h_mat[None])
        twists = (g_twists + h_el.twist) % TWISTS
        codes = spaces[side].canon_batched(mats, twists, threads)
        index = graph.index
        try:
            result[mask] = [index[vertex_key(side, c)] for c in codes.tolist()]
        except KeyError as exc:
            raise ConstructionError(f"element {h:#x} maps a vertex outside the graph") from exc
    return result


def vertex_stabilizer(graph: CosetGraph, v: int, base: Dict[Side, SmallGroup],
                      unitary: SemilinearUnitaryGroup, label: str = "") -> SmallGroup:
    """Stabilizer g^-1 K_i g of vertex K_i g, for the stabilizers ``base`` of the base edge."""
    vertex = graph.vertex(v)
    K = base[vertex.side]
    if vertex.rep == unitary.identity_code:
        return K
    return conjugate_group(K, vertex.rep, unitary, name=f"{label or K.name}^{v}")


def group_order_from_graph(graph: CosetGraph, K1: SmallGroup, K2: SmallGroup) -> int:
    """|<K1, K2>| from the vertex orbits, which are the two sides of the graph."""
    one = graph.side_counts[Side.ONE] * K1.order
    two = graph.side_counts[Side.TWO] * K2.order
    if one != two:
        raise ConstructionError(f"orbit-stabilizer mismatch: {one} != {two}")
    return one


def edge_orbit_size(graph: CosetGraph, images: Iterable[np.ndarray], edge: Tuple[int, int] = (0, 1)) -> int:
    """Size of the orbit of ``edge`` under the vertex permutations ``images``."""
    edges = graph.edge_array().astype(np.int64)
    n = graph.num_vertices
    keys = edges[:, 0] * n + edges[:, 1]
    moves = []
    for image in images:
        image = np.asarray(image, dtype=np.int64)
        u, v = image[edges[:, 0]], image[edges[:, 1]]
        moved = np.minimum(u, v) * n + np.maximum(u, v)
        at = np.searchsorted(keys, moved)
        if (at >= keys.size).any() or not np.array_equal(keys[np.minimum(at, keys.size - 1)], moved):
            raise ConstructionError("a permutation does not map edges to edges")
        moves.append(at)
    start = int(np.searchsorted(keys, min(edge) * n + max(edge)))
    if start >= keys.size or keys[start] != min(edge) * n + max(edge):
        raise ConstructionError(f"{edge} is not an edge")
    seen = np.zeros(keys.size, dtype=bool)
    seen[start] = True
    frontier = np.asarray([start])
    while frontier.size:
        reached = np.unique(np.concatenate([move[frontier] for move in moves])) if moves else frontier[:0]
        frontier = reached[~seen[reached]]
        seen[frontier] = True
    return int(seen.sum())


def group_order_from_edges(graph: CosetGraph, images: Iterable[np.ndarray], edge_stabilizer: SmallGroup) -> int:
    """|G| as the orbit of the base edge times its stabilizer, for G generated by ``images``."""
    return edge_orbit_size(graph, images) * edge_stabilizer.order

