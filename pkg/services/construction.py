"""Сборка всех объектов: поле, генераторы, подгруппы, граф смежных классов."""
import hashlib
import logging
from functools import cached_property
from typing import Dict, Optional, Sequence

import numpy as np

from algebra.amalgam import Amalgam
from algebra.arcs import ArcAnalysis, local_characteristic
from algebra.checks import CheckBundle
from algebra.coset import CosetGraph, CosetSpace, Side, build_graph, coset_spaces, group_order_from_graph
from algebra.errors import ConstructionError
from algebra.gf64 import GF64
from algebra.grp import SmallGroup, closure, intersect
from algebra.psu import (
    GroupElement,
    RelationReport,
    SemilinearUnitaryGroup,
    Word,
    bar,
    make_generators,
    require_relations,
)
from algebra.reference import reference_groups
from cache.storage import GraphStorage

logger = logging.getLogger("delta_amalgam.construction")

# слова в образующих для каждого именованного элемента
WORDS: Dict[str, Word] = {
    "A": "A",
    "B": "B",
    "C": "C",
    "D": "D",
    "E": "E",
    "F": "F",
    "sigma": "sigma",
    "sigma2": ("sigma", "sigma"),
    "sigma3": ("sigma", "sigma", "sigma"),
    "Fsigma3": ("F", "sigma", "sigma", "sigma"),
}

# порождающие множества именованных подгрупп
SUBGROUPS: Dict[str, Sequence[str]] = {
    "Q1": ("A", "B"),
    "Q2": ("A", "B", "C"),
    "Qstar": ("B", "C"),
    "Qhat1": ("A", "B", "sigma2"),
    "Qhat2": ("A", "B", "C", "sigma2"),
    "S": ("E", "F", "sigma3"),
    "H1": ("A", "B", "C", "D", "sigma3"),
    "H2": ("A", "B", "C", "E", "F", "sigma3"),
    "K1": ("A", "B", "C", "D", "sigma3", "sigma2"),
    "K2": ("A", "B", "C", "E", "F", "sigma3", "sigma2"),
    "H12": ("A", "B", "C", "F", "sigma3"),
    "K12": ("A", "B", "C", "F", "sigma3", "sigma2"),
}

# какая из K1, K2 содержит подгруппу
HOME = {"Q1": "K1", "Q2": "K1", "Qstar": "K1", "Qhat1": "K1", "Qhat2": "K1", "H1": "K1",
        "S": "K2", "H2": "K2"}

EXPECTED_GRAPH = {"side_one": 25_536, "side_two": 34_048, "edges": 102_144}
EXPECTED_K_ORDER = 33_094_656


class Construction:
    """Все объекты вычисляются лениво и кэшируются на экземпляре."""

    def __init__(self, modulus: int, *, storage: Optional[GraphStorage] = None, threads: int = 1,
                 use_cache: bool = True, seed: int = 0, sample_size: int = 100):
        self.modulus = modulus
        self.storage = storage
        self.threads = threads
        self.use_cache = use_cache
        self.seed = seed
        self.sample_size = sample_size
        self.graph_source = "not built"
        self._characteristic: Dict[str, CheckBundle] = {}

    # --- algebra -------------------------------------------------------------------------

    @cached_property
    def field(self) -> GF64:
        return GF64(self.modulus)

    @cached_property
    def unitary(self) -> SemilinearUnitaryGroup:
        return SemilinearUnitaryGroup(self.field)

    @cached_property
    def generators(self) -> Dict[str, GroupElement]:
        return make_generators(self.unitary)

    @cached_property
    def relations(self) -> RelationReport:
        return require_relations(self.unitary, self.generators)

    @cached_property
    def codes(self) -> Dict[str, int]:
        names = list(WORDS)
        return dict(zip(names, bar(self.unitary, self.generators, *(WORDS[n] for n in names))))

    def word_code(self, *names: str) -> int:
        """Проективный код произведения именованных элементов."""
        codes = [self.codes[n] for n in names]
        result = self.unitary.identity_code
        for c in codes:
            result = self.unitary.mul(result, c)
        return result

    def exact(self, *names: str) -> GroupElement:
        factors = []
        for n in names:
            word = WORDS[n]
            factors.extend((word,) if isinstance(word, str) else word)
        return self.unitary.product(*(self.generators[f] for f in factors), projective=False)

    def labels(self, names: Sequence[str]) -> list:
        return [self.codes[n] for n in names]

    @cached_property
    def groups(self) -> Dict[str, SmallGroup]:
        groups: Dict[str, SmallGroup] = {}
        for name in ("K1", "K2"):
            groups[name] = closure(self.labels(SUBGROUPS[name]), self.unitary, name=name)
            logger.info(f"{name}: order {groups[name].order}")
        for name, home in HOME.items():
            groups[name] = groups[home].generated(self.labels(SUBGROUPS[name]), name=name)
        groups["K12"] = intersect(groups["K1"], groups["K2"], name="K12")
        groups["H12"] = intersect(groups["H1"], groups["H2"], name="H12")
        if groups["K1"].order != 1296 or groups["K2"].order != 972:
            raise ConstructionError(f"vertex stabilizers have orders {groups['K1'].order}, {groups['K2'].order}")
        return groups

    @cached_property
    def base(self) -> Dict[str, Dict[Side, SmallGroup]]:
        g = self.groups
        return {"H": {Side.ONE: g["H1"], Side.TWO: g["H2"]}, "K": {Side.ONE: g["K1"], Side.TWO: g["K2"]}}

    @cached_property
    def refs(self) -> Dict[str, SmallGroup]:
        return reference_groups()

    @cached_property
    def group_hash(self) -> str:
        digest = hashlib.sha256()
        digest.update(self.modulus.to_bytes(2, "little"))
        for name in ("K1", "K2"):
            digest.update(np.asarray(sorted(self.groups[name].elements), dtype=np.int64).tobytes())
        return digest.hexdigest()

    # --- graph ---------------------------------------------------------------------------

    @cached_property
    def graph(self) -> CosetGraph:
        g = self.groups
        graph = None
        if self.storage is not None and self.use_cache:
            graph = self.storage.load_graph(self.modulus, self.group_hash)
            if graph is not None:
                self.graph_source = "cache"
        if graph is None:
            logger.info("building coset graph")
            graph = build_graph(self.unitary, g["K1"], g["K2"], g["K12"], threads=self.threads)
            self.graph_source = "built"
            if self.storage is not None:
                self.storage.save_graph(graph, self.modulus, self.group_hash)
        self.check_graph(graph)
        return graph

    @staticmethod
    def check_graph(graph: CosetGraph) -> None:
        counts = graph.side_counts
        found = {"side_one": counts[Side.ONE], "side_two": counts[Side.TWO], "edges": graph.num_edges}
        if found != EXPECTED_GRAPH:
            raise ConstructionError(f"coset graph counts {found}, expected {EXPECTED_GRAPH}")

    @cached_property
    def spaces(self) -> Dict[Side, CosetSpace]:
        return coset_spaces(self.unitary, self.groups["K1"], self.groups["K2"])

    @cached_property
    def analysis(self) -> ArcAnalysis:
        return ArcAnalysis(self.graph, self.spaces, self.unitary, self.base, threads=self.threads, seed=self.seed)

    def vertex_of(self, side: Side, *names: str) -> int:
        """Номер вершины K_side g, где g - произведение именованных элементов."""
        code = self.spaces[side].canon(self.exact(*names))
        return self.graph.lookup(side, code)

    @cached_property
    def base_arc(self) -> Dict[str, int]:
        """Вершины x_-1, x0, ..., x4 вокруг базового ребра (x1, x2) = (K1, K2)."""
        return {
            "x-1": self.vertex_of(Side.ONE, "E", "D"),
            "x0": self.vertex_of(Side.TWO, "D"),
            "x1": 0,
            "x2": 1,
            "x3": self.vertex_of(Side.ONE, "E"),
            "x4": self.vertex_of(Side.TWO, "D", "E"),
        }

    # --- amalgams ------------------------------------------------------------------------

    @cached_property
    def amalgams(self) -> Dict[str, Amalgam]:
        g = self.groups
        return {
            "H": Amalgam("H", g["H1"], g["H2"], g["H12"]),
            "K": Amalgam("K", g["K1"], g["K2"], g["K12"]),
        }

    def group_order(self, group: str) -> int:
        base = self.base[group]
        return group_order_from_graph(self.graph, base[Side.ONE], base[Side.TWO])

    def characteristic(self, group: str) -> CheckBundle:
        """Локальная характеристика 3 для H или K, считается один раз."""
        if group not in self._characteristic:
            self._characteristic[group] = local_characteristic(
                self.analysis, group, samples=self.sample_size, seed=self.seed)
        return self._characteristic[group]
