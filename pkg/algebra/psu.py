"""Semilinear unitary 3x3 transformations over GF(64).

An element is a pair (M, e): a matrix M with entries in GF(64) and a power e
of the Frobenius twist sigma. Elements act on row vectors from the right,
v -> rho^e(v) M, so (M, e)(N, f) = (rho^f(M) N, e + f) applies the left
factor first. With this convention sigma^-1 X sigma is the entrywise rho
image of X.

Projective elements are encoded as 57-bit ints: nine 6-bit entries in
row-major order followed by the 3-bit twist. Integer order of codes is the
serialization order, and the canonical representative of {M, aM, a^2M}
(a = alpha) is the one with the smallest code.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConstructionError, ConventionError
from .gf64 import GF64

logger = logging.getLogger("delta_amalgam.psu")

TWISTS = 6
ENTRY_BITS = 6
TWIST_BITS = 3

Matrix3 = Tuple[int, ...]
Word = Union[str, Sequence[str]]

IDENTITY_MATRIX: Matrix3 = (1, 0, 0, 0, 1, 0, 0, 0, 1)
GENERATOR_NAMES = ("A", "B", "C", "D", "E", "F", "Z", "sigma")


class GroupElement(NamedTuple):
    mat: Matrix3
    twist: int = 0


class CommutatorConvention(str, Enum):
    INVERSE_FIRST = "[x,y] = x^-1 y^-1 x y"
    INVERSE_LAST = "[x,y] = x y x^-1 y^-1"


def pack(g: GroupElement) -> int:
    code = 0
    for entry in g.mat:
        code = (code << ENTRY_BITS) | entry
    return (code << TWIST_BITS) | g.twist


def unpack(code: int) -> GroupElement:
    twist = code & 0b111
    code >>= TWIST_BITS
    entries = [0] * 9
    for k in range(8, -1, -1):
        entries[k] = code & 0b111111
        code >>= ENTRY_BITS
    return GroupElement(tuple(entries), twist)


class SemilinearUnitaryGroup:
    """P Gamma U_3(8) acting on row vectors, plus its exact (non projective) lift."""

    def __init__(self, field_: GF64):
        self.field = field_
        self._mul = field_.mul_rows
        self._frob = field_.frob_rows
        alpha = field_.alpha
        self.scalars: Tuple[int, int, int] = (1, alpha, field_.mul(alpha, alpha))
        self.identity = GroupElement(IDENTITY_MATRIX, 0)
        self.identity_code = pack(self.identity)

    # --- matrices ---------------------------------------------------------------------

    def mat_mul(self, m: Matrix3, n: Matrix3) -> Matrix3:
        mul = self._mul
        out = []
        for i in (0, 3, 6):
            ra, rb, rc = mul[m[i]], mul[m[i + 1]], mul[m[i + 2]]
            for k in range(3):
                out.append(ra[n[k]] ^ rb[n[3 + k]] ^ rc[n[6 + k]])
        return tuple(out)

    def frob_mat(self, m: Matrix3, k: int) -> Matrix3:
        if k % TWISTS == 0:
            return m
        row = self._frob[k % TWISTS]
        return tuple(row[x] for x in m)

    def star(self, m: Matrix3) -> Matrix3:
        """Transpose of the entrywise tau image."""
        t = self._frob[3]
        return (t[m[0]], t[m[3]], t[m[6]], t[m[1]], t[m[4]], t[m[7]], t[m[2]], t[m[5]], t[m[8]])

    def scale(self, m: Matrix3, s: int) -> Matrix3:
        row = self._mul[s]
        return tuple(row[x] for x in m)

    def det(self, m: Matrix3) -> int:
        mul = self.field.mul
        a, b, c, d, e, f, g, h, i = m
        return (
            mul(a, mul(e, i) ^ mul(f, h))
            ^ mul(b, mul(d, i) ^ mul(f, g))
            ^ mul(c, mul(d, h) ^ mul(e, g))
        )

    def is_unitary(self, m: Matrix3) -> bool:
        return self.mat_mul(self.star(m), m) == IDENTITY_MATRIX

    def gaussian_inverse(self, m: Matrix3) -> Matrix3:
        """Gauss-Jordan inverse, used as an independent check of ``star``."""
        f = self.field
        rows = [list(m[3 * r: 3 * r + 3]) + [int(r == c) for c in range(3)] for r in range(3)]
        for col in range(3):
            pivot = next((r for r in range(col, 3) if rows[r][col]), None)
            if pivot is None:
                raise ZeroDivisionError("singular matrix")
            rows[col], rows[pivot] = rows[pivot], rows[col]
            scale = f.inv(rows[col][col])
            rows[col] = [f.mul(scale, x) for x in rows[col]]
            for r in range(3):
                if r != col and rows[r][col]:
                    factor = rows[r][col]
                    rows[r] = [x ^ f.mul(factor, y) for x, y in zip(rows[r], rows[col])]
        return tuple(x for row in rows for x in row[3:])

    # --- elements ----------------------------------------------------------------------

    def compose(self, g: GroupElement, h: GroupElement, projective: bool = True) -> GroupElement:
        product = GroupElement(
            self.mat_mul(self.frob_mat(g.mat, h.twist), h.mat), (g.twist + h.twist) % TWISTS
        )
        return self.canonicalize(product) if projective else product

    def invert(self, g: GroupElement, projective: bool = True) -> GroupElement:
        back = (-g.twist) % TWISTS
        inverse = GroupElement(self.frob_mat(self.star(g.mat), back), back)
        return self.canonicalize(inverse) if projective else inverse

    def power(self, g: GroupElement, n: int, projective: bool = True) -> GroupElement:
        if n < 0:
            g, n = self.invert(g, projective), -n
        result = self.identity
        for _ in range(n):
            result = self.compose(result, g, projective)
        return result

    def canonicalize(self, g: GroupElement) -> GroupElement:
        return unpack(self.canonical_code(g))

    def canonical_code(self, g: GroupElement) -> int:
        return min(pack(GroupElement(self.scale(g.mat, s), g.twist)) for s in self.scalars)

    def product(self, *factors: GroupElement, projective: bool = True) -> GroupElement:
        result = self.identity
        for g in factors:
            result = self.compose(result, g, projective)
        return result

    def conjugate(self, x: GroupElement, y: GroupElement, convention: CommutatorConvention,
                  projective: bool = False) -> GroupElement:
        y_inv = self.invert(y, projective)
        if convention is CommutatorConvention.INVERSE_FIRST:
            return self.product(y_inv, x, y, projective=projective)
        return self.product(y, x, y_inv, projective=projective)

    def commutator(self, x: GroupElement, y: GroupElement, convention: CommutatorConvention,
                   projective: bool = False) -> GroupElement:
        x_inv, y_inv = self.invert(x, projective), self.invert(y, projective)
        if convention is CommutatorConvention.INVERSE_FIRST:
            return self.product(x_inv, y_inv, x, y, projective=projective)
        return self.product(x, y, x_inv, y_inv, projective=projective)

    # --- integer codes (group engine protocol) -----------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.canonical_code(self.compose(unpack(a), unpack(b), projective=False))

    def inv(self, a: int) -> int:
        return self.canonical_code(self.invert(unpack(a), projective=False))

    def code(self, g: GroupElement) -> int:
        return self.canonical_code(g)

    # --- batched numpy paths -----------------------------------------------------------

    @staticmethod
    def unpack_many(codes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        codes = np.asarray(codes, dtype=np.int64)
        twists = (codes & 0b111).astype(np.int64)
        rest = codes >> TWIST_BITS
        entries = np.empty(codes.shape + (9,), dtype=np.uint8)
        for k in range(8, -1, -1):
            entries[..., k] = rest & 0b111111
            rest = rest >> ENTRY_BITS
        return entries.reshape(codes.shape + (3, 3)), twists

    @staticmethod
    def pack_many(mats: np.ndarray, twists: np.ndarray) -> np.ndarray:
        flat = mats.reshape(mats.shape[:-2] + (9,)).astype(np.int64)
        code = np.zeros(flat.shape[:-1], dtype=np.int64)
        for k in range(9):
            code = (code << ENTRY_BITS) | flat[..., k]
        return (code << TWIST_BITS) | np.asarray(twists, dtype=np.int64)

    def mat_mul_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Batched product over the trailing 3x3 axes (broadcasting leading axes)."""
        terms = self.field.mul_table[a[..., :, :, None], b[..., None, :, :]]
        return np.bitwise_xor.reduce(terms, axis=-2)

    def frob_many(self, mats: np.ndarray, twists: np.ndarray) -> np.ndarray:
        """Entrywise rho^twist with one twist per matrix."""
        twists = np.asarray(twists)
        return self.field.frob_table[twists[..., None, None], mats]

    def canonical_codes(self, mats: np.ndarray, twists: np.ndarray) -> np.ndarray:
        mul = self.field.mul_table
        return np.minimum.reduce([self.pack_many(mul[s][mats], twists) for s in self.scalars])

    def multiplication_table(self, codes: Sequence[int], block: int = 32) -> np.ndarray:
        """Cayley table of a closed set of projective codes (row = left factor)."""
        codes = np.asarray(codes, dtype=np.int64)
        n = codes.size
        order = np.argsort(codes)
        sorted_codes = codes[order]
        mats, twists = self.unpack_many(codes)
        twisted = np.stack([self.field.frob_table[k][mats] for k in range(TWISTS)])
        table = np.empty((n, n), dtype=np.int32)
        for start in range(0, n, block):
            rows = np.arange(start, min(start + block, n))
            left = twisted[twists[None, :], rows[:, None]]
            products = self.mat_mul_many(left, mats[None, :, :, :])
            product_twists = (twists[rows][:, None] + twists[None, :]) % TWISTS
            product_codes = self.canonical_codes(products, product_twists)
            pos = np.searchsorted(sorted_codes, product_codes)
            pos = np.minimum(pos, n - 1)
            if not np.array_equal(sorted_codes[pos], product_codes):
                raise ConstructionError("element set is not closed under multiplication")
            table[rows] = order[pos]
        return table


# --- generators ------------------------------------------------------------------------


def make_generators(group: SemilinearUnitaryGroup) -> Dict[str, GroupElement]:
    """The seven matrices A..F, Z at SU level plus sigma = (I, 1)."""
    f = group.field
    alpha, beta = f.alpha, f.beta
    alpha_inv, beta_inv = f.inv(alpha), f.inv(beta)
    beta4 = f.pow(beta, 4)
    matrices = {
        "A": (0, 0, 1, 1, 0, 0, 0, 1, 0),
        "B": (1, 0, 0, 0, alpha, 0, 0, 0, alpha_inv),
        "C": (beta, 0, 0, 0, beta4, 0, 0, 0, beta4),
        "D": (1, 1, 1, 1, alpha, alpha_inv, 1, alpha_inv, alpha),
        "E": (1, 0, 0, 0, beta, 0, 0, 0, beta_inv),
        "F": (1, 0, 0, 0, 0, 1, 0, 1, 0),
        "Z": (alpha, 0, 0, 0, alpha, 0, 0, 0, alpha),
    }
    for name, m in matrices.items():
        if not group.is_unitary(m):
            raise ConstructionError(f"generator {name} is not unitary")
        if group.det(m) != 1:
            raise ConstructionError(f"generator {name} has determinant {group.det(m)}")
    generators = {name: GroupElement(m, 0) for name, m in matrices.items()}
    generators["sigma"] = GroupElement(IDENTITY_MATRIX, 1)
    return generators


# --- relation table --------------------------------------------------------------------


@dataclass(frozen=True)
class RelationCheck:
    key: str
    statement: str
    passed: bool


@dataclass
class RelationReport:
    convention: Optional[CommutatorConvention]
    checks: List[RelationCheck] = field(default_factory=list)
    rejected: Dict[str, List[str]] = field(default_factory=dict)
    twist_conjugation: bool = False

    @property
    def passed(self) -> bool:
        return self.convention is not None and self.twist_conjugation and all(c.passed for c in self.checks)


_Relation = Tuple[str, str, Callable[["_RelationContext"], GroupElement], Callable[["_RelationContext"], GroupElement]]


class _RelationContext:
    def __init__(self, group: SemilinearUnitaryGroup, gens: Dict[str, GroupElement],
                 convention: CommutatorConvention):
        self.group = group
        self.gens = gens
        self.convention = convention

    def __getitem__(self, name: str) -> GroupElement:
        return self.gens[name]

    def c(self, x: str, y: str) -> GroupElement:
        return self.group.commutator(self.gens[x], self.gens[y], self.convention)

    def conj(self, x: str, y: str) -> GroupElement:
        return self.group.conjugate(self.gens[x], self.gens[y], self.convention)

    def w(self, *names: str) -> GroupElement:
        return self.group.product(*(self.gens[n] for n in names), projective=False)

    def inv(self, name: str) -> GroupElement:
        return self.group.invert(self.gens[name], projective=False)


RELATIONS: Tuple[_Relation, ...] = (
    ("comm.A.B", "[A,B] = Z^2", lambda r: r.c("A", "B"), lambda r: r.w("Z", "Z")),
    ("comm.A.C", "[A,C] = B Z^2", lambda r: r.c("A", "C"), lambda r: r.w("B", "Z", "Z")),
    ("comm.B.C", "[B,C] = 1", lambda r: r.c("B", "C"), lambda r: r.w()),
    ("comm.D.A", "[D,A] = B A", lambda r: r.c("D", "A"), lambda r: r.w("B", "A")),
    ("comm.D.B", "[D,B] = A^2 B", lambda r: r.c("D", "B"), lambda r: r.w("A", "A", "B")),
    ("twist.A", "A^sigma = A", lambda r: r.conj("A", "sigma"), lambda r: r.w("A")),
    ("twist.B", "B^sigma = B^-1", lambda r: r.conj("B", "sigma"), lambda r: r.inv("B")),
    ("twist.C", "C^sigma = C^2", lambda r: r.conj("C", "sigma"), lambda r: r.w("C", "C")),
    ("twist.D", "D^sigma = D^-1", lambda r: r.conj("D", "sigma"), lambda r: r.inv("D")),
    ("comm.E.A", "[E,A] = B C", lambda r: r.c("E", "A"), lambda r: r.w("B", "C")),
    ("comm.E.B", "[E,B] = 1", lambda r: r.c("E", "B"), lambda r: r.w()),
    ("comm.E.C", "[E,C] = 1", lambda r: r.c("E", "C"), lambda r: r.w()),
    ("comm.F.A", "[F,A] = A^2", lambda r: r.c("F", "A"), lambda r: r.w("A", "A")),
    ("comm.F.B", "[F,B] = B^2", lambda r: r.c("F", "B"), lambda r: r.w("B", "B")),
    ("comm.F.C", "[F,C] = 1", lambda r: r.c("F", "C"), lambda r: r.w()),
    ("comm.F.E", "[F,E] = E^2", lambda r: r.c("F", "E"), lambda r: r.w("E", "E")),
    ("twist.E", "E^sigma = E^2", lambda r: r.conj("E", "sigma"), lambda r: r.w("E", "E")),
    ("twist.F", "F^sigma = F", lambda r: r.conj("F", "sigma"), lambda r: r.w("F")),
    ("power.C", "C^3 = Z", lambda r: r.w("C", "C", "C"), lambda r: r.w("Z")),
    ("power.D", "D^2 = F", lambda r: r.w("D", "D"), lambda r: r.w("F")),
    ("power.E", "E^3 = B", lambda r: r.w("E", "E", "E"), lambda r: r.w("B")),
)


def _evaluate(group: SemilinearUnitaryGroup, gens: Dict[str, GroupElement],
              convention: CommutatorConvention) -> List[RelationCheck]:
    context = _RelationContext(group, gens, convention)
    return [RelationCheck(key, statement, lhs(context) == rhs(context)) for key, statement, lhs, rhs in RELATIONS]


def check_relations(group: SemilinearUnitaryGroup, gens: Dict[str, GroupElement]) -> RelationReport:
    """Evaluates the relation table exactly (SU level) under both commutator conventions.

    The first convention satisfying the whole table is selected; under it
    X^sigma must equal the entrywise rho image of every matrix generator.
    """
    report = RelationReport(convention=None)
    for convention in CommutatorConvention:
        checks = _evaluate(group, gens, convention)
        failed = [c.key for c in checks if not c.passed]
        if failed:
            report.rejected[convention.value] = failed
            continue
        report.convention = convention
        report.checks = checks
        break
    if report.convention is None:
        # keep the per-relation picture of the closest convention for the report
        best = min(CommutatorConvention, key=lambda conv: len(report.rejected[conv.value]))
        report.checks = _evaluate(group, gens, best)
        logger.error(f"relation table fails under both conventions: {report.rejected}")
        return report

    sigma = gens["sigma"]
    report.twist_conjugation = all(
        group.conjugate(gens[name], sigma, report.convention) == GroupElement(group.frob_mat(gens[name].mat, 1), 0)
        for name in GENERATOR_NAMES[:7]
    )
    logger.info(f"relation table holds under {report.convention.value}, "
                f"sigma-conjugation matches rho: {report.twist_conjugation}")
    return report


def require_relations(group: SemilinearUnitaryGroup, gens: Dict[str, GroupElement]) -> RelationReport:
    report = check_relations(group, gens)
    if report.convention is None:
        raise ConventionError(f"relation table fails under both commutator conventions: {report.rejected}")
    if not report.twist_conjugation:
        raise ConventionError("conjugation by sigma does not agree with the entrywise Frobenius image")
    return report


def bar(group: SemilinearUnitaryGroup, gens: Dict[str, GroupElement], *words: Word) -> List[int]:
    """Projective codes of words in the named generators.

    A word is a generator name or a sequence of names read left to right.
    """
    codes = []
    for word in words:
        names = (word,) if isinstance(word, str) else tuple(word)
        codes.append(group.code(group.product(*(gens[name] for name in names), projective=False)))
    return codes
