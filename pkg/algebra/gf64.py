"""Arithmetic in GF(64) = GF(2)[x]/(f) with table lookups.

Elements are plain ints 0..63 (coefficient bit vectors). ``GF64`` owns the
log/antilog tables, the 64x64 multiplication table and the Frobenius table;
``FieldElement`` is a thin value wrapper for the public API.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple

import conway_polynomials
import numpy as np

from .errors import FieldConfigurationError

logger = logging.getLogger("delta_amalgam.gf64")

DEGREE = 6
ORDER = 1 << DEGREE
UNITS = ORDER - 1

# x^6 + x^4 + x^3 + x + 1
CONWAY_MODULUS = 0b1011011


def conway_modulus(degree: int = DEGREE) -> int:
    """Conway polynomial of GF(2^degree) as a bitmask (bit i = coefficient of x^i)."""
    coefficients = conway_polynomials.database()[2][degree]
    return sum(int(c) << i for i, c in enumerate(coefficients))


def clmul(a: int, b: int) -> int:
    """Carryless product of two GF(2) polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, modulus: int) -> int:
    degree = modulus.bit_length() - 1
    while a and a.bit_length() - 1 >= degree:
        a ^= modulus << (a.bit_length() - 1 - degree)
    return a


def schoolbook_mul(a: int, b: int, modulus: int) -> int:
    return poly_mod(clmul(a, b), modulus)


def _validate_modulus(modulus: int) -> None:
    if modulus.bit_length() - 1 != DEGREE:
        raise FieldConfigurationError(f"modulus {modulus:#b} is not of degree {DEGREE}")
    # no factor of degree 1..3
    for divisor in range(2, 16):
        if poly_mod(modulus, divisor) == 0:
            raise FieldConfigurationError(f"modulus {modulus:#b} is reducible (factor {divisor:#b})")

    def power_of_x(n: int) -> int:
        result, base = 1, 0b10
        while n:
            if n & 1:
                result = schoolbook_mul(result, base, modulus)
            base = schoolbook_mul(base, base, modulus)
            n >>= 1
        return result

    # 63 = 3^2 * 7
    if power_of_x(UNITS // 3) == 1 or power_of_x(UNITS // 7) == 1:
        raise FieldConfigurationError(f"x is not primitive modulo {modulus:#b}")


class GF64:
    """GF(64) for a fixed primitive modulus, with zeta = class of x."""

    def __init__(self, modulus: int = CONWAY_MODULUS):
        _validate_modulus(modulus)
        self.modulus = modulus

        exp = [0] * (2 * UNITS)
        log = [-1] * ORDER
        value = 1
        for i in range(UNITS):
            exp[i] = exp[i + UNITS] = value
            log[value] = i
            value = poly_mod(value << 1, modulus)
        self.exp: Tuple[int, ...] = tuple(exp)
        self.log: Tuple[int, ...] = tuple(log)

        mul = np.zeros((ORDER, ORDER), dtype=np.uint8)
        for a in range(1, ORDER):
            for b in range(1, ORDER):
                mul[a, b] = exp[log[a] + log[b]]
        self.mul_table = mul
        self.mul_rows: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(v) for v in row) for row in mul)

        frob = np.zeros((DEGREE, ORDER), dtype=np.uint8)
        frob[0] = np.arange(ORDER)
        for k in range(1, DEGREE):
            frob[k] = mul[frob[k - 1], frob[k - 1]]
        self.frob_table = frob
        self.frob_rows: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(v) for v in row) for row in frob)

        inv = [0] * ORDER
        for a in range(1, ORDER):
            inv[a] = exp[(UNITS - log[a]) % UNITS]
        self.inv_table: Tuple[int, ...] = tuple(inv)

        logger.debug(f"GF(64) ready, modulus {modulus:#b}, conway={modulus == CONWAY_MODULUS}")

    # --- scalar arithmetic on ints -------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return self.mul_rows[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(64)")
        return self.inv_table[a]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 1 if n == 0 else 0
        return self.exp[(self.log[a] * n) % UNITS]

    def frobenius(self, a: int, k: int = 1) -> int:
        return self.frob_rows[k % DEGREE][a]

    def conj(self, a: int) -> int:
        """tau = rho^3, the involution x -> x^8."""
        return self.frob_rows[3][a]

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        return UNITS // math.gcd(UNITS, self.log[a])

    # --- named constants ------------------------------------------------------------

    @cached_property
    def zeta(self) -> int:
        return self.exp[1]

    @cached_property
    def beta(self) -> int:
        return self.exp[7]

    @cached_property
    def alpha(self) -> int:
        return self.exp[21]

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value & UNITS, self)

    def constants(self) -> Tuple["FieldElement", "FieldElement", "FieldElement"]:
        return self.element(self.zeta), self.element(self.beta), self.element(self.alpha)

    def antilog_table(self) -> List[Tuple[int, int]]:
        return [(i, self.exp[i]) for i in range(UNITS)]

    def log_table(self) -> Dict[int, int]:
        return {a: self.log[a] for a in range(1, ORDER)}


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: GF64 = field(compare=False, repr=False)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return ff_add(self, other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return ff_mul(self, other)

    def __pow__(self, n: int) -> "FieldElement":
        return FieldElement(self.field.pow(self.value, n), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def order(self) -> int:
        return self.field.order(self.value)

    def __int__(self) -> int:
        return self.value


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(a.value ^ b.value, a.field)


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(a.field.mul(a.value, b.value), a.field)


def frobenius(a: FieldElement, k: int = 1) -> FieldElement:
    return FieldElement(a.field.frobenius(a.value, k), a.field)


def constants(field_: GF64) -> Tuple[FieldElement, FieldElement, FieldElement]:
    return field_.constants()
