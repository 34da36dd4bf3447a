import pytest

from algebra.errors import FieldConfigurationError
from algebra.gf64 import CONWAY_MODULUS, GF64, conway_modulus, schoolbook_mul


def test_conway_modulus_matches_database():
    assert conway_modulus() == CONWAY_MODULUS


def test_antilog_table_covers_units(field):
    table = field.antilog_table()
    assert len(table) == 63
    assert sorted(value for _, value in table) == list(range(1, 64))
    assert table[0] == (0, 1)


def test_table_multiplication_matches_schoolbook(field):
    for a in range(64):
        for b in range(64):
            assert field.mul(a, b) == schoolbook_mul(a, b, CONWAY_MODULUS)


def test_inverse_and_frobenius(field):
    for a in range(1, 64):
        assert field.mul(a, field.inv(a)) == 1
        assert field.frobenius(a, 6) == a
        assert field.conj(a) == field.pow(a, 8)
        assert field.frobenius(field.mul(a, 5), 1) == field.mul(field.frobenius(a), field.frobenius(5))


def test_named_constants(field):
    assert field.order(field.zeta) == 63
    assert field.order(field.beta) == 9
    assert field.order(field.alpha) == 3
    alpha = field.alpha
    assert 1 ^ alpha ^ field.mul(alpha, alpha) == 0
    assert field.pow(field.beta, 3) == alpha


def test_field_element_wrapper(field):
    zeta, beta, alpha = field.constants()
    assert int(zeta ** 7) == int(beta)
    assert int(alpha * alpha.inverse()) == 1
    assert (beta + beta).value == 0


def test_zero_has_no_inverse(field):
    with pytest.raises(ZeroDivisionError):
        field.inv(0)


@pytest.mark.parametrize("modulus", [0b1000001, 0b111, 0b1001001])
def test_bad_modulus_is_rejected(modulus):
    # x^6 + 1 is reducible, 0b111 has the wrong degree, x^6 + x^3 + 1 is irreducible but not primitive
    with pytest.raises(FieldConfigurationError):
        GF64(modulus)


def test_alternate_primitive_modulus():
    other = GF64(0b1000011)
    assert other.order(other.zeta) == 63
    assert other.order(other.alpha) == 3


def test_frobenius_is_additive(field):
    for a in range(64):
        for b in range(64):
            assert field.frobenius(field.add(a, b)) == field.add(field.frobenius(a), field.frobenius(b))


def test_tau_is_an_involution(field):
    assert all(field.conj(field.conj(a)) == a for a in range(64))
    assert any(field.conj(a) != a for a in range(64))
