import numpy as np
import pytest

from algebra.psu import (
    GENERATOR_NAMES,
    TWISTS,
    CommutatorConvention,
    GroupElement,
    bar,
    check_relations,
    pack,
    require_relations,
    unpack,
)

MATRIX_NAMES = GENERATOR_NAMES[:7]


def test_generators_are_unitary_of_determinant_one(unitary, generators):
    for name in MATRIX_NAMES:
        m = generators[name].mat
        assert unitary.is_unitary(m), name
        assert unitary.det(m) == 1, name


def test_star_is_the_gaussian_inverse(unitary, generators):
    for name in MATRIX_NAMES:
        m = generators[name].mat
        assert unitary.star(m) == unitary.gaussian_inverse(m)


def test_pack_keeps_matrix_and_twist(generators):
    g = GroupElement(generators["D"].mat, 4)
    assert unpack(pack(g)) == g


def test_inverse_composes_to_identity(unitary, generators):
    for g in generators.values():
        assert unitary.compose(g, unitary.invert(g)) == unitary.identity
        code = unitary.code(g)
        assert unitary.mul(code, unitary.inv(code)) == unitary.identity_code


def test_relation_table_holds(unitary, generators):
    report = check_relations(unitary, generators)
    assert report.passed
    assert report.convention in set(CommutatorConvention)
    assert report.twist_conjugation
    assert require_relations(unitary, generators).convention == report.convention


def test_scalar_z_is_projectively_trivial(unitary, generators):
    assert unitary.code(generators["Z"]) == unitary.identity_code


def test_element_orders(unitary, generators):
    sigma, E = generators["sigma"], generators["E"]
    assert unitary.power(sigma, 6) == unitary.identity
    assert unitary.power(sigma, 3) != unitary.identity
    assert unitary.power(E, 9) == unitary.identity
    assert unitary.power(E, 3) != unitary.identity


def test_integer_codes_follow_composition(unitary, generators):
    A, D, sigma = generators["A"], generators["D"], generators["sigma"]
    expected = unitary.code(unitary.product(A, D, sigma, projective=False))
    assert bar(unitary, generators, ("A", "D", "sigma")) == [expected]
    assert unitary.mul(unitary.mul(unitary.code(A), unitary.code(D)), unitary.code(sigma)) == expected


def test_batched_canonical_codes_agree(unitary, generators):
    elements = [unitary.product(generators["D"], generators["E"], projective=False),
                generators["C"], GroupElement(generators["F"].mat, 2)]
    mats = np.asarray([g.mat for g in elements], dtype=np.uint8).reshape(-1, 3, 3)
    twists = np.asarray([g.twist for g in elements])
    assert unitary.canonical_codes(mats, twists).tolist() == [unitary.code(g) for g in elements]


def test_multiplication_table_matches_mul(unitary, generators):
    codes = bar(unitary, generators, "A", "B")
    elements = [unitary.identity_code]
    for a in range(3):
        for b in range(3):
            word = [generators["A"]] * a + [generators["B"]] * b
            code = unitary.code(unitary.product(*word, projective=False))
            if code not in elements:
                elements.append(code)
    assert len(elements) == 9
    table = unitary.multiplication_table(elements)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            assert elements[table[i, j]] == unitary.mul(x, y)
    assert set(codes) <= set(elements)


def _random_word(rng, generators, depth):
    names = [str(n) for n in rng.choice(list(generators), size=depth)]
    return [generators[n] for n in names]


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def test_random_products_stay_unitary(unitary, generators, rng):
    for _ in range(40):
        word = _random_word(rng, generators, int(rng.integers(1, 21)))
        exact = unitary.product(*word, projective=False)
        assert unitary.is_unitary(exact.mat)
        assert unitary.is_unitary(unitary.canonicalize(exact).mat)


def test_twist_exponents_add(unitary, generators, rng):
    for _ in range(40):
        word = _random_word(rng, generators, int(rng.integers(1, 21)))
        expected = sum(g.twist for g in word) % TWISTS
        assert unitary.product(*word, projective=False).twist == expected
        assert unitary.product(*word).twist == expected


def test_canonicalize_is_idempotent(unitary, generators, rng):
    for _ in range(20):
        g = unitary.product(*_random_word(rng, generators, 8), projective=False)
        once = unitary.canonicalize(g)
        assert unitary.canonicalize(once) == once
        for s in unitary.scalars:
            assert unitary.canonical_code(GroupElement(unitary.scale(g.mat, s), g.twist)) == unitary.code(once)


def test_projective_equality_is_a_congruence(unitary, generators, rng):
    alpha = unitary.field.alpha
    for _ in range(20):
        g = unitary.product(*_random_word(rng, generators, 6), projective=False)
        h = unitary.product(*_random_word(rng, generators, 6), projective=False)
        g_scaled = GroupElement(unitary.scale(g.mat, alpha), g.twist)
        assert unitary.code(g) == unitary.code(g_scaled)
        assert unitary.code(unitary.compose(g, h, projective=False)) == \
            unitary.code(unitary.compose(g_scaled, h, projective=False))
        assert unitary.code(unitary.compose(h, g, projective=False)) == \
            unitary.code(unitary.compose(h, g_scaled, projective=False))
        assert unitary.code(unitary.invert(g, projective=False)) == \
            unitary.code(unitary.invert(g_scaled, projective=False))
