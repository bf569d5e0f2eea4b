"""Multiplication tables, conjugation, and the norm form of the
composition algebras built by Cayley-Dickson doubling."""

import random
from fractions import Fraction

import pytest

from glap.composition import ALGEBRAS, algebra_by_tag, cayley_dickson, norm_form
from glap.errors import AlgebraMismatch, DimTooLarge
from glap.linalg import signature_of_symmetric

F = Fraction

H = ALGEBRAS["H"]
O = ALGEBRAS["O"]


def test_quaternion_units():
    i, j, k = H.basis_element(1), H.basis_element(2), H.basis_element(3)
    assert i * j == k
    assert j * i == -k


def test_quaternion_defining_relations():
    for t in (1, 2, 3):
        e = H.basis_element(t)
        assert e * e == -H.one


def test_split_complex_unit_squares_to_plus_one():
    Cs = ALGEBRAS["C'"]
    j = Cs.basis_element(1)
    assert j * j == Cs.one


def test_quaternion_product_of_mixed_elements():
    one, i, j, k = (H.basis_element(t) for t in range(4))
    left = (one + i) * (one + j)
    assert left == one + i + j + k


def test_octonions_are_not_associative():
    i, j, ell = O.basis_element(1), O.basis_element(2), O.basis_element(4)
    assert (i * j) * ell != i * (j * ell)


def test_associativity_flags():
    for tag in ("R", "C", "C'", "H", "H'"):
        assert ALGEBRAS[tag].is_associative()
    for tag in ("O", "O'"):
        assert not ALGEBRAS[tag].is_associative()


def _random_element(alg, rng):
    return alg.element([F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(alg.dim)])


def test_conjugation_sum_identity():
    rng = random.Random(7)
    for alg in ALGEBRAS.values():
        for _ in range(10):
            x = _random_element(alg, rng)
            assert x + x.conjugate() == alg.one.scale(2 * x.re())


def test_conjugation_is_an_anti_automorphism():
    for alg in ALGEBRAS.values():
        for a in range(alg.dim):
            for b in range(alg.dim):
                x, y = alg.basis_element(a), alg.basis_element(b)
                assert (x * y).conjugate() == y.conjugate() * x.conjugate()


def test_composition_property_on_basis_pairs():
    for alg in ALGEBRAS.values():
        for a in range(alg.dim):
            for b in range(alg.dim):
                x, y = alg.basis_element(a), alg.basis_element(b)
                assert (x * y).norm() == x.norm() * y.norm()


def test_composition_property_on_random_pairs():
    rng = random.Random(20240816)
    for alg in ALGEBRAS.values():
        for _ in range(100):
            x = _random_element(alg, rng)
            y = _random_element(alg, rng)
            assert (x * y).norm() == x.norm() * y.norm()


def test_imaginary_part_is_kernel_of_re():
    for alg in ALGEBRAS.values():
        for t in range(1, alg.dim):
            assert alg.basis_element(t).re() == 0
        x = alg.element([F(3)] + [F(1)] * (alg.dim - 1))
        assert x.im() == x - alg.one.scale(3)
        assert x.im().re() == 0


def test_commutator_style_bracket_lands_in_imaginary_part():
    rng = random.Random(99)
    for alg in ALGEBRAS.values():
        for _ in range(20):
            x = _random_element(alg, rng)
            y = _random_element(alg, rng)
            v = x.conjugate() * y - y.conjugate() * x
            assert v.re() == 0


def test_split_octonions_contain_null_vectors():
    Os = ALGEBRAS["O'"]
    x = Os.one + Os.basis_element(4)
    assert not x.is_zero()
    assert x.norm() == 0
    assert (x.conjugate() * x).is_zero()


@pytest.mark.parametrize(
    "tag,expected",
    [("O", (8, 0, 0)), ("O'", (4, 4, 0)), ("C'", (1, 1, 0)), ("H", (4, 0, 0))],
)
def test_norm_form_signatures(tag, expected):
    assert signature_of_symmetric(norm_form(ALGEBRAS[tag])) == expected


def test_doubling_stops_at_dimension_eight():
    with pytest.raises(DimTooLarge):
        cayley_dickson(O, -1)


def test_elements_of_different_algebras_do_not_mix():
    with pytest.raises(AlgebraMismatch):
        H.basis_element(1) * O.basis_element(1)


def test_algebra_registry_lookup():
    assert algebra_by_tag("H'").dim == 4
    assert algebra_by_tag("O'").dim == 8
    with pytest.raises(Exception):
        algebra_by_tag("X")
