from fractions import Fraction

import pytest

from quatorders.quat import (
    PrimeBehavior,
    QuatAlgebra,
    QuatElement,
    classify_all,
    classify_prime,
    field_class,
    is_ramified_at_infinity,
    multiply,
    ramified_primes,
    reduced_norm,
)

H = QuatAlgebra(-1, -1)


def test_basis_relations():
    A = QuatAlgebra(-7, -11)
    assert multiply(A, A.i, A.j) == A.k
    assert multiply(A, A.j, A.i) == -A.k
    assert multiply(A, A.i, A.i) == QuatElement.of(-7, 0, 0, 0)
    assert multiply(A, A.j, A.j) == QuatElement.of(-11, 0, 0, 0)
    assert multiply(H, H.k, H.k) == QuatElement.of(-1, 0, 0, 0)


def test_multiplication_associative():
    A = QuatAlgebra(-3, -73)
    x = QuatElement.of(1, Fraction(1, 2), -2, 3)
    y = QuatElement.of(0, 5, Fraction(3, 7), 1)
    z = QuatElement.of(-4, 1, 1, Fraction(1, 3))
    assert multiply(A, multiply(A, x, y), z) == multiply(A, x, multiply(A, y, z))


def test_norm_is_multiplicative_and_matches_conjugate():
    A = QuatAlgebra(-7435, -770)
    x = QuatElement.of(2, -1, Fraction(1, 2), 3)
    y = QuatElement.of(Fraction(1, 3), 4, 0, -1)
    assert reduced_norm(A, multiply(A, x, y)) == reduced_norm(A, x) * reduced_norm(A, y)
    assert multiply(A, x, x.conjugate()) == QuatElement.of(reduced_norm(A, x), 0, 0, 0)


def test_trace_and_norm_examples():
    A = QuatAlgebra(-7, -3)
    w = QuatElement.of(Fraction(1, 2), Fraction(1, 2), 0, 0)
    assert w.reduced_trace() == 1
    assert reduced_norm(A, w) == 2
    assert reduced_norm(A, A.k) == A.a * A.b
    assert multiply(A, A.k, A.k) == QuatElement.of(-A.a * A.b, 0, 0, 0)


@pytest.mark.parametrize(
    "a,b,expected", [(-7, -3, {3}), (-7435, -770, {2, 5, 7}), (-1, -1, {2}), (-7, -11, {7})]
)
def test_ramified_primes(a, b, expected):
    A = QuatAlgebra(a, b)
    assert ramified_primes(A) == frozenset(expected)
    assert is_ramified_at_infinity(A)


def test_definite_check():
    with pytest.raises(ValueError):
        QuatAlgebra(1, -1)
    assert not is_ramified_at_infinity(QuatAlgebra(1, -1, definite=False))


def test_field_class_at_two():
    assert field_class(-7, 2) == "split"
    assert field_class(-3, 2) == "inert"
    assert field_class(-1, 2) == "ramified"
    assert field_class(-10, 2) == "ramified"


def test_classify_examples():
    assert classify_prime(QuatAlgebra(-7, -3), 3) == PrimeBehavior(3, "inert", "ramified")
    assert classify_prime(QuatAlgebra(-7, -3), 2) == PrimeBehavior(2, "split", "split")
    assert classify_prime(QuatAlgebra(-7435, -770), 23) == PrimeBehavior(23, "inert", "split")


def test_split_field_never_in_ramified_algebra():
    for a in range(-60, 0):
        for b in range(-60, 0):
            for beh in classify_all(QuatAlgebra(a, b)):
                assert not (beh.field_class == "split" and beh.algebra_class == "ramified")
    with pytest.raises(ValueError):
        PrimeBehavior(5, "split", "ramified")


def test_element_str():
    assert str(QuatElement.of(Fraction(1, 2), Fraction(1, 2), 0, -3)) == "1/2 + 1/2i - 3k"
    assert str(QuatElement.of(0, 0, 0, 0)) == "0"
