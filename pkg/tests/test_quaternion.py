import random
from fractions import Fraction

import pytest

from quatbend.exact_arith import INF, BiquadElement
from quatbend.quaternion import (AlgebraError, OrderBasis, PellElement, QuaternionAlgebra,
                                 conj, format_order_basis, matrix_model, nrd,
                                 order_closure_check, parse_order_basis, pell_search,
                                 ramification_set, trd)

A = QuaternionAlgebra(3, -1)


def rand_q(rng, alg=A, h=5):
    return alg(*[Fraction(rng.randint(-h, h), rng.choice((1, 1, 2))) for _ in range(4)])


def test_multiplication_table():
    one, i, j, ij = A.basis()
    assert i * j == ij and j * i == -ij
    assert i * i == 3 and j * j == -1 and ij * ij == 3


def test_examples():
    i = A(0, 1)
    assert (1 + i) * (1 - i) == A(-2)
    assert nrd(A(2, 1)) == 1
    assert trd(A(2, 1)) == 4


def test_norm_multiplicative_and_conjugation():
    rng = random.Random(0)
    for _ in range(100):
        x, y = rand_q(rng), rand_q(rng)
        assert nrd(x * y) == nrd(x) * nrd(y)
        assert conj(x * y) == conj(y) * conj(x)
        assert x * conj(x) == nrd(x)
        assert (x * y) * x == x * (y * x)


def test_inverse():
    x = A(1, 2, 3, 4)
    assert x * x.inverse() == 1 and x ** -2 * x ** 2 == 1


def test_matrix_model_is_homomorphism_with_det_nrd():
    rng = random.Random(1)
    for alg in (A, QuaternionAlgebra(2, 5)):
        for _ in range(40):
            x, y = rand_q(rng, alg), rand_q(rng, alg)
            assert matrix_model(x * y) == matrix_model(x) * matrix_model(y)
            assert matrix_model(x).det() == BiquadElement.scalar(alg.a, alg.b, nrd(x))


def test_ramification_and_type():
    assert ramification_set(A) == frozenset({2, 3})
    assert A.is_division and A.is_indefinite
    A.require_indefinite_division()
    with pytest.raises(AlgebraError, match="not indefinite"):
        QuaternionAlgebra(-1, -1).require_indefinite_division()
    with pytest.raises(AlgebraError, match="split"):
        QuaternionAlgebra(1, 1).require_indefinite_division()
    assert INF in QuaternionAlgebra(-1, -1).ramification


def test_pell_search():
    found = [p.gamma for p in pell_search(A, 30)]
    assert found == [A(2, 1), A(7, 4), A(26, 15)]
    assert PellElement(A(2, 1)).eigenvalue() == BiquadElement(3, -1, (2, 1, 0, 0))
    with pytest.raises(ValueError):
        pell_search(QuaternionAlgebra(4, -1), 10)
    with pytest.raises(ValueError):
        PellElement(A(1))


def test_order_closure():
    std = OrderBasis.standard(A)
    assert order_closure_check(std)
    half = OrderBasis(A, (A(1), A(0, Fraction(1, 2)), A(0, 0, 1), A(0, 0, 0, 1)))
    assert not order_closure_check(half)
    # the Hurwitz-type order in (-1,-1) contains (1+i+j+k)/2
    H = QuaternionAlgebra(-1, -1)
    hur = OrderBasis(H, (H(1), H(0, 1), H(0, 0, 1),
                         H(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))))
    assert order_closure_check(hur)


def test_order_file_roundtrip():
    std = OrderBasis.standard(A)
    assert parse_order_basis(format_order_basis(std)) == std
    with pytest.raises(ValueError):
        parse_order_basis("3 -1\n1 0 0 0\n")
