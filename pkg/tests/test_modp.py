import numpy as np
import pytest

from quatbend.exact_arith import Matrix
from quatbend.modp.cert import (BadPrimeError, ReducedRep, bad_prime_set, bad_primes, classify,
                                closure_order, group_order, multiplicative_order, reduce,
                                sp_order, standard_form, standard_generators, transvection)
from quatbend.modp.stabchain import StabilizerChain
from quatbend.symplectic.model import rho


def std_rep(n, p):
    return ReducedRep(p, tuple(g % p for g in standard_generators(n)), standard_form(n))


def test_sp_order():
    assert sp_order(1, 3) == 24
    assert sp_order(1, 5) == 120
    assert sp_order(2, 3) == 51840
    assert sp_order(2, 2) == 720


def test_sp4_3_against_closure():
    assert group_order(std_rep(2, 3)) == 51840
    assert closure_order(standard_generators(2), 3) == 51840


def test_sl2_small_primes():
    for p in (3, 5, 7):
        assert group_order(std_rep(1, p)) == sp_order(1, p) == closure_order(standard_generators(1), p)


def test_sp8_3():
    chain = StabilizerChain(list(std_rep(4, 3).mats), 3, order_bound=sp_order(4, 3))
    assert chain.order() == sp_order(4, 3)
    assert chain.orbit_lengths()[0] == 3 ** 8 - 1


def test_subgroup_orders():
    # a single transvection has order p, a pair of transvections on disjoint planes p^2
    G = standard_form(2)
    t1 = transvection([1, 0, 0, 0], G)
    t2 = transvection([0, 0, 1, 0], G)
    red = ReducedRep(5, (t1 % 5, t2 % 5), G)
    assert group_order(red) == 25
    assert closure_order([t1, t2], 5) == 25
    assert classify(red) == ("proper", 25)
    assert group_order(ReducedRep(7, (np.eye(4, dtype=np.int64),), G)) == 1


def test_reduce_values(model31):
    R = rho(model31, model31.algebra(2, 1))
    red = reduce([R], model31.gram.gram, 5)
    assert red.mats[0].tolist() == [[2, 2, 0, 0], [4, 2, 0, 0], [0, 0, 2, 3], [0, 0, 1, 2]]
    for p in (2, 3, 9):
        with pytest.raises(BadPrimeError):
            reduce([R], model31.gram.gram, p)
    assert bad_primes(model31.gram.gram) == {2, 3}


def test_reduce_is_homomorphism(model31):
    A = model31.algebra
    x, y = rho(model31, A(2, 1)), rho(model31, A(0, 0, 1))
    for p in (5, 7, 11):
        rx, ry, rxy = reduce([x, y, x * y], model31.gram.gram, p).mats
        assert np.array_equal((rx @ ry) % p, rxy)


def test_lagrange(model31):
    A = model31.algebra
    mats = [rho(model31, A(2, 1)), rho(model31, A(0, 0, 1))]
    for p in (5, 7, 13):
        status, order = classify(reduce(mats, model31.gram.gram, p))
        assert status == "proper"
        assert sp_order(2, p) % order == 0


def test_multiplicative_order():
    M = Matrix([[1, 1], [0, 1]])
    assert multiplicative_order(M, 7) == 7
    assert multiplicative_order(Matrix([[0, -1], [1, 0]]), 5) == 4


def test_certificate_identity():
    K = Matrix(standard_form(2).tolist())
    cert = bad_prime_set([Matrix.identity(4)], K, 5)
    assert cert.verdict == "not-certified"
    assert cert.omega == [3, 5]
    text = cert.to_text()
    assert "2: skipped(even prime)" in text and "3: proper(1)" in text


def test_certificate_standard():
    K = Matrix(standard_form(1).tolist())
    gens = [Matrix(g.tolist()) for g in standard_generators(1)]
    cert = bad_prime_set(gens, K, 13)
    assert cert.verdict == "dense-certified"
    assert cert.omega == []
    assert cert.surjective_primes == [3, 5, 7, 11, 13]
