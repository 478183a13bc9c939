import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatbend.exact_arith import (INF, KLEIN_GROUP, BiquadElement, DimensionError, Fp,
                                  GaloisElement, Matrix, ValuationError, block_diag, factor,
                                  galois_act, hilbert_symbol, integer_kernel, is_prime,
                                  nullspace, padic_valuation, primes_up_to, ramified_places,
                                  rational_sqrt, squarefree_part)


# independent closed-form oracle for the Hilbert symbol ------------------------------

def _legendre(u, p):
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _split(x, p):
    x = squarefree_part(x)
    al = 0
    while x % p == 0:
        x //= p
        al += 1
    return al, x


def closed_form_hilbert(a, b, p):
    if p == INF:
        return -1 if (a < 0 and b < 0) else 1
    al, u = _split(a, p)
    be, v = _split(b, p)
    if p != 2:
        sign = (-1) ** (al * be * ((p - 1) // 2))
        return sign * _legendre(u, p) ** be * _legendre(v, p) ** al
    eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
    omg = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
    return (-1) ** ((eps(u) * eps(v) + al * omg(v) + be * omg(u)) % 2)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)
ab = st.integers(-12, 12).filter(bool)


def biquads(a, b):
    return st.tuples(rationals, rationals, rationals, rationals).map(
        lambda c: BiquadElement(a, b, c))


class TestBiquad:
    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_ring_axioms(self, data):
        a, b = data.draw(ab), data.draw(ab)
        x, y, z = (data.draw(biquads(a, b)) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_galois_is_ring_automorphism_and_action(self, data):
        x, y = data.draw(biquads(3, -1)), data.draw(biquads(3, -1))
        for s in KLEIN_GROUP:
            assert galois_act(s, x * y) == galois_act(s, x) * galois_act(s, y)
            for t in KLEIN_GROUP:
                assert galois_act(s, galois_act(t, x)) == galois_act(s * t, x)

    def test_galois_examples(self):
        a, b = 3, -1
        one_plus = BiquadElement(a, b, (1, 1, 0, 0))
        assert galois_act(GaloisElement(1, 1), one_plus) == one_plus
        assert galois_act(GaloisElement(-1, 1), BiquadElement.sqrt_a(a, b)) == -BiquadElement.sqrt_a(a, b)
        assert galois_act(GaloisElement(-1, -1), BiquadElement.sqrt_ab(a, b)) == BiquadElement.sqrt_ab(a, b)

    def test_inverse_in_field_case(self):
        x = BiquadElement(2, 3, (1, 2, -1, 5))
        assert x * x.inverse() == 1
        assert x / x == 1

    def test_zero_divisor_when_parameter_is_square(self):
        x = BiquadElement(1, 3, (1, 1, 0, 0))   # (1 + sqrt 1) is 2, but (1 - sqrt 1) is 0
        y = BiquadElement(1, 3, (1, -1, 0, 0))
        assert x * y == 0
        with pytest.raises(ZeroDivisionError):
            y.inverse()

    def test_mixed_rings_rejected(self):
        with pytest.raises(ValueError):
            BiquadElement(2, 3, (1, 0, 0, 0)) + BiquadElement(2, 5, (1, 0, 0, 0))


class TestFp:
    @pytest.mark.parametrize("p", [3, 5, 7, 13])
    def test_field_axioms(self, p):
        els = [Fp(i, p) for i in range(p)]
        for x in els:
            if x.value:
                assert x * x.inverse() == Fp(1, p)
            for y in els:
                assert x + y == y + x and x * y == y * x
        rng = random.Random(p)
        for _ in range(50):
            x, y, z = (els[rng.randrange(p)] for _ in range(3))
            assert x * (y + z) == x * y + x * z


class TestMatrix:
    def test_associativity_and_inverse(self):
        rng = random.Random(1)
        for _ in range(20):
            A, B, C = (Matrix([[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)])
                       for _ in range(3))
            assert (A * B) * C == A * (B * C)
            if A.det():
                assert A * A.inverse() == Matrix.identity(3)
                assert (A * B).det() == A.det() * B.det()

    def test_det_over_biquadratic_ring(self):
        r = BiquadElement.sqrt_a(3, -1)
        M = Matrix([[r, 1], [1, r]])
        assert M.det() == 2

    def test_kron_mixed_product(self):
        rng = random.Random(2)
        mk = lambda n: Matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])  # noqa: E731
        A, B, C, D = mk(2), mk(3), mk(2), mk(3)
        assert A.kron(B) * C.kron(D) == (A * C).kron(B * D)
        assert A.kron(B).det() == A.det() ** 3 * B.det() ** 2

    def test_dimension_errors(self):
        with pytest.raises(DimensionError):
            Matrix([[1, 2]]) * Matrix([[1, 2]])
        with pytest.raises(DimensionError):
            Matrix([[1, 2], [3]])

    def test_block_diag(self):
        M = block_diag(Matrix([[1]]), Matrix([[2, 3], [4, 5]]))
        assert M.tolist() == [[1, 0, 0], [0, 2, 3], [0, 4, 5]]


class TestLinalg:
    def test_integer_kernel_spans_rational_kernel(self):
        rng = random.Random(3)
        for _ in range(20):
            rows = [[rng.randint(-5, 5) for _ in range(6)] for _ in range(3)]
            ker = integer_kernel(rows, 6)
            assert len(ker) == len(nullspace(rows, 6))
            for v in ker:
                assert all(sum(r[i] * v[i] for i in range(6)) == 0 for r in rows)

    def test_integer_kernel_is_saturated(self):
        # 2x - 4y = 0 has integral kernel spanned by (2, 1), not (4, 2)
        assert integer_kernel([[2, -4]], 2) in ([[2, 1]], [[-2, -1]])


class TestLocal:
    def test_valuation(self):
        assert padic_valuation(Fraction(12, 5), 2) == 2
        assert padic_valuation(Fraction(12, 5), 5) == -1
        with pytest.raises(ValuationError):
            padic_valuation(0, 3)

    def test_primes_and_factor(self):
        assert primes_up_to(30) == [p for p in range(31) if is_prime(p)]
        assert factor(360) == {2: 3, 3: 2, 5: 1}

    def test_squarefree_part(self):
        assert squarefree_part(Fraction(-12, 5)) == -15
        assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)

    @pytest.mark.parametrize("a,b,p,expected", [
        (3, -1, 3, -1), (2, 3, 2, -1), (1, 7, 5, 1), (1, 7, 2, 1), (-1, -1, INF, -1),
    ])
    def test_hilbert_examples(self, a, b, p, expected):
        assert hilbert_symbol(a, b, p) == expected

    def test_hilbert_matches_closed_form(self):
        vals = [x for x in range(-30, 31) if x]
        rng = random.Random(4)
        for _ in range(300):
            a, b = rng.choice(vals), rng.choice(vals)
            for p in (2, 3, 5, 7, 11, 13, INF):
                assert hilbert_symbol(a, b, p) == closed_form_hilbert(a, b, p), (a, b, p)

    def test_product_formula(self):
        vals = [Fraction(n, d) for n in range(-15, 16) if n for d in (1, 2, 3, 5)]
        rng = random.Random(5)
        for _ in range(100):
            a, b = rng.choice(vals), rng.choice(vals)
            places = sorted(set(factor(2 * squarefree_part(a) * squarefree_part(b)))) + [INF]
            prod = 1
            for p in places:
                prod *= hilbert_symbol(a, b, p)
            assert prod == 1

    @pytest.mark.parametrize("a,b,places", [
        (3, -1, {2, 3}), (2, 3, {2, 3}), (-1, -1, {2, INF}), (1, 1, set()), (2, 5, {2, 5}),
    ])
    def test_ramified_places(self, a, b, places):
        assert ramified_places(a, b) == frozenset(places)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            hilbert_symbol(0, 1, 3)
