"""p-adic valuations and Hilbert symbols over Q.

The Hilbert symbol is decided by a bounded Hensel search rather than the
closed-form tables: after reducing a and b to squarefree integers, a
primitive p-adic zero of  a x^2 + b y^2 - z^2  exists iff there is a primitive
vector mod p^k that is a zero mod p^k and whose gradient has valuation e with
2e + 1 <= k.  With squarefree coefficients some coordinate of a primitive zero
is a unit, so e <= v_p(2) + 1 and the search depth is bounded.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .numbers import as_rational

INF = math.inf


class ValuationError(ValueError):
    """Valuation of zero requested."""


def padic_valuation(x, p: int) -> int:
    x = as_rational(x)
    if x == 0:
        raise ValuationError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError("p must be a prime")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def factor(n: int) -> dict:
    """Trial-division factorization of a nonzero integer (sign dropped)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(bound: int):
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(bound + 1) if sieve[i]]


def squarefree_part(x) -> int:
    """The squarefree integer in the square class of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("0 has no square class")
    n = x.numerator * x.denominator  # same square class as n/d
    sign = -1 if n < 0 else 1
    out = 1
    for q, e in factor(n).items():
        if e % 2:
            out *= q
    return sign * out


def _sqrt_table(mod):
    table = {}
    for z in range(mod):
        table.setdefault(z * z % mod, []).append(z)
    return table


def _val_mod(x, p, k):
    """Valuation of a residue mod p^k (k when the residue is 0)."""
    x %= p ** k
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _local_zero_exists(a: int, b: int, p: int) -> bool:
    e_max = (1 if p == 2 else 0) + 1
    v2 = 1 if p == 2 else 0
    for e in range(e_max + 1):
        k = 2 * e + 1
        mod = p ** k
        roots = _sqrt_table(mod)

        def liftable(x, y, z):
            grad = min(_val_mod(2 * a * x, p, k), _val_mod(2 * b * y, p, k), _val_mod(2 * z, p, k))
            return 2 * grad + 1 <= k

        # x normalised to 1
        for y in range(mod):
            for z in roots.get((a + b * y * y) % mod, ()):
                if liftable(1, y, z):
                    return True
        # x divisible by p, y normalised to 1
        for x in range(0, mod, p):
            for z in roots.get((a * x * x + b) % mod, ()):
                if liftable(x, 1, z):
                    return True
        # x, y divisible by p, z = 1; its gradient has valuation v_p(2)
        if 2 * v2 + 1 <= k:
            for x in range(0, mod, p):
                for y in range(0, mod, p):
                    if (a * x * x + b * y * y - 1) % mod == 0:
                        return True
    return False


def hilbert_symbol(a, b, p) -> int:
    """(a, b)_p for nonzero rationals; p a prime or INF."""
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if p == INF:
        return 1 if (a > 0 or b > 0) else -1
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError("p must be a prime or INF, got %r" % (p,))
    a0, b0 = squarefree_part(a), squarefree_part(b)
    if p != 2 and a0 % p and b0 % p:
        # both units at an odd prime: the reduction mod p has a smooth zero (Chevalley-Warning)
        return 1
    return 1 if _local_zero_exists(a0, b0, p) else -1


def ramified_places(a, b):
    """Places where (a, b) has Hilbert symbol -1: primes dividing 2ab and INF."""
    a0, b0 = squarefree_part(a), squarefree_part(b)
    candidates = sorted(set(factor(2 * a0 * b0)))
    out = [q for q in candidates if hilbert_symbol(a0, b0, q) == -1]
    if hilbert_symbol(a0, b0, INF) == -1:
        out.append(INF)
    return frozenset(out)


def rational_is_p_integral(x, p) -> bool:
    return Fraction(x).denominator % p != 0
