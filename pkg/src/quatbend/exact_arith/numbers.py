"""Scalars: rationals, the biquadratic ring Q[x, y]/(x^2 - a, y^2 - b), its
Klein four-group of sign automorphisms, and prime-field residues."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

Rational = Fraction
_ZERO = Fraction(0)


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/4"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError("cannot interpret %r as an exact rational" % (x,))


def rational_sqrt(x) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    x = as_rational(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def is_rational_square(x) -> bool:
    return rational_sqrt(x) is not None


class GaloisElement(NamedTuple):
    """Sign pair (action on sqrt(a), action on sqrt(b))."""

    sign_a: int = 1
    sign_b: int = 1

    def __mul__(self, other):
        if not isinstance(other, GaloisElement):
            return NotImplemented
        return GaloisElement(self.sign_a * other.sign_a, self.sign_b * other.sign_b)

    def inverse(self):
        return self

    def __str__(self):
        return "(%s,%s)" % ("+" if self.sign_a > 0 else "-", "+" if self.sign_b > 0 else "-")


GALOIS_IDENTITY = GaloisElement(1, 1)
#: Fixed enumeration order used everywhere a cocycle is tabulated.
KLEIN_GROUP = (GaloisElement(1, 1), GaloisElement(1, -1),
               GaloisElement(-1, 1), GaloisElement(-1, -1))


class BiquadElement:
    """c0 + c1*sqrt(a) + c2*sqrt(b) + c3*sqrt(ab) with exact rational coefficients.

    The arithmetic is that of the ring Q[x, y]/(x^2 - a, y^2 - b); nothing
    assumes a or b is a non-square, so zero divisors can occur when they are.
    """

    __slots__ = ("a", "b", "coeffs")

    def __init__(self, a, b, coeffs=(0, 0, 0, 0)):
        self.a = as_rational(a)
        self.b = as_rational(b)
        if self.a == 0 or self.b == 0:
            raise ValueError("biquadratic parameters must be nonzero")
        c = tuple(as_rational(x) for x in coeffs)
        if len(c) != 4:
            raise ValueError("need four coefficients")
        self.coeffs = c

    # constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, a, b, x):
        return cls(a, b, (x, 0, 0, 0))

    @classmethod
    def sqrt_a(cls, a, b):
        return cls(a, b, (0, 1, 0, 0))

    @classmethod
    def sqrt_b(cls, a, b):
        return cls(a, b, (0, 0, 1, 0))

    @classmethod
    def sqrt_ab(cls, a, b):
        return cls(a, b, (0, 0, 0, 1))

    def _like(self, coeffs):
        # internal constructor: coefficients are already Fractions
        out = object.__new__(BiquadElement)
        out.a, out.b, out.coeffs = self.a, self.b, tuple(coeffs)
        return out

    def _coerce(self, other):
        if isinstance(other, BiquadElement):
            if (other.a, other.b) != (self.a, self.b):
                raise ValueError("biquadratic elements from different rings")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._like((Fraction(other), _ZERO, _ZERO, _ZERO))
        return None

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._like(tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return self._like(tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._like(tuple(x * other for x in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # basis 1, sqrt a, sqrt b, sqrt ab is indexed by bitmasks 0..3;
        # e_i e_j = (a if i, j share bit 1)(b if they share bit 2) e_{i xor j}
        a, b = self.a, self.b
        c, d = self.coeffs, o.coeffs
        out = [_ZERO, _ZERO, _ZERO, _ZERO]
        for i in range(4):
            ci = c[i]
            if not ci:
                continue
            for j in range(4):
                dj = d[j]
                if not dj:
                    continue
                t = ci * dj
                shared = i & j
                if shared & 1:
                    t *= a
                if shared & 2:
                    t *= b
                out[i ^ j] += t
        return self._like(out)

    __rmul__ = __mul__

    def galois(self, s: GaloisElement) -> "BiquadElement":
        c0, c1, c2, c3 = self.coeffs
        return self._like((c0, s.sign_a * c1, s.sign_b * c2, s.sign_a * s.sign_b * c3))

    def norm(self) -> Fraction:
        """Product of the four Galois conjugates (a rational number)."""
        prod = self
        for s in KLEIN_GROUP[1:]:
            prod = prod * self.galois(s)
        return prod.coeffs[0]

    def inverse(self) -> "BiquadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("%s is not invertible in the biquadratic ring" % self)
        rest = self._like((1, 0, 0, 0))
        for s in KLEIN_GROUP[1:]:
            rest = rest * self.galois(s)
        return rest * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._like(tuple(x / other for x in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self._like((1, 0, 0, 0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # predicates -----------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("%s is not rational" % self)
        return self.coeffs[0]

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (BiquadElement, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.a, self.b, self.coeffs))

    def __repr__(self):
        return "BiquadElement(%s, %s, %s)" % (self.a, self.b, tuple(str(c) for c in self.coeffs))

    def __str__(self):
        names = ("", "√a", "√b", "√ab")
        parts = []
        for c, n in zip(self.coeffs, names):
            if c:
                parts.append(("%s%s" % (c, n)) if n else str(c))
        return " + ".join(parts) if parts else "0"


def galois_act(s: GaloisElement, x):
    """Apply a Klein-group element to a ring element; rationals are fixed."""
    if isinstance(x, BiquadElement):
        return x.galois(s)
    return x


@dataclass(frozen=True)
class Fp:
    """Residue class modulo an odd prime p."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("residues modulo different primes")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fp(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fp(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fp(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fp(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse mod %d" % self.p)
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __pow__(self, k):
        return Fp(pow(self.value, k, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        o = self._other(other) if isinstance(other, (Fp, int)) else None
        if o is None:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return "Fp(%d mod %d)" % (self.value, self.p)
