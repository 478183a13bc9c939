"""Quaternion algebras (a, b) over Q, their orders and norm-one elements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exact_arith import (INF, BiquadElement, Matrix, as_rational, is_rational_square,
                          ramified_places, solve)


class AlgebraError(ValueError):
    """An algebra fails a structural requirement (definite, split, ...)."""


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: Fraction
    b: Fraction
    ramification: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b = as_rational(self.a), as_rational(self.b)
        if a == 0 or b == 0:
            raise AlgebraError("a and b must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "ramification", ramified_places(a, b))

    @property
    def is_division(self) -> bool:
        return bool(self.ramification)

    @property
    def is_indefinite(self) -> bool:
        return INF not in self.ramification

    def require_indefinite_division(self):
        if not self.is_indefinite:
            raise AlgebraError("(%s,%s) is not indefinite (ramified at infinity)" % (self.a, self.b))
        if not self.is_division:
            raise AlgebraError("(%s,%s) is split (a matrix algebra), not a division algebra"
                               % (self.a, self.b))

    def __call__(self, x0=0, x1=0, x2=0, x3=0) -> "Quaternion":
        return Quaternion(self, (x0, x1, x2, x3))

    def one(self):
        return self(1)

    def basis(self):
        return (self(1), self(0, 1), self(0, 0, 1), self(0, 0, 0, 1))

    def __str__(self):
        return "(%s,%s)" % (self.a, self.b)


def ramification_set(algebra: QuaternionAlgebra) -> frozenset:
    return algebra.ramification


class Quaternion:
    """x0 + x1 i + x2 j + x3 ij with i^2 = a, j^2 = b, ij = -ji.

    Coordinates are normally Fractions; any commutative ring containing Q
    works (the eigenframe code uses biquadratic coefficients).
    """

    __slots__ = ("parent", "coords")

    def __init__(self, parent: QuaternionAlgebra, coords):
        self.parent = parent
        self.coords = tuple(as_rational(c) if isinstance(c, (int, str)) else c for c in coords)
        if len(self.coords) != 4:
            raise ValueError("a quaternion has four coordinates")

    def _check(self, other):
        if not isinstance(other, Quaternion):
            return False
        if other.parent != self.parent:
            raise AlgebraError("quaternions from different algebras")
        return True

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.parent(other)
        if not self._check(other):
            return NotImplemented
        return Quaternion(self.parent, [x + y for x, y in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(self.parent, [-x for x in self.coords])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.parent(other)
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            if isinstance(other, (int, Fraction, BiquadElement)):
                return Quaternion(self.parent, [x * other for x in self.coords])
            return NotImplemented
        self._check(other)
        return mul(self, other)

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, Fraction, BiquadElement)):
            return Quaternion(self.parent, [scalar * x for x in self.coords])
        return NotImplemented

    def __truediv__(self, scalar):
        return Quaternion(self.parent, [x / scalar for x in self.coords])

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.parent.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        n = nrd(self)
        if n == 0:
            raise ZeroDivisionError("quaternion of reduced norm 0")
        return conj(self) / n

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.parent(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self.parent == other.parent and all(x == y for x, y in zip(self.coords, other.coords))

    def __hash__(self):
        return hash((self.parent.a, self.parent.b, self.coords))

    def is_pure(self):
        return self.coords[0] == 0

    def is_integral(self):
        return all(Fraction(c).denominator == 1 for c in self.coords)

    def __repr__(self):
        return "Quaternion%s%s" % (self.parent, tuple(str(c) for c in self.coords))

    def __str__(self):
        names = ("", "i", "j", "ij")
        parts = [("%s%s" % (c, n)) if n else str(c) for c, n in zip(self.coords, names) if c]
        return " + ".join(parts) if parts else "0"


def mul(q: Quaternion, r: Quaternion) -> Quaternion:
    a, b = q.parent.a, q.parent.b
    x0, x1, x2, x3 = q.coords
    y0, y1, y2, y3 = r.coords
    return Quaternion(q.parent, (
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
        x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    ))


def conj(q: Quaternion) -> Quaternion:
    x0, x1, x2, x3 = q.coords
    return Quaternion(q.parent, (x0, -x1, -x2, -x3))


def nrd(q: Quaternion):
    a, b = q.parent.a, q.parent.b
    x0, x1, x2, x3 = q.coords
    return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3


def trd(q: Quaternion):
    return 2 * q.coords[0]


def matrix_model(q: Quaternion) -> Matrix:
    """The 2x2 biquadratic matrix of q; an algebra homomorphism with det = nrd."""
    a, b = q.parent.a, q.parent.b
    x0, x1, x2, x3 = q.coords
    ra, rb, rab = BiquadElement.sqrt_a(a, b), BiquadElement.sqrt_b(a, b), BiquadElement.sqrt_ab(a, b)
    one = BiquadElement.scalar(a, b, 1)
    return Matrix([
        [one * x0 + ra * x1, rb * x2 + rab * x3],
        [rb * x2 - rab * x3, one * x0 - ra * x1],
    ])


@dataclass(frozen=True)
class PellElement:
    """Norm-one x0 + x1 i (x1 != 0); its eigenvalues are x0 +- x1 sqrt(a)."""

    gamma: Quaternion

    def __post_init__(self):
        g = self.gamma
        if g.coords[2] or g.coords[3]:
            raise ValueError("Pell element must lie in Q(i)")
        if g.coords[1] == 0:
            raise ValueError("Pell element must be non-central (x1 != 0)")
        if nrd(g) != 1:
            raise ValueError("Pell element must have reduced norm 1")

    @property
    def x0(self):
        return self.gamma.coords[0]

    @property
    def x1(self):
        return self.gamma.coords[1]

    def eigenvalue(self) -> BiquadElement:
        """lambda = x0 + x1 sqrt(a)."""
        A = self.gamma.parent
        return BiquadElement(A.a, A.b, (self.x0, self.x1, 0, 0))


def pell_search(algebra: QuaternionAlgebra, height: int):
    """All x0 + x1 i in the standard order with 1 <= x0 <= height, x1 >= 1, norm 1."""
    a = algebra.a
    if a.denominator != 1 or a <= 0:
        raise ValueError("pell_search needs a positive integer a")
    a = int(a)
    if is_rational_square(a):
        raise ValueError("a = %d is a square; x0^2 - a x1^2 = 1 has no non-trivial solution" % a)
    out = []
    for x0 in range(1, height + 1):
        t = x0 * x0 - 1
        if t % a:
            continue
        x1 = math.isqrt(t // a)
        if x1 >= 1 and x1 * x1 * a == t:
            out.append(PellElement(algebra(x0, x1)))
    return out


@dataclass(frozen=True)
class OrderBasis:
    """Four quaternions e0 = 1, e1, e2, e3 whose Z-span is meant to be an order."""

    algebra: QuaternionAlgebra
    elements: tuple

    def __post_init__(self):
        if len(self.elements) != 4:
            raise ValueError("an order basis has four elements")
        if self.elements[0] != self.algebra.one():
            raise ValueError("first basis element must be 1")
        m = Matrix([list(e.coords) for e in self.elements]).T
        if m.det() == 0:
            raise ValueError("basis does not span the algebra")

    @classmethod
    def standard(cls, algebra: QuaternionAlgebra):
        for c in (algebra.a, algebra.b):
            if c.denominator != 1:
                raise ValueError("standard order needs integral a, b")
        return cls(algebra, algebra.basis())

    def coordinates(self, q: Quaternion):
        """Rational coordinates of q in this basis."""
        cols = [list(e.coords) for e in self.elements]
        rows = [[cols[c][r] for c in range(4)] for r in range(4)]
        x = solve(rows, list(q.coords))
        return x

    def element(self, coords) -> Quaternion:
        out = self.algebra(0)
        for c, e in zip(coords, self.elements):
            out = out + e * as_rational(c)
        return out

    def structure_constants(self):
        """c[r][s] = coordinates of e_r * e_s in the basis."""
        return [[self.coordinates(x * y) for y in self.elements] for x in self.elements]

    def contains(self, q: Quaternion) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coordinates(q))


def order_closure_check(basis: OrderBasis) -> bool:
    return all(Fraction(c).denominator == 1
               for row in basis.structure_constants() for vec in row for c in vec)


def parse_order_basis(text: str) -> OrderBasis:
    """Header line "a b", then four lines of four rationals p/q."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 5:
        raise ValueError("order basis file needs a header and four basis lines, got %d lines"
                         % len(lines))
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'a b'")
    algebra = QuaternionAlgebra(Fraction(head[0]), Fraction(head[1]))
    elems = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError("basis line %r needs four rationals" % ln)
        elems.append(algebra(*[Fraction(x) for x in parts]))
    return OrderBasis(algebra, tuple(elems))


def load_order_basis(path) -> OrderBasis:
    return parse_order_basis(Path(path).read_text())


def format_order_basis(basis: OrderBasis) -> str:
    lines = ["%s %s" % (basis.algebra.a, basis.algebra.b)]
    for e in basis.elements:
        lines.append(" ".join(str(c) for c in e.coords))
    return "\n".join(lines) + "\n"
