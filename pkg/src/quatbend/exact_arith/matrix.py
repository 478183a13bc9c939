"""Dense immutable matrices over any commutative ring of exact scalars.

Entries may be ints, Fractions, BiquadElements or Fp residues; the class only
relies on ``+``, ``-``, ``*`` and, for inversion, ``/``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations


class DimensionError(ValueError):
    pass


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows:
            raise DimensionError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def identity(cls, n, one=1, zero=0):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r, c, zero=0):
        return cls([[zero] * c for _ in range(r)])

    @classmethod
    def diag(cls, entries, zero=0):
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]

    def entries(self):
        return [x for r in self.rows for x in r]

    @property
    def T(self):
        return Matrix(zip(*self.rows))

    def map(self, f):
        return Matrix([[f(x) for x in r] for r in self.rows])

    def _zero(self):
        return self.rows[0][0] * 0

    def _one(self):
        return self.rows[0][0] * 0 + 1

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError("shape mismatch %s vs %s" % (self.shape, other.shape))
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self.rows])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError("cannot multiply %s by %s" % (self.shape, other.shape))
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                line = []
                for c in cols:
                    acc = r[0] * c[0]
                    for x, y in zip(r[1:], c[1:]):
                        if x and y:
                            acc = acc + x * y
                    line.append(acc)
                out.append(line)
            return Matrix(out)
        return Matrix([[x * other for x in r] for r in self.rows])

    __matmul__ = __mul__

    def __rmul__(self, scalar):
        return Matrix([[scalar * x for x in r] for r in self.rows])

    def __pow__(self, k: int):
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.nrows, self._one(), self._zero())
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(%s)" % ([[str(x) for x in r] for r in self.rows],)

    def is_identity(self):
        return self.is_square() and all(
            (x == 1) if i == j else (x == 0)
            for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    # structure ---------------------------------------------------------------
    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([x * y for x in r for y in s])
        return Matrix(out)

    def submatrix(self, rows, cols):
        return Matrix([[self.rows[i][j] for j in cols] for i in rows])

    def det(self):
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        sample = self.rows[0][0]
        if isinstance(sample, (int, Fraction)) and not isinstance(sample, bool):
            return _det_field([[Fraction(x) for x in r] for r in self.rows], integral=all(
                isinstance(x, int) for r in self.rows for x in r))
        return _det_leibniz(self.rows)

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse; entries must support division."""
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        sample = self.rows[0][0]
        lift = Fraction if isinstance(sample, int) and not isinstance(sample, bool) else (lambda x: x)
        zero, one = self._zero(), self._one()
        aug = [[lift(x) for x in r] + [one if i == j else zero for j in range(n)]
               for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return Matrix([r[n:] for r in aug])

    def integral(self) -> "Matrix":
        """Convert Fraction entries with denominator 1 to ints (raise otherwise)."""
        def conv(x):
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("entry %s is not integral" % x)
            return x.numerator
        return self.map(conv)

    def is_integral(self):
        return all(Fraction(x).denominator == 1 for r in self.rows for x in r)


def _det_field(rows, integral):
    n = len(rows)
    a = [r[:] for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0 if integral else Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det *= pv
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    if integral:
        return int(det)
    return det


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _det_leibniz(rows):
    n = len(rows)
    if n > 7:
        raise DimensionError("Leibniz determinant limited to n <= 7 over general rings")
    total = None
    for perm in permutations(range(n)):
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        if _perm_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def block_diag(*mats, zero=0):
    n = sum(m.nrows for m in mats)
    c = sum(m.ncols for m in mats)
    out = [[zero] * c for _ in range(n)]
    r0 = c0 = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            for j, x in enumerate(row):
                out[r0 + i][c0 + j] = x
        r0 += m.nrows
        c0 += m.ncols
    return Matrix(out)
