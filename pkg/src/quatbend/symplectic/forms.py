"""Integral skew forms, the diagonal embedding and the symplectic normal form."""

from __future__ import annotations

from dataclasses import dataclass

from ..exact_arith import DimensionError, Matrix

K2 = Matrix([[0, 1], [-1, 0]])


class DegenerateFormError(ValueError):
    pass


@dataclass(frozen=True)
class SkewFormZ:
    gram: Matrix

    def __post_init__(self):
        g = self.gram
        if not g.is_square() or g.nrows % 2:
            raise DimensionError("a skew form needs an even square Gram matrix")
        if not all(isinstance(x, int) for x in g.entries()):
            raise ValueError("Gram matrix must be integral")
        if g.T != -g:
            raise ValueError("Gram matrix is not skew-symmetric")
        if g.det() == 0:
            raise DegenerateFormError("Gram matrix is singular")

    @property
    def dim(self):
        return self.gram.nrows

    def det(self):
        return self.gram.det()

    def inverse_transform(self, m: Matrix) -> Matrix:
        """m^{-1} for m preserving the form: G^{-1} m^T G."""
        return (self.gram.inverse() * m.T * self.gram).integral()


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    return A.kron(B)


def form_K(n: int) -> SkewFormZ:
    """K_n = I_n (x) K with K = [[0, 1], [-1, 0]]."""
    if n < 1:
        raise DimensionError("n must be positive")
    return SkewFormZ(Matrix.identity(n).kron(K2))


def phi_n(A: Matrix, n: int) -> Matrix:
    """The diagonal embedding A -> I_n (x) A."""
    if A.shape != (2, 2):
        raise DimensionError("phi_n takes a 2x2 matrix")
    zero = A[0, 0] * 0
    return Matrix.identity(n, zero + 1, zero).kron(A)


def is_symplectic(M: Matrix, form) -> bool:
    G = form.gram if isinstance(form, SkewFormZ) else form
    if M.shape != G.shape:
        raise DimensionError("matrix and form sizes differ")
    return M.T * G * M == G


def symplectic_divisors(form):
    """Unimodular U and d_1 | d_2 | ... with U^T G U = (+) d_i K.

    Pivot on the smallest nonzero entry, clear its two rows against the rest,
    and restart whenever a smaller remainder appears.  A remaining entry not
    divisible by the pivot is folded into the pivot row, which also produces a
    smaller remainder, so the divisors come out in divisibility order.
    """
    G = form.gram if isinstance(form, SkewFormZ) else form
    n = G.nrows
    g = [list(r) for r in G.rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def add(dst, src, f):
        # e_dst += f * e_src, acting on the columns of U and by congruence on g
        if not f:
            return
        for row in u:
            row[dst] += f * row[src]
        for row in g:
            row[dst] += f * row[src]
        g[dst] = [x + f * y for x, y in zip(g[dst], g[src])]

    def swap(i, j):
        if i == j:
            return
        for row in u:
            row[i], row[j] = row[j], row[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    def neg(i):
        for row in u:
            row[i] = -row[i]
        for row in g:
            row[i] = -row[i]
        g[i] = [-x for x in g[i]]

    for s in range(0, n, 2):
        while True:
            best = None
            for i in range(s, n):
                for j in range(i + 1, n):
                    if g[i][j] and (best is None or abs(g[i][j]) < abs(g[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise DegenerateFormError("form is degenerate")
            i, j = best
            swap(s, i)
            if j == s:
                j = i
            swap(s + 1, j)
            if g[s][s + 1] < 0:
                neg(s + 1)
            d = g[s][s + 1]
            clean = True
            for k in range(s + 2, n):
                add(k, s + 1, -(g[s][k] // d))
                add(k, s, g[s + 1][k] // d)
                if g[s][k] or g[s + 1][k]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(s + 2, n) for j in range(s + 2, n) if g[i][j] % d), None)
            if bad is None:
                break
            add(s, bad[0], 1)
    U = Matrix(u)
    return U, tuple(g[2 * k][2 * k + 1] for k in range(n // 2))
