"""Commutants, the eigen-frame of a Pell element and the bend-element search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exact_arith import (BiquadElement, Matrix, block_diag, integer_kernel, nullspace,
                           rational_sqrt, size_reduce)
from ..quaternion import PellElement, Quaternion
from .forms import form_K, is_symplectic
from .model import RightRegularModel, rho


class FrameError(ValueError):
    pass


class SearchBudgetError(RuntimeError):
    pass


def _commutant_system(mats):
    n = mats[0].nrows
    rows = []
    for M in mats:
        if M.shape != (n, n):
            raise ValueError("commutant inputs must share one square size")
        # (XM - MX)[r][c] = sum_k X[r][k] M[k][c] - M[r][k] X[k][c]
        for r in range(n):
            for c in range(n):
                eq = [0] * (n * n)
                for k in range(n):
                    eq[r * n + k] += M[k, c]
                    eq[k * n + c] -= M[r, k]
                rows.append(eq)
    return rows, n


def commutant_basis(mats):
    """Q-basis of {X : XM = MX for every M in mats}."""
    rows, n = _commutant_system(mats)
    return [Matrix([v[r * n:(r + 1) * n] for r in range(n)]) for v in nullspace(rows, n * n)]


def commutant_lattice(mats):
    """Z-basis of the integral matrices commuting with integral mats, size-reduced."""
    rows, n = _commutant_system(mats)
    basis = size_reduce(integer_kernel(rows, n * n))
    return [Matrix([v[r * n:(r + 1) * n] for r in range(n)]) for v in basis]


def interleave_permutation(n) -> Matrix:
    """P with P e_k = e_{2k-1} and P e_{n+k} = e_{2k} (1-indexed)."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for k in range(n):
        rows[2 * k][k] = 1
        rows[2 * k + 1][n + k] = 1
    return Matrix(rows)


def centralizer_pattern_check(M: Matrix, n: int) -> bool:
    """Does M commute with I_n (x) diag(l, 1/l) for generic l?

    The pattern: entries linking an odd and an even coordinate vanish; P^T M P
    is then block-diagonal (M1, M2).  For K_n-symplectic M also M2 = M1^{-T}.
    """
    if M.shape != (2 * n, 2 * n):
        raise ValueError("M must be of size 2n")
    if any(M[i, j] for i in range(2 * n) for j in range(2 * n) if (i - j) % 2):
        return False
    P = interleave_permutation(n)
    X = P.T * M * P
    M1 = X.submatrix(range(n), range(n))
    M2 = X.submatrix(range(n, 2 * n), range(n, 2 * n))
    zero_blocks = X.submatrix(range(n), range(n, 2 * n)).is_zero() and \
        X.submatrix(range(n, 2 * n), range(n)).is_zero()
    if not zero_blocks:
        return False
    K = form_K(n).gram
    std = Matrix([[0] * n + [int(i == j) for j in range(n)] for i in range(n)]
                 + [[-int(i == j) for j in range(n)] + [0] * n for i in range(n)])
    if P.T * K * P != std:
        raise AssertionError("interleaving permutation does not carry K_n to the standard form")
    if is_symplectic(M, K):
        return M2 == M1.inverse().T
    return True


# eigen-frame ------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralizerFrame:
    pell: PellElement
    frame: Matrix        # columns are frame vectors over Q(sqrt a)
    frame_inv: Matrix
    blocks: tuple        # column index pairs, (lambda, 1/lambda) in each
    eigenvalues: tuple
    form: Matrix         # F^T G F

    def to_frame(self, M: Matrix) -> Matrix:
        return self.frame_inv * _lift(M, self.frame) * self.frame


def _lift(M: Matrix, like: Matrix) -> Matrix:
    ref = like[0, 0]
    return M.map(lambda x: x if isinstance(x, BiquadElement) else ref * 0 + x)


def _anticommuting_pure(mu: Quaternion):
    A = mu.parent
    units = [A(0, 1), A(0, 0, 1), A(0, 0, 0, 1)]
    cols = [list((mu * e + e * mu).coords) for e in units]
    rows = [[cols[c][r] for c in range(3)] for r in range(4)]
    return [sum((e * x for e, x in zip(units, v)), A(0)) for v in nullspace(rows, 3)]


def _square_one_element(mu: Quaternion):
    """Pure u anticommuting with mu, u^2 = 1, coordinates in Q(sqrt a)."""
    A = mu.parent
    a, b = A.a, A.b
    u1, u2 = _anticommuting_pure(mu)
    sq1 = (u1 * u1).coords[0]
    sq2 = (u2 * u2).coords[0]
    half = (u1 * u2 + u2 * u1).coords[0] / 2
    disc = half * half - sq1 * sq2
    if disc == 0:
        raise FrameError("degenerate anticommutant")
    q = rational_sqrt(disc)
    if q is not None:
        delta = BiquadElement(a, b, (q, 0, 0, 0))
    else:
        q = rational_sqrt(disc / a)
        if q is None:
            raise FrameError("no idempotent splitting over Q(sqrt a) for mu = %s" % mu)
        delta = BiquadElement(a, b, (0, q, 0, 0))
    one = BiquadElement(a, b, (1, 0, 0, 0))
    if sq1 != 0:
        r1 = (delta - half) / sq1
        r2 = (-delta - half) / sq1
        t = (one * (1 / sq1) - 1) / (r2 - r1)
        s = one + r2 * t
    else:
        t = one
        s = one * ((1 - sq2) / (2 * half))
    u = u1 * s + u2 * t
    if u * u != A(1):
        raise AssertionError("idempotent construction failed")
    return u


def _single_frame(model: RightRegularModel, pell: PellElement):
    A = model.algebra
    a, b = A.a, A.b
    L = lambda *c: BiquadElement(a, b, tuple(c) + (0,) * (4 - len(c)))  # noqa: E731
    u = _square_one_element(model.mu)
    one = A(L(1))
    idem = [(one + u) * Fraction(1, 2), (one - u) * Fraction(1, 2)]
    f = Quaternion(A, (L(Fraction(1, 2)), L(0, Fraction(1, 2) / a), L(0), L(0)))
    j = A(0, 0, 1)
    lam = pell.eigenvalue()
    basis_mat = Matrix([list(e.coords) for e in model.order.elements]).T
    to_coords = basis_mat.inverse()
    vecs, eig = [], []
    for e in idem:
        for y in A.basis():
            v = e * y * f
            if any(v.coords):
                break
        w = v * j
        for q, ev in ((w, lam), (v, lam.inverse())):
            col = [sum((to_coords[r, k] * q.coords[k] for k in range(4)), L(0)) for r in range(4)]
            vecs.append(col)
            eig.append(ev)
    return vecs, eig


def eigenframe(model: RightRegularModel, pell: PellElement) -> CentralizerFrame:
    if pell.gamma.parent != model.algebra:
        raise FrameError("Pell element from another algebra")
    if pell.x1 == 0:
        raise FrameError("gamma is central")
    vecs, eig = _single_frame(model, pell)
    k = model.copies
    z = vecs[0][0] * 0
    cols, eigs, blocks = [], [], []
    for c in range(k):
        for bi in range(2):
            idx = []
            for v, ev in zip(vecs[2 * bi:2 * bi + 2], eig[2 * bi:2 * bi + 2]):
                col = [z] * (4 * k)
                col[4 * c:4 * c + 4] = v
                idx.append(len(cols))
                cols.append(col)
                eigs.append(ev)
            blocks.append(tuple(idx))
    F = Matrix(cols).T
    Finv = F.inverse()
    G = _lift(model.gram.gram, F)
    form = F.T * G * F
    frame = CentralizerFrame(pell, F, Finv, tuple(blocks), tuple(eigs), form)
    R = frame.to_frame(rho(model, pell.gamma))
    if R != Matrix.diag(list(eigs), zero=z):
        raise AssertionError("frame does not diagonalise rho(gamma)")
    for x, y in itertools.combinations(range(len(blocks)), 2):
        if any(form[i, j] for i in blocks[x] for j in blocks[y]):
            raise AssertionError("frame blocks are not form-orthogonal")
    return frame


def genericity_check(B: Matrix, frame: CentralizerFrame) -> bool:
    """False when B carries some proper nonempty union of blocks onto a union of blocks."""
    M = frame.to_frame(B)
    blocks = frame.blocks
    n = len(blocks)
    owner = {i: bi for bi, blk in enumerate(blocks) for i in blk}
    for size in range(1, n):
        for subset in itertools.combinations(range(n), size):
            cols = [c for bi in subset for c in blocks[bi]]
            hit = {owner[r] for r in range(M.nrows) for c in cols if M[r, c]}
            if len(hit) == len(subset):
                return False
    return True


# bend-element search ------------------------------------------------------------------

@dataclass(frozen=True)
class BendElement:
    matrix: Matrix
    height: int
    coords: tuple
    commutes: bool
    symplectic: bool
    generic: bool

    @property
    def verified(self):
        return self.commutes and self.symplectic and self.generic

    def key(self):
        return (self.height, tuple(self.matrix.entries()))


def make_bend_element(B: Matrix, model: RightRegularModel, gamma_image: Matrix, frame,
                      height=0, coords=()) -> BendElement:
    return BendElement(B, height, tuple(coords), B * gamma_image == gamma_image * B,
                       is_symplectic(B, model.gram), genericity_check(B, frame))


def b_search(model: RightRegularModel, pell: PellElement, height: int, max_box=5 * 10 ** 7,
             chunk=1 << 17, frame=None):
    """Generic symplectic elements of the commutant lattice of rho(gamma) with
    coordinates in [-height, height], sorted by (height, entries)."""
    if height < 0:
        raise ValueError("height must be nonnegative")
    R = rho(model, pell.gamma)
    frame = frame or eigenframe(model, pell)
    basis = commutant_lattice([R])
    d = len(basis)
    n = R.nrows
    width = 2 * height + 1
    if width ** d > max_box:
        raise SearchBudgetError("search box %d^%d exceeds the budget %d" % (width, d, max_box))
    if height == 0:
        return []
    Bs = np.array([M.tolist() for M in basis], dtype=np.int64).reshape(d, n * n)
    G = np.array(model.gram.gram.tolist(), dtype=np.int64)
    vals = np.arange(-height, height + 1, dtype=np.int64)
    lead = 0
    while lead < d and width ** (d - lead) > chunk:
        lead += 1
    tail = np.array(list(itertools.product(vals, repeat=d - lead)), dtype=np.int64).reshape(
        -1, d - lead)
    found = []
    for head in itertools.product(vals.tolist(), repeat=lead):
        coeffs = np.hstack([np.tile(np.array(head, dtype=np.int64), (len(tail), 1)), tail]) \
            if lead else tail
        mats = (coeffs @ Bs).reshape(-1, n, n)
        lhs = np.einsum("mji,jk,mkl->mil", mats, G, mats)
        ok = np.all(lhs == G, axis=(1, 2))
        for idx in np.nonzero(ok)[0]:
            found.append((coeffs[idx].tolist(), mats[idx].tolist()))
    out = []
    for c, m in found:
        B = Matrix(m)
        be = make_bend_element(B, model, R, frame, max(abs(x) for x in c), c)
        if be.verified:
            out.append(be)
    out.sort(key=BendElement.key)
    return out


def lattice_dimension(model: RightRegularModel, pell: PellElement) -> int:
    return len(commutant_lattice([rho(model, pell.gamma)]))


def diagonal_pattern_matrix(lam, n):
    """I_n (x) diag(lam, 1/lam) as a helper for pattern tests."""
    return block_diag(*([Matrix([[lam, 0], [0, 1 / lam]])] * n))
