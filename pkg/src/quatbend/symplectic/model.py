"""The right-regular model: an order acting on itself by z -> z conj(gamma),
with the skew pairing beta_mu(z, w) = trd(mu z conj(w)).

Norm-one elements act as integral matrices preserving beta_mu, which gives an
explicit integral lattice in a group rationally equivalent to Sp(4k).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..exact_arith import Matrix, block_diag
from ..quaternion import (OrderBasis, Quaternion, QuaternionAlgebra, conj, matrix_model, nrd,
                          order_closure_check, parse_order_basis, trd)
from .forms import SkewFormZ, form_K, symplectic_divisors


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class RightRegularModel:
    order: OrderBasis
    mu: Quaternion
    copies: int = 1
    gram: SkewFormZ = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.copies < 1:
            raise ModelError("copies must be positive")
        if self.mu.parent != self.order.algebra:
            raise ModelError("mu lies in a different algebra")
        if not order_closure_check(self.order):
            raise ModelError("basis is not closed under multiplication (not an order)")
        object.__setattr__(self, "gram", beta_gram(self))

    @property
    def algebra(self) -> QuaternionAlgebra:
        return self.order.algebra

    @property
    def dim(self):
        return 4 * self.copies

    @classmethod
    def standard(cls, a, b, mu=(0, 1, 0, 0), copies=1):
        A = QuaternionAlgebra(a, b)
        return cls(OrderBasis.standard(A), A(*mu), copies)

    def fingerprint_data(self):
        A = self.algebra
        return "a=%s b=%s basis=%s mu=%s copies=%d" % (
            A.a, A.b, [[str(c) for c in e.coords] for e in self.order.elements],
            [str(c) for c in self.mu.coords], self.copies)


def _single_gram(order: OrderBasis, mu: Quaternion):
    E = order.elements
    return [[trd(mu * E[r] * conj(E[s])) for s in range(4)] for r in range(4)]


def beta_gram(model: RightRegularModel) -> SkewFormZ:
    mu = model.mu
    if trd(mu) != 0:
        raise ModelError("mu = %s is not pure: beta_mu has a symmetric part" % mu)
    if nrd(mu) == 0:
        raise ModelError("mu must be invertible")
    g = _single_gram(model.order, mu)
    if any(Fraction(x).denominator != 1 for r in g for x in r):
        raise ModelError("beta_mu is not integral on this order; rescale mu")
    block = Matrix([[int(x) for x in r] for r in g])
    return SkewFormZ(block_diag(*([block] * model.copies)))


def beta(model: RightRegularModel, z: Quaternion, w: Quaternion):
    return trd(model.mu * z * conj(w))


def rho(model: RightRegularModel, gamma: Quaternion, check_norm=True) -> Matrix:
    """Matrix of z -> z conj(gamma) on the order basis, repeated over the copies."""
    if gamma.parent != model.algebra:
        raise ModelError("gamma lies in a different algebra")
    if check_norm and nrd(gamma) != 1:
        raise ModelError("rho needs reduced norm 1, got %s" % nrd(gamma))
    if not model.order.contains(gamma):
        raise ModelError("%s is not in the order" % gamma)
    g = conj(gamma)
    cols = [model.order.coordinates(e * g) for e in model.order.elements]
    block = Matrix([[int(cols[c][r]) for c in range(4)] for r in range(4)])
    return block_diag(*([block] * model.copies))


def rho_multi(model: RightRegularModel, gammas) -> Matrix:
    """Block sum of rho over copies with a separate quaternion per copy."""
    if len(gammas) != model.copies:
        raise ModelError("need one quaternion per copy")
    single = RightRegularModel(model.order, model.mu, 1)
    return block_diag(*[rho(single, g) for g in gammas])


def model_divisors(model: RightRegularModel):
    return symplectic_divisors(model.gram)


def bad_primes_of_form(model: RightRegularModel):
    from ..exact_arith import factor
    _, divs = model_divisors(model)
    out = set()
    for d in divs:
        out |= set(factor(d))
    return sorted(out)


def quaternionic_unitary_check(M) -> bool:
    """conj(M)^T M == I for a square list-of-lists of quaternions.

    When true the biquadratic image preserves K_n; that cross-check is asserted.
    """
    n = len(M)
    if n == 0 or any(len(r) != n for r in M):
        raise ValueError("need a square quaternion matrix")
    A = M[0][0].parent
    ok = True
    for i in range(n):
        for j in range(n):
            acc = A(0)
            for k in range(n):
                acc = acc + conj(M[k][i]) * M[k][j]
            if acc != (1 if i == j else 0):
                ok = False
    if ok:
        X = _quaternion_block_matrix(M)
        K = form_K(n).gram.map(lambda x: X[0, 0] * 0 + x)
        if X.T * K * X != K:
            raise AssertionError("unitary quaternion matrix whose image is not K_n-symplectic")
    return ok


def _quaternion_block_matrix(M):
    n = len(M)
    blocks = [[matrix_model(q) for q in row] for row in M]
    rows = []
    for i in range(n):
        for r in range(2):
            rows.append([blocks[i][j][r, c] for j in range(n) for c in range(2)])
    return Matrix(rows)


# model description files ----------------------------------------------------------

def parse_model(text: str, base_dir=None) -> RightRegularModel:
    """INI with a [model] section: a, b, order (standard or a file), mu, copies."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.read_string(text)
    if "model" not in cp:
        raise ModelError("model file needs a [model] section")
    sec = cp["model"]
    A = QuaternionAlgebra(Fraction(sec.get("a")), Fraction(sec.get("b")))
    order_spec = sec.get("order", "standard").strip()
    if order_spec == "standard":
        order = OrderBasis.standard(A)
    else:
        path = Path(order_spec)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        order = parse_order_basis(path.read_text())
        if order.algebra != A:
            raise ModelError("order file is for a different algebra")
    mu = A(*[Fraction(x) for x in sec.get("mu", "0 1 0 0").split()])
    copies = sec.getint("copies", 1)
    return RightRegularModel(order, mu, copies)


def load_model(path) -> RightRegularModel:
    path = Path(path)
    return parse_model(path.read_text(), base_dir=path.parent)


def format_model(model: RightRegularModel) -> str:
    A = model.algebra
    if model.order.elements != A.basis():
        raise ModelError("only models over the standard order can be written inline")
    return "[model]\na = %s\nb = %s\norder = standard\nmu = %s\ncopies = %d\n" % (
        A.a, A.b, " ".join(str(c) for c in model.mu.coords), model.copies)
