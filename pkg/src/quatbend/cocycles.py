"""Galois 1-cocycles over the Klein quotient Gal(Q(sqrt a, sqrt b)/Q) and their
connecting maps into +-1 valued factor sets.

Everything is finite: the group has four elements, cocycle identities are
checked on all pairs, and coboundaries are found by trying all sign maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exact_arith import (GALOIS_IDENTITY, KLEIN_GROUP, BiquadElement, GaloisElement, Matrix,
                          as_rational, is_rational_square, nullspace, rational_sqrt)
from .symplectic.forms import K2, form_K

ORTHOGONAL = "orthogonal"
LINEAR = "linear"
SYMPLECTIC = "symplectic"
TARGETS = (ORTHOGONAL, LINEAR, SYMPLECTIC)


class DegenerateQuotientError(ValueError):
    """a or b is a square, so the Klein quotient does not act faithfully."""


class LiftError(ValueError):
    """A representative cannot be rescaled to multiplier +-1 over the ring."""


def to_ring(M: Matrix, a, b) -> Matrix:
    def conv(x):
        if isinstance(x, BiquadElement):
            return x
        return BiquadElement.scalar(a, b, x)
    return M.map(conv)


def act(s: GaloisElement, M: Matrix) -> Matrix:
    return M.map(lambda x: x.galois(s))


def projective_sign(X: Matrix, Y: Matrix):
    """+1 if X == Y, -1 if X == -Y, else None."""
    if X == Y:
        return 1
    if X == -Y:
        return -1
    return None


@dataclass(frozen=True)
class Cocycle1:
    target: str
    a: Fraction
    b: Fraction
    values: tuple  # matrices in KLEIN_GROUP order

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError("unknown target %r" % self.target)
        if len(self.values) != 4:
            raise ValueError("a Klein cocycle has four values")
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        vals = tuple(to_ring(M, self.a, self.b) for M in self.values)
        object.__setattr__(self, "values", vals)
        n = vals[0].nrows
        if any(M.shape != (n, n) for M in vals):
            raise ValueError("cocycle values must be square of one size")
        if self.target == LINEAR and n != 2:
            raise ValueError("projective-linear target is 2x2 only")
        if self.target == SYMPLECTIC and n % 2:
            raise ValueError("symplectic target needs even size")

    @classmethod
    def from_dict(cls, target, a, b, mapping):
        return cls(target, a, b, tuple(mapping[s] for s in KLEIN_GROUP))

    @property
    def size(self):
        return self.values[0].nrows

    def __call__(self, s: GaloisElement) -> Matrix:
        return self.values[KLEIN_GROUP.index(GaloisElement(*s))]

    def retarget(self, target):
        return Cocycle1(target, self.a, self.b, self.values)

    def __str__(self):
        lines = ["%s cocycle of size %d over (%s,%s)" % (self.target, self.size, self.a, self.b)]
        for s, M in zip(KLEIN_GROUP, self.values):
            lines.append("  %s: %s" % (s, [[str(x) for x in r] for r in M.rows]))
        return "\n".join(lines)


def t_cocycle(a, b, strict=False) -> Cocycle1:
    """T^{a,b}: identity, diag(1,-1), antidiag(1,1), antidiag(1,-1)."""
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    if strict and (is_rational_square(a) or is_rational_square(b)):
        raise DegenerateQuotientError(
            "square parameter in (%s,%s): the Klein quotient is not faithful" % (a, b))
    vals = {
        GaloisElement(1, 1): Matrix([[1, 0], [0, 1]]),
        GaloisElement(1, -1): Matrix([[1, 0], [0, -1]]),
        GaloisElement(-1, 1): Matrix([[0, 1], [1, 0]]),
        GaloisElement(-1, -1): Matrix([[0, 1], [-1, 0]]),
    }
    return Cocycle1.from_dict(LINEAR, a, b, vals)


def trivial_cocycle(a, b, n, target=ORTHOGONAL) -> Cocycle1:
    return Cocycle1(target, a, b, (Matrix.identity(n),) * 4)


def is_cocycle(f: Cocycle1) -> bool:
    if projective_sign(f(GALOIS_IDENTITY), Matrix.identity(f.size, *_one_zero(f))) != 1:
        return False
    for s in KLEIN_GROUP:
        for t in KLEIN_GROUP:
            if projective_sign(f(s * t), f(s) * act(s, f(t))) is None:
                return False
    return True


def _one_zero(f):
    one = BiquadElement.scalar(f.a, f.b, 1)
    return one, one * 0


def _basis_elements(a, b):
    return (BiquadElement(a, b, (1, 0, 0, 0)), BiquadElement(a, b, (0, 1, 0, 0)),
            BiquadElement(a, b, (0, 0, 1, 0)), BiquadElement(a, b, (0, 0, 0, 1)))


def fixed_algebra(f: Cocycle1):
    """Q-basis of {M : f(s) s(M) = M f(s) for all s}, as biquadratic matrices."""
    n = f.size
    _, zero = _one_zero(f)
    basis = _basis_elements(f.a, f.b)
    unknowns = [(r, c, k) for r in range(n) for c in range(n) for k in range(4)]
    images = []
    for r, c, k in unknowns:
        rows = [[zero] * n for _ in range(n)]
        rows[r][c] = basis[k]
        M = Matrix(rows)
        vec = []
        for s in KLEIN_GROUP[1:]:
            D = f(s) * act(s, M) - M * f(s)
            vec.extend(x for e in D.entries() for x in e.coeffs)
        images.append(vec)
    system = [list(row) for row in zip(*images)]  # one row per linear condition
    out = []
    for v in nullspace(system, len(unknowns)):
        rows = [[zero] * n for _ in range(n)]
        for (r, c, k), x in zip(unknowns, v):
            if x:
                rows[r][c] = rows[r][c] + basis[k] * x
        out.append(Matrix(rows))
    return out


def in_span(mats, target: Matrix) -> bool:
    """Whether target is a Q-combination of the given biquadratic matrices."""
    cols = [[x for e in M.entries() for x in e.coeffs] for M in mats]
    vec = [x for e in target.entries() for x in e.coeffs]
    rows = [[col[i] for col in cols] + [vec[i]] for i in range(len(vec))]
    from .exact_arith import rank
    return rank([r[:-1] for r in rows]) == rank(rows)


def t_display_basis(a, b):
    """I, diag(sqrt a, -sqrt a), antidiag(sqrt b, sqrt b), antidiag(sqrt ab, -sqrt ab)."""
    one = BiquadElement.scalar(a, b, 1)
    z = one * 0
    ra, rb, rab = BiquadElement.sqrt_a(a, b), BiquadElement.sqrt_b(a, b), BiquadElement.sqrt_ab(a, b)
    return [Matrix([[one, z], [z, one]]), Matrix([[ra, z], [z, -ra]]),
            Matrix([[z, rb], [rb, z]]), Matrix([[z, rab], [-rab, z]])]


# factor sets ------------------------------------------------------------------

PAIRS = tuple((s, t) for s in KLEIN_GROUP for t in KLEIN_GROUP)


@dataclass(frozen=True)
class FactorSet2:
    values: tuple  # +-1 per pair in PAIRS order

    def __post_init__(self):
        if len(self.values) != 16 or any(v not in (1, -1) for v in self.values):
            raise ValueError("a factor set has sixteen +-1 values")

    @classmethod
    def from_function(cls, fn):
        return cls(tuple(int(fn(s, t)) for s, t in PAIRS))

    @classmethod
    def trivial(cls):
        return cls((1,) * 16)

    @classmethod
    def coboundary(cls, m):
        """dm(s,t) = m(s) m(t) m(st) for a sign map m (a dict or callable)."""
        mf = m if callable(m) else m.__getitem__
        return cls.from_function(lambda s, t: mf(s) * mf(t) * mf(s * t))

    def __call__(self, s, t):
        return self.values[PAIRS.index((GaloisElement(*s), GaloisElement(*t)))]

    def __mul__(self, other):
        return FactorSet2(tuple(x * y for x, y in zip(self.values, other.values)))

    def is_trivial(self):
        return all(v == 1 for v in self.values)

    def is_cocycle(self):
        return all(self(s, t) * self(s * t, u) == self(t, u) * self(s, t * u)
                   for s in KLEIN_GROUP for t in KLEIN_GROUP for u in KLEIN_GROUP)

    def coboundary_witness(self):
        """A sign map m with self == dm, or None."""
        for signs in product((1, -1), repeat=3):
            m = dict(zip(KLEIN_GROUP, (1,) + signs))
            if FactorSet2.coboundary(m) == self:
                return m
        return None

    def is_coboundary(self):
        return self.coboundary_witness() is not None

    def table(self):
        return "\n".join(" ".join("%+d" % self(s, t) for t in KLEIN_GROUP) for s in KLEIN_GROUP)


def sign_maps():
    """All 16 maps KLEIN_GROUP -> +-1 (the trivial-action coboundary ignores m(1))."""
    for signs in product((1, -1), repeat=4):
        yield dict(zip(KLEIN_GROUP, signs))


def factor_set_equivalent(f: FactorSet2, g: FactorSet2) -> bool:
    diff = f * g
    return any(FactorSet2.coboundary(m) == diff for m in sign_maps())


def cup_product_class(a, b) -> FactorSet2:
    """chi_a(s) chi_b(t) cup product: -1 exactly when s moves sqrt a and t moves sqrt b."""
    return FactorSet2.from_function(
        lambda s, t: -1 if (s.sign_a == -1 and t.sign_b == -1) else 1)


# connecting maps ----------------------------------------------------------------

def _form(target, n):
    if target == ORTHOGONAL:
        return None
    if target == LINEAR:
        return K2
    return form_K(n // 2).gram


def multiplier(M: Matrix, target: str):
    """The scalar c with M^T M = c I (orthogonal) or M^T G M = c G (skew targets)."""
    n = M.nrows
    a, b = M[0, 0].a, M[0, 0].b
    G = _form(target, n)
    ref = to_ring(Matrix.identity(n) if G is None else G, a, b)
    P = M.T * M if G is None else M.T * ref * M
    i, j = next((i, j) for i in range(n) for j in range(n) if ref[i, j])
    c = P[i, j] / ref[i, j]
    if P != ref.map(lambda x: x * c):
        raise LiftError("representative is not a similitude of the %s form" % target)
    return c


def normalise_lift(M: Matrix, target: str) -> Matrix:
    """Rescale M by r in the biquadratic ring so its multiplier becomes +-1."""
    c = multiplier(M, target)
    if not c.is_rational():
        raise LiftError("multiplier %s is not rational" % c)
    c = c.rational()
    if c == 0:
        raise LiftError("degenerate representative")
    a, b = M[0, 0].a, M[0, 0].b
    for d_coeffs, d in (((1, 0, 0, 0), 1), ((0, 1, 0, 0), a), ((0, 0, 1, 0), b),
                        ((0, 0, 0, 1), a * b)):
        for sign in (1, -1):
            q = rational_sqrt(sign * c / d)
            if q is not None and q != 0:
                rinv = (BiquadElement(a, b, d_coeffs) * q).inverse()
                return M.map(lambda x: x * rinv)
    raise LiftError("multiplier %s has no square root up to sign in the ring" % c)


def _inverse(M: Matrix, target: str) -> Matrix:
    """Inverse of a lift with multiplier c: M^T / c, or G^{-1} M^T G / c."""
    c = multiplier(M, target)
    cinv = c.inverse()
    G = _form(target, M.nrows)
    if G is None:
        return M.T.map(lambda x: x * cinv)
    G = to_ring(G, c.a, c.b)
    return (-G) * M.T * G.map(lambda x: x * cinv)  # G^{-1} = -G for these forms


def _connecting(f: Cocycle1, target: str, lift_signs=None) -> FactorSet2:
    if not is_cocycle(f):
        raise ValueError("not a projective cocycle")
    lifts = {}
    for s, M in zip(KLEIN_GROUP, f.values):
        L = normalise_lift(M, target)
        if lift_signs is not None:
            L = L.map(lambda x, e=lift_signs[s]: x * e)
        lifts[s] = L
    inverses = {s: _inverse(L, target) for s, L in lifts.items()}
    n = f.size
    one, zero = _one_zero(f)
    ident = Matrix.identity(n, one, zero)

    def value(s, t):
        X = lifts[s] * act(s, lifts[t]) * inverses[s * t]
        e = projective_sign(X, ident)
        if e is None:
            raise LiftError("lift defect at (%s,%s) is not +-I" % (s, t))
        return e
    return FactorSet2.from_function(value)


def connecting_partial(f: Cocycle1, lift_signs=None) -> FactorSet2:
    """d_n for projective-orthogonal cocycles."""
    if f.target != ORTHOGONAL:
        raise ValueError("connecting_partial takes an orthogonal cocycle")
    return _connecting(f, ORTHOGONAL, lift_signs)


def connecting_delta(f: Cocycle1, lift_signs=None) -> FactorSet2:
    """delta for projective-linear(2) or projective-symplectic(2n) cocycles."""
    if f.target not in (LINEAR, SYMPLECTIC):
        raise ValueError("connecting_delta takes a linear or symplectic cocycle")
    return _connecting(f, f.target, lift_signs)


def determinant_witness(f: Cocycle1):
    """For odd n: the sign map s -> det(M_s) of the normalised lifts."""
    out = {}
    for s, M in zip(KLEIN_GROUP, f.values):
        d = normalise_lift(M, ORTHOGONAL).det()
        if not d.is_rational() or d.rational() not in (1, -1):
            raise LiftError("lift determinant %s is not +-1" % d)
        out[s] = int(d.rational())
    return out


def chi_cocycle(a, b, n) -> Cocycle1:
    """phi_{n/2}(T^{a,b}) as a projective-orthogonal cocycle of even size n."""
    if n % 2:
        raise ValueError("chi_n needs even n")
    T = t_cocycle(a, b)
    from .symplectic.forms import phi_n
    return Cocycle1(ORTHOGONAL, a, b, tuple(phi_n(M, n // 2) for M in T.values))


def kronecker_cocycle(eta: Cocycle1, xi: Cocycle1) -> Cocycle1:
    if eta.target != ORTHOGONAL or xi.target != LINEAR:
        raise ValueError("kronecker_cocycle takes an orthogonal and a linear cocycle")
    if (eta.a, eta.b) != (xi.a, xi.b):
        raise ValueError("cocycles over different biquadratic rings")
    return Cocycle1(SYMPLECTIC, eta.a, eta.b,
                    tuple(x.kron(y) for x, y in zip(eta.values, xi.values)))


def product_identity_check(eta: Cocycle1, xi: Cocycle1) -> bool:
    lhs = connecting_delta(kronecker_cocycle(eta, xi))
    rhs = connecting_delta(xi) * connecting_partial(eta)
    return factor_set_equivalent(lhs, rhs)


def invariant_suite(a, b):
    """Run the cocycle checks for one (a, b) pair; returns an ordered dict of name -> bool."""
    from .quaternion import QuaternionAlgebra, matrix_model, nrd
    out = {}
    T = t_cocycle(a, b)
    out["t_cocycle is a cocycle"] = is_cocycle(T)
    fixed = fixed_algebra(T)
    disp = t_display_basis(T.a, T.b)
    out["fixed algebra has dimension 4"] = len(fixed) == 4
    out["fixed algebra matches display basis"] = (
        all(in_span(fixed, M) for M in disp) and all(in_span(disp, M) for M in fixed))
    out["fixed algebra is closed under products"] = all(
        in_span(disp, X * Y) for X in disp for Y in disp)
    A = QuaternionAlgebra(a, b)
    basis = A.basis()
    out["matrix model det equals nrd"] = all(
        matrix_model(x).det() == BiquadElement.scalar(A.a, A.b, nrd(x))
        for x in basis + (A(1, 1, 1, 1), A(2, -1, 3, 1)))
    dT = connecting_delta(T)
    pT = connecting_partial(T.retarget(ORTHOGONAL))
    cup = cup_product_class(a, b)
    out["delta_2(T) is the cup product class"] = factor_set_equivalent(dT, cup)
    out["partial_2(T) is the cup product class"] = factor_set_equivalent(pT, cup)
    out["lift choice does not matter"] = all(
        factor_set_equivalent(dT, connecting_delta(T, m)) for m in sign_maps())
    orth = T.retarget(ORTHOGONAL)
    out["product identity (T, T)"] = product_identity_check(orth, T)
    out["product identity (trivial, T)"] = product_identity_check(trivial_cocycle(a, b, 2), T)
    out["product identity (T, trivial)"] = product_identity_check(
        orth, trivial_cocycle(a, b, 2, LINEAR))
    out["product identity (chi_4, T)"] = product_identity_check(chi_cocycle(a, b, 4), T)
    return out
