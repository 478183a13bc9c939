"""Exact linear algebra over Q and Z on plain lists."""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form over Q.  Returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {x : A x = 0} over Q, one vector per free column."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty system")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    n = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution of A x = b over Q, or None when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    n = len(rows[0])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x


def primitive(vec):
    """Scale a rational vector to a primitive integer vector (first nonzero entry positive)."""
    from math import gcd, lcm

    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return [-x for x in ints] if lead < 0 else ints


def integer_kernel(rows, ncols=None):
    """Z-basis of the integer solutions of A x = 0 (A integral).

    Column-style Hermite reduction: unimodular column operations bring A to
    echelon form; the transformation columns matching zero columns span the
    kernel lattice.
    """
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    a = [[int(x) for x in r] for r in rows]
    m, n = len(a), len(a[0])
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # columns are u[*][j]

    def colop(dst, src, f):
        # column dst += f * column src
        for row in a:
            row[dst] += f * row[src]
        for row in u:
            row[dst] += f * row[src]

    def swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def negate(i):
        for row in a:
            row[i] = -row[i]
        for row in u:
            row[i] = -row[i]

    c = 0
    for r in range(m):
        if c == n:
            break
        while True:
            nz = [j for j in range(c, n) if a[r][j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(a[r][j]))
            if j0 != c:
                swap(c, j0)
            if a[r][c] < 0:
                negate(c)
            done = True
            for j in range(c + 1, n):
                if a[r][j]:
                    colop(j, c, -(a[r][j] // a[r][c]))
                    if a[r][j]:
                        done = False
            if done:
                break
        if any(a[r][j] for j in range(c, n)):
            c += 1
    return [[u[i][j] for i in range(n)] for j in range(c, n)]


def size_reduce(basis):
    """Cheap pairwise reduction of an integer lattice basis (shortens entries)."""
    basis = [list(v) for v in basis]

    def norm2(v):
        return sum(x * x for x in v)

    changed = True
    while changed:
        changed = False
        basis.sort(key=lambda v: (norm2(v), v))
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                vi, vj = basis[i], basis[j]
                nj = norm2(vj)
                if nj == 0:
                    continue
                dot = sum(x * y for x, y in zip(vi, vj))
                q = round(Fraction(dot, nj))
                if q:
                    cand = [x - q * y for x, y in zip(vi, vj)]
                    if norm2(cand) < norm2(vi):
                        basis[i] = cand
                        changed = True
    return basis
