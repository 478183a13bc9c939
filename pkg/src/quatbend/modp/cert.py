"""Reduction mod p, finite symplectic group orders and the density / orbit certificates."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from ..exact_arith import Matrix, factor, is_prime, primes_up_to
from ..symplectic.forms import symplectic_divisors
from .stabchain import BudgetExceeded, StabilizerChain

CRITERION = ("standard criterion, assumed rather than proved here: a finitely generated "
             "subgroup of Sp(2m, Z) whose reduction mod some prime p >= 5 is all of "
             "Sp(2m, F_p) is Zariski-dense; strong approximation gives only the converse")


class BadPrimeError(ValueError):
    pass


def sp_order(n: int, q: int) -> int:
    """|Sp(2n, F_q)| = q^{n^2} prod_{i=1..n} (q^{2i} - 1)."""
    if n < 1 or q < 2:
        raise ValueError("need n >= 1 and q >= 2")
    out = q ** (n * n)
    for i in range(1, n + 1):
        out *= q ** (2 * i) - 1
    return out


def _as_list(M):
    if isinstance(M, Matrix):
        return M.integral().tolist()
    return np.asarray(M).tolist()


def _as_array(M, p=None):
    """int64 array; with p the reduction happens on exact integers first."""
    rows = _as_list(M)
    if p is not None:
        rows = [[int(x) % p for x in r] for r in rows]
    return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class ReducedRep:
    p: int
    mats: tuple
    form: np.ndarray = field(compare=False)

    @property
    def dim(self):
        return self.form.shape[0]

    def __eq__(self, other):
        return (isinstance(other, ReducedRep) and self.p == other.p
                and len(self.mats) == len(other.mats)
                and all(np.array_equal(x, y) for x, y in zip(self.mats, other.mats)))

    def __hash__(self):
        return hash((self.p, tuple(m.tobytes() for m in self.mats)))


def form_divisors(gram) -> tuple:
    return symplectic_divisors(gram)[1]


def bad_primes(gram):
    out = {2}
    for d in form_divisors(gram):
        out |= set(factor(d)) if d > 1 else set()
    return out


def reduce_matrix(M, p):
    return _as_array(M, p)


def reduce(mats, gram, p) -> ReducedRep:
    """Reduce integral symplectic generators mod an odd good prime p."""
    if not is_prime(p) or p == 2:
        raise BadPrimeError("reduction needs an odd prime, got %d" % p)
    if p in bad_primes(gram):
        raise BadPrimeError("bad reduction prime %d divides the form" % p)
    Gp = _as_array(gram, p)
    out = []
    for M in mats:
        R = _as_array(M, p)
        if not np.array_equal((R.T @ Gp @ R) % p, Gp):
            raise BadPrimeError("generator is not symplectic mod %d" % p)
        out.append(R)
    return ReducedRep(p, tuple(out), Gp)


def reduce_rep(rep, p) -> ReducedRep:
    return reduce(rep.images, rep.form.gram, p)


def group_order(red: ReducedRep, **budget) -> int:
    """Exact order of the generated group; raises BudgetExceeded instead of guessing."""
    m = red.dim // 2
    chain = StabilizerChain(list(red.mats), red.p, order_bound=sp_order(m, red.p), **budget)
    return chain.order()


def is_surjective(red: ReducedRep, **budget) -> bool:
    return group_order(red, **budget) == sp_order(red.dim // 2, red.p)


def classify(red: ReducedRep, **budget):
    """('surjective', order) | ('proper', order) | ('undecided', reason)."""
    try:
        order = group_order(red, **budget)
    except BudgetExceeded as exc:
        return ("undecided", str(exc))
    full = sp_order(red.dim // 2, red.p)
    if full % order:
        raise AssertionError("group order %d does not divide |Sp| = %d" % (order, full))
    return ("surjective" if order == full else "proper", order)


def standard_form(n):
    K = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        K[2 * i, 2 * i + 1] = 1
        K[2 * i + 1, 2 * i] = -1
    return K


def transvection(v, G):
    """x -> x + (v^T G x) v, which preserves G."""
    v = np.asarray(v, dtype=np.int64)
    return np.eye(len(v), dtype=np.int64) + np.outer(v, v @ G)


def standard_generators(n):
    """Transvections generating Sp(2n, Z) (and so Sp(2n, F_p)) for the form I_n (x) K."""
    G = standard_form(n)
    d = 2 * n
    vs = [np.eye(d, dtype=np.int64)[i] for i in range(d)]
    for i in range(n - 1):
        v = np.zeros(d, dtype=np.int64)
        v[2 * i + 1] = v[2 * i + 2] = 1
        vs.append(v)
    return [transvection(v, G) for v in vs]


def closure_order(gens, p, limit=10 ** 6):
    """Breadth-first enumeration of the generated group (small cases only)."""
    gens = [np.asarray(g, dtype=np.int64) % p for g in gens]
    d = gens[0].shape[0]
    start = np.eye(d, dtype=np.int64)
    seen = {start.tobytes()}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = (g @ x) % p
                key = y.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise BudgetExceeded("closure exceeded %d elements" % limit)
        frontier = nxt
    return len(seen)


def multiplicative_order(M, p, limit=10 ** 6) -> int:
    M = _as_array(M, p)
    ident = np.eye(M.shape[0], dtype=np.int64)
    X = M.copy()
    k = 1
    while not np.array_equal(X, ident):
        X = (X @ M) % p
        k += 1
        if k > limit:
            raise BudgetExceeded("order of B mod %d exceeds %d" % (p, limit))
    return k


def fingerprint(mats, gram=None) -> str:
    h = hashlib.sha256()
    for M in mats:
        h.update(repr(_as_list(M)).encode())
        h.update(b";")
    if gram is not None:
        h.update(b"form")
        h.update(repr(_as_list(gram)).encode())
    return h.hexdigest()


# density certificate ---------------------------------------------------------------

@dataclass
class DensityCertificate:
    model: str
    generators: str
    divisors: tuple
    bound: int
    lines: list            # (p, status, detail)
    omega: list
    undecided: list
    verdict: str

    def to_text(self):
        out = ["density certificate",
               "model: %s" % self.model,
               "generators: %s" % self.generators,
               "form divisors: %s" % " ".join(str(d) for d in self.divisors),
               "sweep bound: %d" % self.bound]
        for p, status, detail in self.lines:
            if status == "surjective":
                out.append("%d: surjective" % p)
            elif status == "proper":
                out.append("%d: proper(%d)" % (p, detail))
            elif status == "skipped":
                out.append("%d: skipped(%s)" % (p, detail))
            else:
                out.append("%d: undecided(%s)" % (p, detail))
        out.append("omega: %s" % (" ".join(map(str, self.omega)) or "none"))
        out.append("undecided: %s" % (" ".join(map(str, self.undecided)) or "none"))
        out.append("criterion: %s" % CRITERION)
        out.append("verdict: %s" % self.verdict)
        return "\n".join(out) + "\n"

    def to_json(self):
        return json.dumps({
            "model": self.model, "generators": self.generators,
            "form_divisors": list(self.divisors), "sweep_bound": self.bound,
            "primes": [{"p": p, "status": s, "detail": d} for p, s, d in self.lines],
            "omega": self.omega, "undecided": self.undecided,
            "criterion": CRITERION, "verdict": self.verdict,
        }, indent=2, sort_keys=False) + "\n"

    @property
    def surjective_primes(self):
        return [p for p, s, _ in self.lines if s == "surjective"]


def bad_prime_set(mats, gram, bound, model_id="", **budget) -> DensityCertificate:
    """Sweep the odd good primes up to bound and record where the reduction is proper."""
    bad = bad_primes(gram)
    divs = form_divisors(gram)
    lines, omega, undecided = [], [], []
    for p in primes_up_to(bound):
        if p == 2:
            lines.append((p, "skipped", "even prime"))
            continue
        if p in bad:
            lines.append((p, "skipped", "divides the form"))
            continue
        status, detail = classify(reduce(mats, gram, p), **budget)
        lines.append((p, status, detail))
        if status == "proper":
            omega.append(p)
        elif status == "undecided":
            undecided.append(p)
    swept = [p for p, s, _ in lines if s != "skipped"]
    if any(p >= 5 for p, s, _ in lines if s == "surjective"):
        verdict = "dense-certified"
    elif not swept or undecided:
        verdict = "undecided"
    else:
        verdict = "not-certified"
    return DensityCertificate(model_id, fingerprint(mats, gram), divs, bound, lines, omega,
                              undecided, verdict)


# orbit separation ---------------------------------------------------------------------

@dataclass
class OrbitSeparation:
    bent: str
    power_bent: str
    prime: int
    k: int
    agrees_with_unbent: bool
    bent_status: tuple
    power_status: tuple
    auxiliary: list        # (p, bent status, power status)
    conclusion: str

    def to_text(self):
        def st(s):
            return s[0] if s[0] == "surjective" else "%s(%s)" % s
        out = ["orbit separation report",
               "bent generators: %s" % self.bent,
               "power-bent generators: %s" % self.power_bent,
               "witness prime: %d" % self.prime,
               "order of B mod p: %d" % self.k,
               "power-bent reduction equals unbent reduction: %s" % (
                   "yes" if self.agrees_with_unbent else "no"),
               "bent at witness: %s" % st(self.bent_status),
               "power-bent at witness: %s" % st(self.power_status)]
        for p, a, b in self.auxiliary:
            out.append("auxiliary %d: bent %s, power-bent %s" % (p, st(a), st(b)))
        out.append("conclusion: %s" % self.conclusion)
        return "\n".join(out) + "\n"

    def to_json(self):
        return json.dumps({
            "bent": self.bent, "power_bent": self.power_bent, "prime": self.prime, "k": self.k,
            "agrees_with_unbent": self.agrees_with_unbent,
            "bent_status": list(self.bent_status), "power_status": list(self.power_status),
            "auxiliary": [[p, list(a), list(b)] for p, a, b in self.auxiliary],
            "conclusion": self.conclusion}, indent=2) + "\n"


def orbit_separation(rep, curve, B: Matrix, p0: int, auxiliary=(), **budget) -> OrbitSeparation:
    """Compare the bend by B with the bend by B^k, k the order of B mod p0."""
    from ..surface import bend

    gram = rep.form.gram
    if p0 in bad_primes(gram) or not is_prime(p0):
        raise BadPrimeError("witness prime %d is not a good prime" % p0)
    k = multiplicative_order(B, p0)
    rep_b = bend(rep, curve, B)
    rep_bk = bend(rep, curve, B ** k)
    agree = reduce_rep(rep_bk, p0) == reduce_rep(rep, p0)
    sb = classify(reduce_rep(rep_b, p0), **budget)
    sk = classify(reduce_rep(rep_bk, p0), **budget)
    aux = []
    for p in auxiliary:
        if p in bad_primes(gram):
            continue
        aux.append((p, classify(reduce_rep(rep_b, p), **budget),
                    classify(reduce_rep(rep_bk, p), **budget)))
    if not agree:
        raise AssertionError("B^k is the identity mod p0 but the reductions differ")
    distinct = (sb[0] == "surjective" and sk[0] == "proper") or \
        (sb[0] == "proper" and sk[0] == "surjective")
    return OrbitSeparation(fingerprint(rep_b.images, gram), fingerprint(rep_bk.images, gram), p0,
                           k, agree, sb, sk, aux, "distinct orbits" if distinct else "not separated")
