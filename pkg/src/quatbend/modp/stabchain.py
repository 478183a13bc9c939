"""Stabilizer chains for matrix groups over F_p.

The group acts on the nonzero vectors of F_p^d, encoded as integers in base p.
Orbits are stored as Schreier trees (parent pointer and generator label per
point) in flat numpy arrays indexed by the encoding, so a level costs
O(p^d) memory regardless of orbit size.

Two phases build the chain.  A seeded product-replacement phase sifts
pseudo-random elements; the product of basic orbit lengths is always a lower
bound for the group order, so reaching a known upper bound (e.g. the order of
the ambient symplectic group) certifies the order exactly.  Otherwise the
deterministic Schreier-Sims verification sifts every Schreier generator.
Nothing here is a probabilistic verdict.
"""

from __future__ import annotations

import random

import numpy as np

DEFAULT_MAX_POINTS = 10**7
DEFAULT_MAX_SCHREIER = 4 * 10**6


class BudgetExceeded(RuntimeError):
    """The computation would exceed its configured point or sift budget."""


def inverse_mod(m, p):
    """Inverse of a square matrix over F_p (Gauss-Jordan on Python ints)."""
    d = len(m)
    aug = [[int(m[r][c]) % p for c in range(d)] + [int(r == c) for c in range(d)]
           for r in range(d)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular mod %d" % p)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return np.array([row[d:] for row in aug], dtype=np.int64)


class _Level:
    __slots__ = ("base", "base_vec", "gens", "gens_inv", "parent", "label", "orbit")

    def __init__(self, base, base_vec, size):
        self.base = base
        self.base_vec = base_vec
        self.gens = []
        self.gens_inv = []
        self.parent = np.full(size, -1, dtype=np.int64)
        self.label = np.full(size, -1, dtype=np.int16)
        self.parent[base] = base
        self.orbit = [np.array([base], dtype=np.int64)]

    @property
    def orbit_size(self):
        return sum(len(o) for o in self.orbit)

    def orbit_codes(self):
        return np.concatenate(self.orbit)


class StabilizerChain:
    """Base and strong generating set for a subgroup of GL(d, p).

    ``gens`` are integer matrices acting on column vectors.  ``order_bound``
    (optional) is a known multiple-or-equal upper bound such as |Sp(d, p)|;
    when the lower bound from the chain reaches it the order is exact.
    """

    def __init__(self, gens, p, order_bound=None, seed=0, max_points=DEFAULT_MAX_POINTS,
                 max_schreier=DEFAULT_MAX_SCHREIER, patience=40):
        gens = [np.asarray(g, dtype=np.int64) % p for g in gens]
        if not gens:
            raise ValueError("need at least one generator")
        self.p = p
        self.d = gens[0].shape[0]
        self.size = p ** self.d
        if self.size > max_points:
            raise BudgetExceeded("point domain %d exceeds budget %d" % (self.size, max_points))
        self.max_schreier = max_schreier
        self.order_bound = order_bound
        self.identity = np.eye(self.d, dtype=np.int64)
        self.powers = np.array([p ** i for i in range(self.d)], dtype=np.int64)
        self.gens = [g for g in gens if not np.array_equal(g, self.identity)]
        self.levels = []
        self._rng = random.Random(seed)
        self.patience = patience
        self.complete = False
        if self.gens:
            self._build()
        else:
            self.complete = True

    # -- encoding -----------------------------------------------------
    def encode(self, vecs):
        return (np.asarray(vecs, dtype=np.int64) % self.p) @ self.powers

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((codes.shape[0], self.d), dtype=np.int64)
        rest = codes.copy()
        for i in range(self.d):
            out[:, i] = rest % self.p
            rest //= self.p
        return out

    # -- orbits -------------------------------------------------------
    def _grow(self, lvl, frontier, gen_ids):
        p = self.p
        all_ids = list(range(len(lvl.gens)))
        while frontier.size:
            vecs = self.decode(frontier)
            found = []
            for gi in gen_ids:
                img = self.encode(vecs @ lvl.gens[gi].T % p)
                fresh = lvl.parent[img] == -1
                if not fresh.any():
                    continue
                new_codes, idx = np.unique(img[fresh], return_index=True)
                lvl.parent[new_codes] = frontier[fresh][idx]
                lvl.label[new_codes] = gi
                found.append(new_codes)
            if not found:
                break
            frontier = np.concatenate(found)
            lvl.orbit.append(frontier)
            gen_ids = all_ids

    def _add_gen(self, lvl, g):
        lvl.gens.append(g)
        lvl.gens_inv.append(inverse_mod(g, self.p))
        gi = len(lvl.gens) - 1
        if gi == 0:
            self._grow(lvl, lvl.orbit[0], [0])
        else:
            self._grow(lvl, lvl.orbit_codes(), [gi])

    def _orbit_size_of(self, code, gens):
        lvl = _Level(code, None, self.size)
        for g in gens:
            lvl.gens.append(g)
        self._grow(lvl, lvl.orbit[0], list(range(len(gens))))
        return lvl.orbit_size

    def _choose_base(self, gens):
        """Greedy base point: the moved basis vector with the largest orbit."""
        full = self.size - 1
        best, best_size = None, -1
        for i in range(self.d):
            e = np.zeros(self.d, dtype=np.int64)
            e[i] = 1
            if all(np.array_equal(g @ e % self.p, e) for g in gens):
                continue
            code = int(self.encode(e))
            size = self._orbit_size_of(code, gens)
            if size > best_size:
                best, best_size = e, size
            if size == full:
                break
        if best is None:
            # every basis vector fixed by all gens; then some gen is the identity
            raise ValueError("generators fix a basis; identity element passed as non-identity")
        return best

    def _new_level(self, gens):
        vec = self._choose_base(gens)
        lvl = _Level(int(self.encode(vec)), vec, self.size)
        self.levels.append(lvl)
        for g in gens:
            self._add_gen(lvl, g)
        return lvl

    # -- sifting ------------------------------------------------------
    def sift(self, g, start=0):
        """Return (residue, level index where sifting stopped)."""
        p = self.p
        g = np.asarray(g, dtype=np.int64) % p
        for li in range(start, len(self.levels)):
            lvl = self.levels[li]
            code = int(self.encode(g @ lvl.base_vec % p))
            if lvl.parent[code] == -1:
                return g, li
            while code != lvl.base:
                g = lvl.gens_inv[lvl.label[code]] @ g % p
                code = int(lvl.parent[code])
        return g, len(self.levels)

    def _sift_batch(self, mats, start):
        """Sift a stack of matrices; return the first non-trivial residue or None."""
        p = self.p
        mats = mats % p
        for li in range(start, len(self.levels)):
            lvl = self.levels[li]
            codes = self.encode(mats @ lvl.base_vec % p)
            bad = lvl.parent[codes] == -1
            if bad.any():
                k = int(np.argmax(bad))
                return self.sift(mats[k], li)
            invs = np.stack(lvl.gens_inv)
            active = codes != lvl.base
            while active.any():
                idx = np.nonzero(active)[0]
                c = codes[idx]
                mats[idx] = np.matmul(invs[lvl.label[c]], mats[idx]) % p
                codes[idx] = lvl.parent[c]
                active[idx] = codes[idx] != lvl.base
        nontriv = np.any(mats != self.identity, axis=(1, 2))
        if nontriv.any():
            k = int(np.argmax(nontriv))
            return mats[k], len(self.levels)
        return None

    def _insert(self, h, upto, start=0):
        """Add residue h to levels start..upto, opening a new level if needed."""
        for li in range(start, min(upto, len(self.levels) - 1) + 1):
            self._add_gen(self.levels[li], h)
        if upto >= len(self.levels):
            self._new_level([h])

    # -- construction -------------------------------------------------
    def _random_elements(self):
        rng = self._rng
        p = self.p
        pool = [g.copy() for g in self.gens]
        while len(pool) < 10:
            pool.append(self.gens[len(pool) % len(self.gens)].copy())
        acc = self.identity.copy()

        def step():
            nonlocal acc
            i, j = rng.sample(range(len(pool)), 2)
            if rng.random() < 0.5:
                pool[i] = pool[i] @ pool[j] % p
            else:
                pool[i] = pool[j] @ pool[i] % p
            acc = acc @ pool[i] % p
            return acc

        for _ in range(60):
            step()
        while True:
            yield step()

    def _build(self):
        self._new_level(list(self.gens))
        if self._reached_bound():
            self.complete = True
            return
        quiet = 0
        for g in self._random_elements():
            h, li = self.sift(g)
            if li == len(self.levels) and np.array_equal(h, self.identity):
                quiet += 1
                if quiet >= self.patience:
                    break
                continue
            quiet = 0
            self._insert(h, li)
            if self._reached_bound():
                self.complete = True
                return
        self._verify()
        self.complete = True

    def _reached_bound(self):
        return self.order_bound is not None and self.order() == self.order_bound

    def _transversals(self, lvl):
        """Coset representatives u with u(base) = point, in BFS order."""
        codes = lvl.orbit_codes()
        n = len(codes)
        us = np.empty((n, self.d, self.d), dtype=np.int64)
        us[0] = self.identity
        # BFS layers guarantee parents precede children
        index = np.full(self.size, -1, dtype=np.int64)
        index[codes] = np.arange(n)
        start = 1
        gens = np.stack(lvl.gens)
        for layer in lvl.orbit[1:]:
            stop = start + len(layer)
            par = index[lvl.parent[layer]]
            us[start:stop] = np.matmul(gens[lvl.label[layer]], us[par]) % self.p
            start = stop
        return us

    def _verify(self):
        """Deterministic Schreier-Sims completion from the bottom level up."""
        budget = self.max_schreier
        i = len(self.levels) - 1
        chunk = 1 << 16
        while i >= 0:
            lvl = self.levels[i]
            n = lvl.orbit_size
            budget -= n * len(lvl.gens)
            if budget < 0:
                raise BudgetExceeded("Schreier generator budget exhausted")
            us = self._transversals(lvl)
            residue = None
            for s in lvl.gens:
                for lo in range(0, n, chunk):
                    batch = np.matmul(s, us[lo:lo + chunk]) % self.p
                    res = self._sift_batch(batch, i)
                    if res is not None:
                        residue = res
                        break
                if residue is not None:
                    break
            if residue is None:
                i -= 1
                continue
            h, j = residue
            self._insert(h, j, start=i + 1)
            i = min(j, len(self.levels) - 1)

    # -- results ------------------------------------------------------
    def order(self):
        out = 1
        for lvl in self.levels:
            out *= lvl.orbit_size
        return out

    def base(self):
        return [lvl.base_vec.copy() for lvl in self.levels]

    def orbit_lengths(self):
        return [lvl.orbit_size for lvl in self.levels]

    def contains(self, g):
        h, li = self.sift(g)
        return li == len(self.levels) and np.array_equal(h % self.p, self.identity)
