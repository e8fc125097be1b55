"""Deterministic permutation groups via stabilizer chains.

Permutations are numpy int64 arrays with g[p] = image of p.  The search
stores the automorphisms it has verified so far in a PermGroup and asks
for orbits of the pointwise stabilizer of the currently fixed positions;
the chain's base is seeded with that prefix (trivial levels included) so
level len(prefix) is exactly the stabilizer wanted.
"""

from __future__ import annotations

import numpy as np


def identity_perm(deg):
    return np.arange(deg, dtype=np.int64)


def compose(g, h):
    """The permutation applying h first, then g."""
    return g[h]


def inverse(g):
    inv = np.empty(len(g), dtype=np.int64)
    inv[g] = np.arange(len(g), dtype=np.int64)
    return inv


class StabChain:
    """Base and strong generating set for a permutation group."""

    def __init__(self, deg, gens=(), base_hint=()):
        self.deg = deg
        self._id = identity_perm(deg)
        self.base = list(dict.fromkeys(int(b) for b in base_hint))
        self.hint_len = len(self.base)
        self.sgens = []
        self.trans = [self._orbit_of(i) for i in range(len(self.base))]
        for g in gens:
            self.add(g)

    def _level_gens(self, i):
        out = []
        for s in self.sgens:
            if all(int(s[b]) == b for b in self.base[:i]):
                out.append(s)
        return out

    def _orbit_of(self, i):
        """Transversal of base[i] under the level-i group: perm u with
        u[base[i]] = p for every reachable p, plus the discovery order."""
        b = self.base[i]
        gens = self._level_gens(i)
        table = {b: self._id}
        order = [b]
        for p in order:
            up = table[p]
            for s in gens:
                q = int(s[p])
                if q not in table:
                    table[q] = compose(s, up)
                    order.append(q)
        return table, order

    def _sift(self, g, start=0):
        """Reduce g by transversal elements; (None, len(base)) when g is
        in the group, else (residue fixing base[:lvl], lvl)."""
        h = np.asarray(g, dtype=np.int64)
        for i in range(start, len(self.base)):
            b = self.base[i]
            p = int(h[b])
            if p == b:
                continue
            table, _ = self.trans[i]
            if p not in table:
                return h, i
            h = compose(inverse(table[p]), h)
        if np.array_equal(h, self._id):
            return None, len(self.base)
        return h, len(self.base)

    def _extend_base(self, h):
        moved = np.nonzero(h != self._id)[0]
        self.base.append(int(moved[0]))
        self.trans.append(None)

    def _run(self):
        """Rebuild every transversal, then verify the chain bottom-up,
        inserting sifted Schreier generators until it closes."""
        for i in range(len(self.base)):
            self.trans[i] = self._orbit_of(i)
        i = len(self.base) - 1
        while i >= 0:
            again = self._verify(i)
            i = again if again is not None else i - 1

    def _verify(self, i):
        gens_i = self._level_gens(i)
        table, order = self.trans[i]
        for p in order:
            up = table[p]
            for s in gens_i:
                q = int(s[p])
                sg = compose(inverse(table[q]), compose(s, up))
                res, lvl = self._sift(sg, i + 1)
                if res is not None:
                    if lvl == len(self.base):
                        self._extend_base(res)
                    self.sgens.append(res)
                    for j in range(lvl + 1):
                        self.trans[j] = self._orbit_of(j)
                    return lvl
        return None

    def add(self, g):
        """Insert a permutation; returns False when already contained."""
        res, lvl = self._sift(g)
        if res is None:
            return False
        if lvl == len(self.base):
            self._extend_base(res)
        self.sgens.append(res)
        self._run()
        return True

    def contains(self, g):
        res, _ = self._sift(g)
        return res is None

    def order(self):
        return self.stab_order(0)

    def stab_order(self, level):
        n = 1
        for i in range(level, len(self.base)):
            n *= len(self.trans[i][1])
        return n

    def orbit_labels(self, level=None):
        """Label every point with the least point of its orbit under the
        level group (default: the full hint-prefix stabilizer)."""
        if level is None:
            level = self.hint_len
        gens = self._level_gens(level)
        labels = np.full(self.deg, -1, dtype=np.int64)
        for p0 in range(self.deg):
            if labels[p0] >= 0:
                continue
            labels[p0] = p0
            stack = [p0]
            while stack:
                p = stack.pop()
                for s in gens:
                    q = int(s[p])
                    if labels[q] < 0:
                        labels[q] = p0
                        stack.append(q)
        return labels


def group_order(deg, gens):
    return StabChain(deg, gens).order()


class PermGroup:
    """A growing group of verified permutations with stabilizer queries.

    Chains are cached per fixed-point prefix and rebuilt lazily whenever
    a new generator arrives."""

    def __init__(self, deg):
        self.deg = deg
        self.gens = []
        self.version = 0
        self._cache = {}

    def _chain(self, prefix):
        chain = self._cache.get(prefix)
        if chain is None:
            chain = StabChain(self.deg, self.gens, base_hint=prefix)
            self._cache[prefix] = chain
        return chain

    def add(self, perm):
        perm = np.asarray(perm, dtype=np.int64)
        if self._chain(()).contains(perm):
            return False
        self.gens.append(perm)
        self.version += 1
        self._cache.clear()
        return True

    def contains(self, perm):
        return self._chain(()).contains(np.asarray(perm, dtype=np.int64))

    def order(self):
        return self._chain(()).order()

    def stab_orbit_labels(self, prefix):
        """Orbit labels under the pointwise stabilizer of the prefix."""
        chain = self._chain(tuple(int(p) for p in prefix))
        return chain.orbit_labels()
