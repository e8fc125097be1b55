"""Ordered partitions of the position range, with refinement and
individualization.

Positions 0..n_c-1 hold subspace members, positions n_c..n-1 hold
hyperplane normals.  A partition is a list of contiguous cells; refinement
reorders positions inside a cell by an invariant key and splits the cell at
key changes.  All reorderings are returned as `dest` arrays (dest[old] =
new) so the caller can permute its per-position state in lock step.
"""

from __future__ import annotations

from bisect import bisect_right

import numpy as np


class Partition:
    __slots__ = ("n", "n_c", "starts", "fixed_seq")

    def __init__(self, n, n_c, starts, fixed_seq=()):
        self.n = n
        self.n_c = n_c
        self.starts = tuple(starts)
        self.fixed_seq = tuple(fixed_seq)

    @classmethod
    def initial(cls, n_c, cell_bounds):
        n = cell_bounds[-1][1]
        starts = tuple(s for s, _ in cell_bounds)
        part = cls(n, n_c, starts)
        singles = [s for s, e in part.cells() if e - s == 1]
        return part._with_fixed(part.fixed_seq + tuple(singles)), singles

    def _with_fixed(self, fixed_seq):
        return Partition(self.n, self.n_c, self.starts, fixed_seq)

    def cells(self):
        out = []
        for i, s in enumerate(self.starts):
            e = self.starts[i + 1] if i + 1 < len(self.starts) else self.n
            out.append((s, e))
        return out

    def cell_of(self, pos):
        i = bisect_right(self.starts, pos) - 1
        s = self.starts[i]
        e = self.starts[i + 1] if i + 1 < len(self.starts) else self.n
        return s, e

    def is_discrete(self):
        return len(self.starts) == self.n

    def is_fixed(self, pos):
        s, e = self.cell_of(pos)
        return e - s == 1

    def target_cell(self):
        """Smallest non-singleton hyperplane cell, then smallest subspace
        cell; leftmost wins ties.  None when the partition is discrete."""
        best = None
        for s, e in self.cells():
            if e - s < 2:
                continue
            is_h = s >= self.n_c
            key = (0 if is_h else 1, e - s, s)
            if best is None or key < best[0]:
                best = (key, (s, e))
        return best[1] if best else None

    def refine(self, keys):
        """Split every keyed cell by the given per-position keys.

        keys: dict position -> comparable key.  A cell takes part iff its
        first position is keyed, and then every position in it must be.
        Returns (partition, dest, fingerprint, new_singletons); dest (with
        dest[old] = new) is None when no position moved and nothing split.
        The fingerprint records, for every participating cell, the ordered
        runs of equal keys, so it is identical across equivalent states."""
        dest = np.arange(self.n, dtype=np.int64)
        new_starts = []
        fingerprint = []
        new_singles = []
        changed = False
        for s, e in self.cells():
            new_starts.append(s)
            if s not in keys:
                continue
            if e - s == 1:
                fingerprint.append((s, 1, ((s, 1, keys[s]),)))
                continue
            order = sorted(range(s, e), key=lambda p: keys[p])
            for newp, oldp in enumerate(order, start=s):
                dest[oldp] = newp
            runs = [s]
            for i in range(1, e - s):
                if keys[order[i]] != keys[order[i - 1]]:
                    runs.append(s + i)
            cell_print = []
            for ri, rs in enumerate(runs):
                re_ = runs[ri + 1] if ri + 1 < len(runs) else e
                cell_print.append((rs, re_ - rs, keys[order[rs - s]]))
                if ri > 0:
                    new_starts.append(rs)
                    changed = True
                if re_ - rs == 1:
                    new_singles.append(rs)
            fingerprint.append((s, e - s, tuple(cell_print)))
        part = Partition(self.n, self.n_c, new_starts, self.fixed_seq + tuple(new_singles))
        return part, (dest if changed else None), tuple(fingerprint), new_singles

    def individualize(self, cell, j):
        """Split {j} off the given cell by swapping it to the front.

        Returns (partition, dest, new_singletons): dest swaps positions
        cell[0] and j; the cell becomes a singleton plus the rest, and when
        only one other position remains it becomes a singleton too."""
        s, e = cell
        assert s <= j < e and e - s >= 2
        dest = np.arange(self.n, dtype=np.int64)
        dest[j] = s
        dest[s] = j
        new_starts = []
        for cs, _ in self.cells():
            new_starts.append(cs)
            if cs == s:
                new_starts.append(s + 1)
        singles = [s]
        if e - s == 2:
            singles.append(s + 1)
        part = Partition(self.n, self.n_c, new_starts, self.fixed_seq + tuple(singles))
        return part, dest, singles
