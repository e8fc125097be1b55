"""Hyperplane preprocessing: attach a symmetrized set of hyperplane normals
to the input family so the search can pin an entire frame.

Every hyperplane {x : v^T x = 0} is represented by its normal v, scaled so
the lowest-index nonzero entry is 1.  Normals are grouped by how many
members of each input set their hyperplane contains; whole groups are
selected, smallest and lowest-count first, until the selected normals span
the dual space.  The selected groups become the starting cells of the
hyperplane side of the search partition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import CapacityExceeded

MAX_HYPERPLANES = 10**7


def projective_normals(f, k):
    """All normalized hyperplane normals of F_q^k, one per hyperplane."""
    q = f.q
    total = (q**k - 1) // (q - 1)
    if total > MAX_HYPERPLANES:
        raise CapacityExceeded(
            "instance needs %d candidate hyperplanes (limit %d)" % (total, MAX_HYPERPLANES),
            total,
        )
    chunks = []
    for lead in range(k):
        m = k - 1 - lead
        count = q**m
        block = np.zeros((count, k), dtype=np.int64)
        block[:, lead] = 1
        v = np.arange(count)
        for j in range(m):
            block[:, lead + 1 + j] = (v // q**j) % q
        chunks.append(block)
    return np.concatenate(chunks, axis=0)


def containment_counts(f, inst, normals):
    """Per-normal vector of how many members of each set lie in the hyperplane."""
    counts = np.zeros((normals.shape[0], len(inst.sets)), dtype=np.int64)
    for si, s in enumerate(inst.sets):
        for U in s.members:
            prod = linalg.matmul(f, normals, U.basis)
            counts[:, si] += (prod == 0).all(axis=1)
    return counts


def hyperplane_signatures(f, inst):
    """Group hyperplane normals by their containment count vector.

    Returns a list of (countvec, normal_index_array) sorted by the layout
    order (count vector, ascending), plus the full normal table."""
    normals = projective_normals(f, inst.k)
    counts = containment_counts(f, inst, normals)
    groups = {}
    for idx, row in enumerate(counts):
        groups.setdefault(tuple(int(x) for x in row), []).append(idx)
    out = [(cv, np.array(ix, dtype=np.int64)) for cv, ix in sorted(groups.items())]
    return out, normals


def select_hyperplanes(f, inst):
    """Pick whole signature groups, smallest first, until the chosen normals
    span the dual space.  Returns (selected groups in layout order, normals)."""
    groups, normals = hyperplane_signatures(f, inst)
    order = sorted(range(len(groups)), key=lambda g: (len(groups[g][1]), groups[g][0]))
    chosen = []
    rank = 0
    for g in order:
        chosen.append(g)
        stacked = normals[np.concatenate([groups[g2][1] for g2 in chosen])]
        rank = linalg.mat_rank(f, stacked)
        if rank == inst.k:
            break
    if rank < inst.k:
        raise CapacityExceeded("hyperplane normals never span (unreachable)", rank)
    chosen.sort(key=lambda g: groups[g][0])  # layout order: count vector ascending
    return [groups[g] for g in chosen], normals


@dataclass
class ExtendedInstance:
    """The family plus its selected hyperplane frame, laid out by position.

    Positions 0..n-1 are subspace members (one cell per normalized set, in
    set order); positions n..n+h-1 are selected hyperplane normals (one cell
    per signature group, in layout order)."""

    field: object
    inst: object  # NormalizedInstance
    subs: list  # n basis matrices (k x s_i), position-indexed
    set_of_pos: np.ndarray  # n ints
    normals: np.ndarray  # k x h, columns are hyperplane normals
    cell_bounds: list  # (start, end) for every starting cell, C cells then H cells
    h_group_info: list  # (countvec, size) per hyperplane cell, layout order

    @property
    def k(self):
        return self.inst.k

    @property
    def n(self):
        return len(self.subs)

    @property
    def h(self):
        return self.normals.shape[1]


def extend_instance(f, inst):
    """Build the position-level layout the search operates on."""
    subs = []
    set_of_pos = []
    cell_bounds = []
    for si, s in enumerate(inst.sets):
        start = len(subs)
        for U in s.members:
            subs.append(U.basis.copy())
            set_of_pos.append(si)
        cell_bounds.append((start, len(subs)))
    n = len(subs)
    sel, normals = select_hyperplanes(f, inst)
    cols = []
    info = []
    pos = n
    for cv, idx in sel:
        cols.append(normals[idx].T)
        cell_bounds.append((pos, pos + len(idx)))
        info.append((cv, len(idx)))
        pos += len(idx)
    V = np.concatenate(cols, axis=1) if cols else np.zeros((inst.k, 0), dtype=np.int64)
    return ExtendedInstance(f, inst, subs, np.array(set_of_pos), V, cell_bounds, info)
