"""Search state and the incremental minimization of fixed positions.

The search walks an ordered partition of positions (subspace members and
hyperplane normals).  Once a position becomes a singleton it is *pinned*:
an explicit group element is applied that moves its content to the least
representative reachable under the residual group, and the remaining
freedom is narrowed accordingly.  The residual freedom is tracked by

  * ``t``       - number of leading frame rows already forced,
  * ``blocks``  - a partition of those rows; any later row scaling must be
                  constant on each block,
  * ``e``       - the field automorphism is restricted to powers of
                  frob^e,
  * ``tcols[i]``/``anchors[i]`` - per subspace position, how many leading
                  basis columns are echelonized/pinned and which frame row
                  anchors each of them.

Every transformation is applied to the whole state with deterministic
compensations (column operations and per-normal scalings) chosen so that
previously pinned data never changes.  The accumulated row-side semilinear
map ``acc`` therefore always satisfies: current content = acc applied to
the original content arranged by ``origin``.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .model import Semilinear


class RowBlocks:
    """Union-find over frame rows; the representative is the least row."""

    __slots__ = ("parent",)

    def __init__(self, k):
        self.parent = list(range(k))

    def clone(self):
        rb = RowBlocks.__new__(RowBlocks)
        rb.parent = self.parent[:]
        return rb

    def find(self, r):
        p = self.parent
        while p[r] != r:
            p[r] = p[p[r]]
            r = p[r]
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def block_tuples(self, t):
        """The blocks restricted to rows < t, each sorted, ordered by rep."""
        groups = {}
        for r in range(t):
            groups.setdefault(self.find(r), []).append(r)
        return tuple(tuple(groups[rep]) for rep in sorted(groups))


class SearchState:
    __slots__ = (
        "f",
        "k",
        "n",
        "h",
        "subs",
        "normals",
        "tcols",
        "anchors",
        "t",
        "blocks",
        "e",
        "part",
        "origin",
        "acc",
        "stamp",
    )

    def __init__(self, ext, part):
        f = ext.field
        self.f = f
        self.k = ext.k
        self.n = ext.n
        self.h = ext.h
        self.subs = [U.copy() for U in ext.subs]
        self.normals = ext.normals.copy()
        self.tcols = [0] * ext.n
        self.anchors = [[] for _ in range(ext.n)]
        self.t = 0
        self.blocks = RowBlocks(ext.k)
        self.e = 1
        self.part = part
        self.origin = np.arange(ext.n + ext.h, dtype=np.int64)
        self.acc = Semilinear.identity(f, ext.k)
        self.stamp = 0

    def clone(self):
        st = SearchState.__new__(SearchState)
        st.f = self.f
        st.k = self.k
        st.n = self.n
        st.h = self.h
        st.subs = [U.copy() for U in self.subs]
        st.normals = self.normals.copy()
        st.tcols = self.tcols[:]
        st.anchors = [a[:] for a in self.anchors]
        st.t = self.t
        st.blocks = self.blocks.clone()
        st.e = self.e
        st.part = self.part
        st.origin = self.origin.copy()
        st.acc = self.acc
        st.stamp = self.stamp
        return st

    # -- position bookkeeping --------------------------------------------

    def normal_col(self, pos):
        return self.normals[:, pos - self.n]

    def is_fixed(self, pos):
        return self.part.is_fixed(pos)

    def apply_perm(self, dest):
        """Reorder all per-position state; dest[old] = new."""
        newsubs = list(self.subs)
        newt = list(self.tcols)
        newa = list(self.anchors)
        for old in range(self.n):
            newp = int(dest[old])
            newsubs[newp] = self.subs[old]
            newt[newp] = self.tcols[old]
            newa[newp] = self.anchors[old]
        self.subs = newsubs
        self.tcols = newt
        self.anchors = newa
        hdest = np.asarray(dest[self.n :], dtype=np.int64) - self.n
        newnorm = np.empty_like(self.normals)
        newnorm[:, hdest] = self.normals
        self.normals = newnorm
        neworig = np.empty_like(self.origin)
        neworig[np.asarray(dest, dtype=np.int64)] = self.origin
        self.origin = neworig
        self.stamp += 1

    # -- group element application ---------------------------------------

    def _compose_acc(self, M, a):
        f = self.f
        self.acc = Semilinear(
            f, linalg.matmul(f, M, f.afrob(self.acc.mat, a)), a + self.acc.frob
        )

    def apply_frame_matrix(self, M):
        """Row-side matrix whose normal-side counterpart (M^-1)^T has unit
        vectors in its first t columns and identity in the top-left t x t
        corner on the row side: every pinned object and every echelonized
        top block is preserved without compensation."""
        f = self.f
        N = linalg.inverse(f, M).T.copy()
        for i in range(self.n):
            self.subs[i] = linalg.matmul(f, M, self.subs[i])
        self.normals = linalg.matmul(f, N, self.normals)
        self._compose_acc(M, 0)
        self.stamp += 1

    def apply_cell_scaling(self, d, skip_col=None, skip_normal=None):
        """Scale frame row r by d[r] on the subspace side (d must be
        constant on row blocks and 1 from row t on), compensating every
        pinned column and every pinned normal so they are unchanged.
        ``skip_col=(i, c)`` exempts one subspace column from compensation,
        ``skip_normal=pos`` one normal: those are the objects being pinned.
        """
        f = self.f
        d = np.asarray(d, dtype=np.int64)
        dinv = f.ainv(d)
        for i in range(self.n):
            U = f.amul(d[:, None], self.subs[i])
            tc = self.tcols[i]
            if tc:
                eps = dinv[[self.anchors[i][c] for c in range(tc)]].copy()
                if skip_col is not None and skip_col[0] == i:
                    eps[skip_col[1]] = 1
                U[:, :tc] = f.amul(U[:, :tc], eps[None, :])
            self.subs[i] = U
        V = f.amul(dinv[:, None], self.normals)
        for pos in range(self.n, self.n + self.h):
            if pos != skip_normal and self.is_fixed(pos):
                col = pos - self.n
                supp = np.nonzero(V[:, col])[0]
                V[:, col] = f.ascale(V[:, col], int(d[supp[0]]))
        self.normals = V
        self._compose_acc(np.diag(d).astype(np.int64), 0)
        self.stamp += 1

    def apply_frobenius(self, a):
        a %= self.f.r
        if a == 0:
            return
        f = self.f
        self.subs = [f.afrob(U, a) for U in self.subs]
        self.normals = f.afrob(self.normals, a)
        self._compose_acc(linalg.identity(self.k), a)
        self.stamp += 1

    def frob_exponents(self):
        """The still-allowed nontrivial field automorphism powers."""
        return range(self.e, self.f.r, self.e)

    def shrink_frob(self, data):
        """Restrict e to the least allowed power fixing ``data`` exactly."""
        f = self.f
        e = self.e
        while e < f.r:
            if (f.afrob(data, e) == data).all():
                break
            e += self.e
        self.e = e


def pin_normal(state, pos):
    """Pin a hyperplane normal that just became a singleton.

    If the normal leaves the span of the pinned frame rows, it is moved to
    the next unit vector and the frame grows.  Otherwise it is scaled and
    Frobenius-twisted to the least representative the residual group can
    reach, and the freedom that was used up is removed."""
    f = state.f
    v = state.normal_col(pos).copy()
    if v[state.t :].any():
        _pin_normal_new_row(state, v)
    else:
        _pin_normal_in_span(state, pos, v)
    return (1, state.t, state.e, linalg.vector_key(f, state.normal_col(pos)))


def _pin_normal_new_row(state, v):
    """Move a frame-extending normal to the next unit vector."""
    f = state.f
    k, t = state.k, state.t
    vb = v[t:]
    p_rel = int(np.nonzero(vb)[0][0])
    c = f.inv(int(vb[p_rel]))
    # normal-side map N = [[I, X], [0, Y]] with Y vb = e_0, v_top + X vb = 0
    Y = linalg.identity(k - t)
    Y[[0, p_rel]] = Y[[p_rel, 0]]
    Y[0] = f.ascale(Y[0], c)
    wb = vb.copy()
    wb[[0, p_rel]] = wb[[p_rel, 0]]
    for irow in range(1, k - t):
        if wb[irow]:
            Y[irow] = f.asub(Y[irow], f.ascale(Y[0], int(wb[irow])))
    N = linalg.zeros(k, k)
    N[:t, :t] = linalg.identity(t)
    if t:
        N[:t, t + p_rel] = f.ascale(f.aneg(v[:t]), c)
    N[t:, t:] = Y
    # subspace side: unit top-left corner, so pinned top blocks survive
    M = linalg.inverse(f, N.T).copy()
    state.apply_frame_matrix(M)
    state.t = t + 1


def _pin_normal_in_span(state, pos, v):
    """Minimize a normal supported on pinned frame rows: scale every row
    block meeting the support so the entry at its highest supported row
    becomes 1, take the least Frobenius twist, then merge those blocks."""
    f = state.f
    t = state.t
    supp = [int(r) for r in np.nonzero(v[:t])[0]]
    cells = {}
    for r in supp:
        cells.setdefault(state.blocks.find(r), []).append(r)
    dn = np.ones(state.k, dtype=np.int64)  # normal-side row scalings
    for rep, rows in cells.items():
        cc = f.inv(int(v[max(rows)]))
        if cc != 1:
            for r in range(t):
                if state.blocks.find(r) == rep:
                    dn[r] = cc
    if (dn != 1).any():
        state.apply_cell_scaling(f.ainv(dn), skip_normal=pos)
        v = state.normal_col(pos).copy()
    best_a, best = 0, linalg.vector_key(f, v)
    for a in state.frob_exponents():
        cand = linalg.vector_key(f, f.afrob(v, a))
        if cand < best:
            best, best_a = cand, a
    if best_a:
        state.apply_frobenius(best_a)
        v = state.normal_col(pos).copy()
    reps = sorted(cells)
    for rep in reps[1:]:
        state.blocks.union(reps[0], rep)
    state.shrink_frob(v)
    state.stamp += 1


def _coset_reduce(f, pinned_full, pinned_top, trailing_full):
    """Reduce trailing columns modulo the pinned columns so their
    coordinates at the pivot rows of the pinned top block vanish - a legal
    full-column operation, and the canonical coset representative."""
    if pinned_top.shape[1] == 0 or trailing_full.shape[1] == 0:
        return trailing_full
    B, S, rank = linalg.rcef(f, pinned_top)
    pivots = linalg.pivot_rows_of_rcef(B, rank)
    Bfull = linalg.matmul(f, pinned_full, S.T[:, :rank])
    out = trailing_full
    for l, pr in enumerate(pivots):
        coeffs = out[pr, :].copy()
        if coeffs.any():
            out = f.asub(out, f.amul(Bfull[:, l : l + 1], coeffs[None, :]))
    return out


def recolumnize(state, old_t):
    """Re-echelonize every subspace block after the frame grew.

    Unfixed positions get a fresh reduced column echelon form of their top
    rows.  Fixed positions keep their pinned column order; the trailing
    columns are first reduced modulo the pinned ones and echelonized on the
    new frame rows, then the pinned columns are reduced at the fresh pivot
    rows so the whole top block is again in echelon form up to scalars."""
    f = state.f
    t = state.t
    for i in range(state.n):
        U = state.subs[i]
        if not state.is_fixed(i):
            R, S, rank = linalg.rcef(f, U[:t, :])
            U = linalg.matmul(f, U, S.T)
            state.subs[i] = U
            state.tcols[i] = rank
            state.anchors[i] = linalg.pivot_rows_of_rcef(U[:t, :], rank)
            continue
        tc = state.tcols[i]
        if tc < U.shape[1]:
            trailing = _coset_reduce(f, U[:, :tc], U[:old_t, :tc], U[:, tc:])
            R2, S2, rank2 = linalg.rcef(f, trailing[old_t:t, :])
            trailing = linalg.matmul(f, trailing, S2.T)
            new_pivots = linalg.pivot_rows_of_rcef(R2, rank2)
            pinned = U[:, :tc]
            for l in range(rank2):
                pr = old_t + new_pivots[l]
                coeffs = pinned[pr, :].copy()
                if coeffs.any():
                    pinned = f.asub(
                        pinned, f.amul(trailing[:, l : l + 1], coeffs[None, :])
                    )
            state.subs[i] = np.concatenate([pinned, trailing], axis=1)
            state.anchors[i] = state.anchors[i] + [old_t + pr for pr in new_pivots]
            state.tcols[i] = tc + rank2
    state.stamp += 1
    # Positions inside one cell are still interchangeable, so the event must
    # not depend on their order: report the widths as sorted groups per cell.
    groups = tuple(
        tuple(sorted(state.tcols[p] for p in range(s, e)))
        for s, e in state.part.cells()
        if s < state.n
    )
    return (3, t, groups)


def pin_subspace(state, pos):
    """Pin (or re-pin after frame growth) a fixed subspace position.

    Columns are minimized left to right: every row block meeting a
    column's support is scaled so the entry at its highest supported row
    becomes 1, then the touched blocks merge with the column's anchor
    block.  Rows pinned by an earlier column already carry a 1 at their
    block's top supported row, so re-pins leave them unchanged.  One
    Frobenius minimization at the end covers the whole pinned block."""
    f = state.f
    i = pos
    t = state.t
    tc = state.tcols[i]
    for c in range(tc):
        w = state.subs[i][:t, c]
        supp = [int(r) for r in np.nonzero(w)[0]]
        anchor_rep = state.blocks.find(state.anchors[i][c])
        touched = {}
        for r in supp:
            touched.setdefault(state.blocks.find(r), []).append(r)
        d = np.ones(state.k, dtype=np.int64)
        scaled = False
        for rep, rows in touched.items():
            cc = f.inv(int(w[max(rows)]))
            if cc != 1:
                for r in range(t):
                    if state.blocks.find(r) == rep:
                        d[r] = cc
                scaled = True
        if scaled:
            state.apply_cell_scaling(d, skip_col=(i, c))
        for rep in sorted(touched):
            anchor_rep = state.blocks.union(anchor_rep, rep)
    X = state.subs[i][:t, :tc]
    best_a, best = 0, linalg.matrix_key(f, X)
    for a in state.frob_exponents():
        cand = linalg.matrix_key(f, f.afrob(X, a))
        if cand < best:
            best, best_a = cand, a
    if best_a:
        state.apply_frobenius(best_a)
    X = state.subs[i][:t, :tc]
    state.shrink_frob(X)
    state.stamp += 1
    ties = tuple(state.blocks.find(state.anchors[i][c]) for c in range(tc))
    return (2, i, tc, state.e, ties, linalg.matrix_key(f, X))


def semicanonical(state, new_fixed):
    """Pin a batch of freshly fixed positions in sequence order: hyperplane
    normals first; then, if the frame grew, re-echelonize all subspace
    blocks and re-pin every fixed subspace position, else pin just the new
    ones.  Returns the trace events and whether the frame grew."""
    events = []
    t_before = state.t
    hs = [p for p in new_fixed if p >= state.n]
    cs = [p for p in new_fixed if p < state.n]
    for p in hs:
        events.append(pin_normal(state, p))
    grew = state.t > t_before
    if grew:
        events.append(recolumnize(state, t_before))
        cs = [p for p in state.part.fixed_seq if p < state.n]
    for p in cs:
        events.append(pin_subspace(state, p))
    return events, grew
