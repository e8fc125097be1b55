"""Invariant refinement keys for the ordered-partition search.

All keys are functions of data that is identical across search branches
with equal traces, so sorting cells by them is sound.  Three families:

  * subset flag      - does a normal already lie in the span of the pinned
                       frame rows?
  * predicted pins   - the value a position *would* be pinned to if it
                       were fixed right now (normals and subspace blocks);
  * incidence colors - products v^T U between hyperplane-normal cells and
                       subspace cells, reduced to orbits under the
                       residual scaling/Frobenius freedom.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg

# refinement operator ids used in trace events
THETA_SUBSET = 1
THETA_MIN_H = 2
THETA_MIN_C = 3

ORBIT_ENUM_LIMIT = 50000


def theta_subset_keys(state):
    """0 when the normal still extends the pinned frame, 1 when it is
    supported on pinned rows only."""
    t = state.t
    keys = {}
    for pos in range(state.n, state.n + state.h):
        v = state.normal_col(pos)
        keys[pos] = (0,) if v[t:].any() else (1,)
    return keys


def _simulate_pin_vec(state, v):
    """The value pin_normal would produce for an in-span normal now."""
    f = state.f
    t = state.t
    w = v.copy()
    cells = {}
    for r in np.nonzero(w[:t])[0]:
        cells.setdefault(state.blocks.find(int(r)), []).append(int(r))
    for rows in cells.values():
        c = f.inv(int(w[max(rows)]))
        if c != 1:
            for r in rows:
                w[r] = f.mul(int(w[r]), c)
    best = linalg.vector_key(f, w)
    for a in state.frob_exponents():
        cand = linalg.vector_key(f, f.afrob(w, a))
        if cand < best:
            best = cand
    return best


def theta_min_h_keys(state):
    """Frame-extending normals form one class; in-span normals are keyed
    by the value they would be pinned to."""
    t = state.t
    keys = {}
    for pos in range(state.n, state.n + state.h):
        v = state.normal_col(pos)
        if v[t:].any():
            keys[pos] = (0,)
        else:
            keys[pos] = (1, _simulate_pin_vec(state, v))
    return keys


def _simulate_pin_block(state, i):
    """The (tie pattern, block value) pin_subspace would produce for
    position i if it were pinned fresh right now."""
    f = state.f
    t = state.t
    tc = state.tcols[i]
    if tc == 0:
        return (), ()
    X = state.subs[i][:t, :tc].copy()
    bl = state.blocks.clone()
    anchors = state.anchors[i]
    for c in range(tc):
        w = X[:, c]
        supp = [int(r) for r in np.nonzero(w)[0]]
        anchor_rep = bl.find(anchors[c])
        touched = {}
        for r in supp:
            touched.setdefault(bl.find(r), []).append(r)
        d = np.ones(t, dtype=np.int64)
        scaled = False
        for rep, rows in touched.items():
            cc = f.inv(int(w[max(rows)]))
            if cc != 1:
                for r in range(t):
                    if bl.find(r) == rep:
                        d[r] = cc
                scaled = True
        if scaled:
            X = f.amul(d[:, None], X)
            for c2 in range(c):
                X[:, c2] = f.ascale(X[:, c2], f.inv(int(d[bl.find(anchors[c2])])))
        for rep in sorted(touched):
            anchor_rep = bl.union(anchor_rep, rep)
    best = linalg.matrix_key(f, X)
    for a in state.frob_exponents():
        cand = linalg.matrix_key(f, f.afrob(X, a))
        if cand < best:
            best = cand
    pattern = tuple(bl.find(anchors[c]) for c in range(tc))
    return pattern, best


def theta_min_c_keys(state):
    """Subspace positions keyed by echelon width and predicted pin value."""
    keys = {}
    for i in range(state.n):
        pattern, best = _simulate_pin_block(state, i)
        keys[i] = (state.tcols[i], pattern, best)
    return keys


def _orbit_min(f, w1, toks, locked_mask, e):
    """Least rank tuple reachable from the product row w1 under one free
    unit scalar per unlocked column token and the allowed Frobenius
    powers.  Returns None when enumeration would exceed the cap."""
    uniq = []
    for tkn in toks:
        if tkn not in uniq:
            uniq.append(tkn)
    free = [u for u in uniq if not any(locked_mask[c] for c, tk in enumerate(toks) if tk == u)]
    n_pows = len(range(0, f.r, e))
    count = (f.q - 1) ** len(free) * n_pows
    if count > ORBIT_ENUM_LIMIT:
        return None
    units = [int(u) for u in f.units()]
    slot = {u: s for s, u in enumerate(free)}
    best = None
    for m in range(0, f.r, e):
        wm = f.afrob(np.asarray(w1, dtype=np.int64), m)
        for assign in itertools.product(units, repeat=len(free)):
            vals = tuple(
                int(f.rank(f.mul(int(wm[c]), assign[slot[tk]]) if tk in slot else int(wm[c])))
                for c, tk in enumerate(toks)
            )
            if best is None or vals < best:
                best = vals
    return best


def edge_color(state, i, jpos, memo):
    """Color of the incidence between subspace position i and hyperplane
    position jpos, invariant across equal-trace branches."""
    f = state.f
    v = state.normal_col(jpos)
    w = linalg.matmul(f, v[None, :], state.subs[i])[0]
    if not w.any():
        return ("z",)
    tc = state.tcols[i]
    if w[tc:].any():
        return ("u",)
    w1 = w[:tc]
    toks = tuple(state.blocks.find(state.anchors[i][c]) for c in range(tc))
    if state.is_fixed(jpos):
        supp0 = int(np.nonzero(v)[0][0])
        j_tok = state.blocks.find(supp0)
        locked = tuple(tk == j_tok for tk in toks)
    else:
        locked = (False,) * tc
    rel = {}
    rel_toks = tuple(rel.setdefault(tk, len(rel)) for tk in toks)
    key = (state.e, rel_toks, locked, tuple(int(x) for x in w1))
    hit = memo.get(key)
    if hit is not None:
        return hit
    best = _orbit_min(f, w1, rel_toks, locked, state.e)
    if best is None:
        color = ("s", rel_toks, locked, tuple(int(x != 0) for x in w1))
    else:
        color = ("o",) + best
    memo[key] = color
    return color


def pair_schedule(part, n_c):
    """All (subspace cell, hyperplane cell) pairs with at least one
    non-singleton side, smallest work first."""
    ccells = [(s, e) for s, e in part.cells() if s < n_c]
    hcells = [(s, e) for s, e in part.cells() if s >= n_c]
    pairs = []
    for cs, ce in ccells:
        for hs, he in hcells:
            if ce - cs == 1 and he - hs == 1:
                continue
            sizes = sorted((ce - cs, he - hs))
            pairs.append(((sizes[0], sizes[1], hs, cs), (cs, ce), (hs, he)))
    pairs.sort()
    return [(c, h) for _, c, h in pairs]


def pair_keys(state, ccell, hcell, memo):
    """Vertex keys for both sides of one cell pair: the number of
    incidences that vanish, then the sorted remaining colors."""
    cs, ce = ccell
    hs, he = hcell
    colors = {}
    for i in range(cs, ce):
        for j in range(hs, he):
            colors[i, j] = edge_color(state, i, j, memo)
    ckeys = {}
    for i in range(cs, ce):
        row = [colors[i, j] for j in range(hs, he)]
        nz = [c for c in row if c != ("z",)]
        ckeys[i] = (len(row) - len(nz), tuple(sorted(nz)))
    hkeys = {}
    for j in range(hs, he):
        col = [colors[i, j] for i in range(cs, ce)]
        nz = [c for c in col if c != ("z",)]
        hkeys[j] = (len(col) - len(nz), tuple(sorted(nz)))
    return ckeys, hkeys
