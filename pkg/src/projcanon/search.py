"""Backtracking canonization of subspace families.

The driver explores an individualization/refinement tree.  Every node
action appends a comparable event to the path trace; the canonical form
is the leaf with the least trace, the transporter is that leaf's
accumulated semilinear map, and equal-trace leaves yield automorphisms.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg, permgroup, preprocess, refine
from .errors import CapacityExceeded, ShapeError, VerificationFailed
from .inner import SearchState, semicanonical
from .model import (
    NormalizedInstance,
    RawFamily,
    Semilinear,
    Subspace,
    normalize,
    should_dualize,
)
from .partition import Partition

# trace event kinds
E_PIN_H = 1
E_PIN_C = 2
E_RECOL = 3
E_REFINE = 4
E_GRAPH = 5
E_INDIV = 6
E_LEAF = 7


@dataclass
class CanonOptions:
    dualize: str = "auto"  # auto | on | off
    aut_prune: bool = True
    candidate_prune: bool = True
    node_limit: int = None


@dataclass
class CanonResult:
    field: object
    k: int
    canonical: list  # (dim, multiplicity, tuple of Subspace) per set
    transporter: object  # Semilinear mapping the input onto the canonical family
    aut_position_gens: list  # permutations of the n member positions
    aut_semilinear_gens: list  # matching semilinear parts
    aut_order: int  # order of the full semilinear stabilizer
    dualized: bool
    stats: dict

    @property
    def aut_order_gammal(self):
        """Order of the stabilizer inside the full semilinear group."""
        return self.aut_order

    @property
    def aut_order_pgammal(self):
        """Order of the stabilizer modulo the scalar matrices."""
        return self.aut_order // (self.field.q - 1)

    def canonical_key(self):
        f = self.field
        return (
            (f.p, f.r, f.modulus, self.k),
            tuple(
                (dim, mult, tuple(U.key() for U in members))
                for dim, mult, members in self.canonical
            ),
        )


def _proj_reduce(f, v):
    nz = np.nonzero(v)[0]
    if len(nz) == 0:
        return v
    c = int(v[nz[0]])
    return f.ascale(v, f.inv(c)) if c != 1 else v


def _leaf_event(f, state):
    subs_keys = tuple(linalg.matrix_key(f, U) for U in state.subs)
    norm_keys = tuple(
        linalg.vector_key(f, state.normals[:, j]) for j in range(state.normals.shape[1])
    )
    return (
        E_LEAF,
        state.t,
        state.e,
        state.blocks.block_tuples(state.k),
        subs_keys,
        norm_keys,
    )


class Search:
    def __init__(self, ext, opts):
        self.ext = ext
        self.f = ext.field
        self.n = ext.n
        self.h = ext.h
        self.opts = opts
        self.events = []
        self.best = None  # least trace found so far (the canonical leaf)
        self.best_state = None
        self.zeta = None  # first leaf ever reached, kept for automorphism detection
        self.zeta_state = None
        self.zeta_ok = True  # path events still match the first leaf's prefix
        self.rho_gt = False  # path events already diverged above the best trace
        self.aut = permgroup.PermGroup(self.n + self.h)
        self.aut_pairs = []  # verified (position perm, semilinear part)
        self.memo = {}  # shared edge-color memo (content-keyed)
        self.nodes = 0
        self.leaves = 0
        self.max_depth = 0

    # ------------------------------------------------------------------
    # trace bookkeeping

    def _emit(self, ev):
        """Append a path event.  False means the branch can be abandoned:
        it diverged from the first leaf's trace (so no automorphism can be
        found under it) and is strictly worse than the best trace (so no
        canonical leaf can be found under it either)."""
        self.events.append(ev)
        i = len(self.events) - 1
        if self.zeta_ok and self.zeta is not None:
            if i >= len(self.zeta) or ev != self.zeta[i]:
                self.zeta_ok = False
        if not self.opts.candidate_prune:
            return True
        if self.best is not None and not self.rho_gt:
            if i >= len(self.best):
                self.rho_gt = True  # proper extension of the best trace
            else:
                c = self.best[i]
                if ev < c:
                    self.best = None  # this branch is strictly better
                    self.best_state = None
                elif ev != c:
                    self.rho_gt = True
        return self.zeta_ok or self.best is None or not self.rho_gt

    # ------------------------------------------------------------------
    # node processing

    def _stabilize(self, state, pending):
        thetas = (
            (refine.THETA_SUBSET, refine.theta_subset_keys),
            (refine.THETA_MIN_H, refine.theta_min_h_keys),
            (refine.THETA_MIN_C, refine.theta_min_c_keys),
        )
        pending = list(pending)
        while True:
            if pending:
                evs, _ = semicanonical(state, pending)
                pending = []
                for ev in evs:
                    if not self._emit(ev):
                        return False
            moved = False
            for tid, keyfun in thetas:
                keys = keyfun(state)
                part, dest, fp, singles = state.part.refine(keys)
                if not self._emit((E_REFINE, tid, fp)):
                    return False
                state.part = part
                if dest is not None:
                    state.apply_perm(dest)
                if singles:
                    pending.extend(singles)
                if dest is not None or singles:
                    moved = True
                    break
            if moved:
                continue
            for ccell, hcell in refine.pair_schedule(state.part, self.n):
                ckeys, hkeys = refine.pair_keys(state, ccell, hcell, self.memo)
                part, dest1, fpc, s1 = state.part.refine(ckeys)
                state.part = part
                if dest1 is not None:
                    state.apply_perm(dest1)
                part, dest2, fph, s2 = state.part.refine(hkeys)
                state.part = part
                if dest2 is not None:
                    state.apply_perm(dest2)
                if not self._emit((E_GRAPH, ccell[0], hcell[0], fpc, fph)):
                    return False
                pending.extend(s1)
                pending.extend(s2)
                if dest1 is not None or dest2 is not None or s1 or s2:
                    moved = True
                    break
            if not moved:
                return True

    def explore(self, state, pending, depth=0):
        self.nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth
        limit = self.opts.node_limit
        if limit is not None and self.nodes > limit:
            raise CapacityExceeded("search node limit %d exceeded" % limit, self.nodes)
        mark = len(self.events)
        saved_zeta_ok = self.zeta_ok
        saved_rho_gt = self.rho_gt
        try:
            if not self._stabilize(state, pending):
                return
            if state.part.is_discrete():
                self._handle_leaf(state)
                return
            cell = state.part.target_cell()
            s, e = cell
            if not self._emit((E_INDIV, s, e - s)):
                return
            seen = []
            for j in range(s, e):
                oj = int(state.origin[j])
                if self.opts.aut_prune and seen:
                    prefix = tuple(int(state.origin[p]) for p in state.part.fixed_seq)
                    labels = self.aut.stab_orbit_labels(prefix)
                    lj = int(labels[oj])
                    if any(int(labels[o]) == lj for o in seen):
                        continue
                seen.append(oj)
                child = state.clone()
                part, dest, singles = state.part.individualize(cell, j)
                child.part = part
                child.apply_perm(dest)
                self.explore(child, singles, depth + 1)
        finally:
            del self.events[mark:]
            self.zeta_ok = saved_zeta_ok
            self.rho_gt = saved_rho_gt

    def _handle_leaf(self, state):
        if state.t != state.k:
            raise VerificationFailed("leaf reached with an incomplete frame")
        for i in range(self.n):
            if state.tcols[i] != state.subs[i].shape[1]:
                raise VerificationFailed("leaf reached with an unpinned block")
        self.leaves += 1
        ev = _leaf_event(self.f, state)
        if self.zeta is None:
            self.events.append(ev)
            snap = state.clone()
            self.zeta = list(self.events)
            self.zeta_state = snap
            self.best = list(self.events)
            self.best_state = snap
            return
        if not self.opts.candidate_prune:
            trace = self.events + [ev]
            if trace == self.zeta:
                self._record_automorphism(state, self.zeta_state)
            if trace < self.best:
                self.best = trace
                self.best_state = state.clone()
            elif trace == self.best:
                self._record_automorphism(state, self.best_state)
            return
        self._emit(ev)
        if self.zeta_ok and len(self.events) == len(self.zeta):
            self._record_automorphism(state, self.zeta_state)
        if self.best is None:
            self.best = list(self.events)
            self.best_state = state.clone()
        elif not self.rho_gt and len(self.events) == len(self.best):
            self._record_automorphism(state, self.best_state)

    # ------------------------------------------------------------------
    # automorphisms

    def _record_automorphism(self, state, ref):
        deg = self.n + self.h
        place = np.empty(deg, dtype=np.int64)
        place[ref.origin] = np.arange(deg, dtype=np.int64)
        sigma = state.origin[place]
        g = state.acc.inverse().compose(ref.acc)
        self._verify_automorphism(sigma, g)
        if self.aut.add(sigma):
            self.aut_pairs.append((sigma.copy(), g))

    def _verify_automorphism(self, sigma, g):
        ext = self.ext
        f = self.f
        for z in range(self.n):
            tz = int(sigma[z])
            if ext.set_of_pos[z] != ext.set_of_pos[tz]:
                raise VerificationFailed("automorphism crosses set boundaries")
            if Subspace(f, g.apply_mat(ext.subs[z])) != Subspace(f, ext.subs[tz]):
                raise VerificationFailed("automorphism fails on a subspace position")
        gc = g.contragredient()
        for z in range(self.h):
            w = _proj_reduce(f, gc.apply_vec(ext.normals[:, z]))
            tz = int(sigma[self.n + z]) - self.n
            if not np.array_equal(w, ext.normals[:, tz]):
                raise VerificationFailed("automorphism fails on a hyperplane position")


def _leaf_inner_gens(f, leaf):
    """Stabilizer generators left at the canonical leaf: one unit scaling
    per row block, plus the least allowed field automorphism power, all
    conjugated back to the input frame."""
    gens = []
    inv = leaf.acc.inverse()
    if f.q > 2:
        for block in leaf.blocks.block_tuples(leaf.k):
            D = linalg.identity(leaf.k)
            for r in block:
                D[r, r] = f.xi
            gens.append(inv.compose(Semilinear(f, D)).compose(leaf.acc))
    if leaf.e < f.r:
        gens.append(inv.compose(Semilinear(f, linalg.identity(leaf.k), leaf.e)).compose(leaf.acc))
    return gens


def point_action_order(f, k, semis):
    """Order of the group the given semilinear maps generate on the
    projective points of F_q^k."""
    pts = preprocess.projective_normals(f, k)
    index = {tuple(int(x) for x in row): i for i, row in enumerate(pts)}
    perms = []
    for g in semis:
        img = g.apply_mat(pts.T)
        perm = np.empty(pts.shape[0], dtype=np.int64)
        for i in range(pts.shape[0]):
            w = _proj_reduce(f, img[:, i])
            perm[i] = index[tuple(int(x) for x in w)]
        perms.append(perm)
    return permgroup.group_order(pts.shape[0], perms)


def _verify_transporter(f, sets, canon_sets, tr):
    for s, (dim, mult, members) in zip(sets, canon_sets):
        img = sorted(Subspace(f, tr.apply_mat(U.basis)) for U in s.members)
        if img != sorted(members):
            raise VerificationFailed("transporter does not map onto the canonical family")


def _verify_position_gens(f, inst, gens):
    subs = [U for s in inst.sets for U in s.members]
    for sigma, g in gens:
        for z, U in enumerate(subs):
            if Subspace(f, g.apply_mat(U.basis)) != subs[int(sigma[z])]:
                raise VerificationFailed("stabilizer generator fails on the family")


def canonize(family, options=None):
    """Canonical form, transporter, and stabilizer of a subspace family
    under invertible semilinear maps."""
    opts = options if options is not None else CanonOptions()
    if isinstance(family, RawFamily):
        inst = normalize(family)
    elif isinstance(family, NormalizedInstance):
        inst = family
    else:
        raise ShapeError("canonize expects a RawFamily or NormalizedInstance")
    f = inst.field
    if opts.dualize == "on":
        dualized = True
    elif opts.dualize == "off":
        dualized = False
    elif opts.dualize == "auto":
        dualized = should_dualize(inst)
    else:
        raise ShapeError("dualize must be one of auto, on, off")
    work = inst.dual() if dualized else inst
    ext = preprocess.extend_instance(f, work)
    part0, singles0 = Partition.initial(ext.n, ext.cell_bounds)
    search = Search(ext, opts)
    state0 = SearchState(ext, part0)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 3000 + 12 * (ext.n + ext.h)))
    try:
        search.explore(state0, singles0)
    finally:
        sys.setrecursionlimit(old_limit)
    leaf = search.best_state
    if leaf is None:
        raise VerificationFailed("search finished without a canonical leaf")

    canon_sets = []
    offset = 0
    for s in work.sets:
        members = tuple(
            Subspace(f, leaf.subs[p].copy()) for p in range(offset, offset + len(s.members))
        )
        canon_sets.append((s.dim, s.multiplicity, members))
        offset += len(s.members)
    tr = leaf.acc

    pairs = list(search.aut_pairs)
    identity_sigma = np.arange(ext.n + ext.h, dtype=np.int64)
    for g_inn in _leaf_inner_gens(f, leaf):
        search._verify_automorphism(identity_sigma, g_inn)
        pairs.append((identity_sigma.copy(), g_inn))

    aut_order = (f.q - 1) * point_action_order(f, inst.k, [g for _, g in pairs])

    if dualized:
        # translate positions and maps back through the duality
        n = ext.n
        prim_pos = {}
        offset = 0
        for si, s in enumerate(inst.sets):
            for mi, U in enumerate(s.members):
                prim_pos[(si, U.dual().key())] = offset + mi
            offset += len(s.members)
        wp_to_pp = np.empty(n, dtype=np.int64)
        offset = 0
        for si, s in enumerate(work.sets):
            for mi, W in enumerate(s.members):
                wp_to_pp[offset + mi] = prim_pos[(si, W.key())]
            offset += len(s.members)
        pp_to_wp = permgroup.inverse(wp_to_pp)
        canon_sets = [
            (inst.sets[si].dim, mult, tuple(U.dual() for U in members))
            for si, (dim, mult, members) in enumerate(canon_sets)
        ]
        tr = tr.contragredient()
        mapped = []
        for sigma, g in pairs:
            sig_c = wp_to_pp[sigma[:n][pp_to_wp]]
            mapped.append((sig_c, g.contragredient()))
        pairs = mapped
    else:
        pairs = [(sigma[: ext.n].copy(), g) for sigma, g in pairs]

    _verify_transporter(f, inst.sets, canon_sets, tr)
    _verify_position_gens(f, inst, pairs)

    stats = {
        "nodes": search.nodes,
        "leaves": search.leaves,
        "max_depth": search.max_depth,
        "aut_found": len(search.aut_pairs),
        "trace_len": len(search.best),
        "hyperplanes": ext.h,
        "initial_member_cells": tuple(e - s for s, e in ext.cell_bounds if e <= ext.n),
        "initial_hyperplane_cells": tuple(e - s for s, e in ext.cell_bounds if s >= ext.n),
    }
    return CanonResult(
        field=f,
        k=inst.k,
        canonical=canon_sets,
        transporter=tr,
        aut_position_gens=[sigma for sigma, _ in pairs],
        aut_semilinear_gens=[g for _, g in pairs],
        aut_order=aut_order,
        dualized=dualized,
        stats=stats,
    )


def same_orbit(fam_a, fam_b, options=None):
    """Decide semilinear equivalence; returns (bool, transporter or None)
    with the transporter mapping fam_a onto fam_b."""
    ra = canonize(fam_a, options)
    rb = canonize(fam_b, options)
    if ra.canonical_key() != rb.canonical_key():
        return False, None
    g = rb.transporter.inverse().compose(ra.transporter)
    return True, g
