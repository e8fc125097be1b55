"""Exhaustive reference implementations for small parameters.

These walk all of GL_k(q) x <frobenius> in a fixed order, so they are
exponential in k^2 and only meant as ground truth for tests and for the
--oracle cross-check on tiny inputs."""

import itertools

import numpy as np

from . import linalg
from .errors import CapacityExceeded
from .model import Semilinear, normalize

# The prime-field fast path materializes every candidate matrix at once;
# beyond this many candidates it falls back to the element-by-element loop.
_FAST_CANDIDATE_LIMIT = 1 << 21

_INVERTIBLE_CACHE = {}


def _candidate_count(f, k):
    return (f.q ** (k * k)) * f.r


def _all_semilinear(f, k):
    """Yield every (A, tau^a) with A invertible, in deterministic order."""
    cells = [range(f.q)] * (k * k)
    for a in range(f.r):
        for entries in itertools.product(*cells):
            A = np.array(entries, dtype=np.int64).reshape(k, k)
            if linalg.mat_rank(f, A) == k:
                yield Semilinear(f, A, a)


def _set_keys(inst):
    return [
        frozenset(U.key() for U in nset.members) for nset in inst.sets
    ]


def _maps_onto(g, inst_a, keys_b):
    for nset, want in zip(inst_a.sets, keys_b):
        got = frozenset(g.apply_subspace(U).key() for U in nset.members)
        if got != want:
            return False
    return True


# --- vectorized prime-field path ------------------------------------------
#
# Over a prime field the frobenius is trivial, so the group is just the set
# of invertible matrices.  All of them are materialized as one array and the
# images of every subspace under every matrix are fingerprinted in a handful
# of batched products, instead of one echelon form per (element, member).


def _fast_eligible(f, k, insts):
    if f.r != 1:
        return False
    if f.q ** (k * k) > _FAST_CANDIDATE_LIMIT:
        return False
    dmax = max(
        (U.dim for inst in insts for nset in inst.sets for U in nset.members),
        default=0,
    )
    # a fingerprint packs p**dmax sorted point codes (each < p**k) plus a
    # dimension tag into one int64; bail out to the generic loop if that
    # cannot fit
    return (f.q**k) ** (f.q**dmax) * (k + 2) < 2**63


def _invertible_mats(p, k):
    """All invertible k x k matrices over F_p, in row-major counting order."""
    key = (p, k)
    cached = _INVERTIBLE_CACHE.get(key)
    if cached is not None:
        return cached
    total = p ** (k * k)
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, k * k), dtype=np.int64)
    for j in range(k * k - 1, -1, -1):
        digits[:, j] = idx % p
        idx //= p
    mats = digits.reshape(total, k, k)
    mats = mats[_full_rank_mask(p, mats)]
    _INVERTIBLE_CACHE[key] = mats
    return mats


def _full_rank_mask(p, mats):
    """Boolean mask of the invertible matrices, by batched elimination."""
    A = mats.copy()
    n, k, _ = A.shape
    ok = np.ones(n, dtype=bool)
    inv = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv[v] = pow(v, p - 2, p)
    rows = np.arange(n)
    for col in range(k):
        sub = A[:, col:, col]
        piv = np.argmax(sub != 0, axis=1)
        ok &= np.take_along_axis(sub, piv[:, None], 1)[:, 0] != 0
        pr = piv + col
        tmp = A[rows, pr].copy()
        A[rows, pr] = A[rows, col]
        A[rows, col] = tmp
        scale = inv[A[:, col, col]]
        A[:, col, col:] = A[:, col, col:] * scale[:, None] % p
        below = A[:, col + 1 :, col]
        A[:, col + 1 :, col:] = (
            A[:, col + 1 :, col:] - below[:, :, None] * A[:, col, None, col:]
        ) % p
    return ok


def _member_keys(p, k, mats, basis):
    """One int64 fingerprint per matrix for the image of one subspace.

    Two images get the same fingerprint exactly when they are the same
    subspace: the key encodes the sorted set of points of the image."""
    d = basis.shape[1]
    ncols = p**d
    coeffs = np.empty((d, ncols), dtype=np.int64)
    idx = np.arange(ncols, dtype=np.int64)
    for row in range(d):
        coeffs[row] = idx % p
        idx //= p
    pts = np.matmul(np.matmul(mats, basis) % p, coeffs) % p
    col_w = p ** np.arange(k, dtype=np.int64)
    codes = (pts * col_w[None, :, None]).sum(axis=1)
    codes.sort(axis=1)
    pack_w = np.int64(p**k) ** np.arange(ncols, dtype=np.int64)
    return (codes @ pack_w) * (k + 1) + d


def _match_mask(p, k, mats, inst_a, inst_b):
    """Mask of matrices sending each set of inst_a onto the same set of inst_b."""
    ident = np.eye(k, dtype=np.int64)[None]
    mask = np.ones(len(mats), dtype=bool)
    for set_a, set_b in zip(inst_a.sets, inst_b.sets):
        want = np.sort(
            np.concatenate([_member_keys(p, k, ident, U.basis) for U in set_b.members])
        )
        got = np.stack([_member_keys(p, k, mats, U.basis) for U in set_a.members], axis=1)
        got.sort(axis=1)
        mask &= (got == want[None, :]).all(axis=1)
    return mask


def brute_same_orbit(fam_a, fam_b, cap=10_000_000):
    """Decide equivalence by exhaustive search; returns (bool, witness)."""
    inst_a = normalize(fam_a)
    inst_b = normalize(fam_b)
    f = inst_a.field
    if (f.p, f.r) != (inst_b.field.p, inst_b.field.r) or inst_a.k != inst_b.k:
        return False, None
    if inst_a.shape_key() != inst_b.shape_key():
        return False, None
    k = inst_a.k
    count = _candidate_count(f, k)
    if count > cap:
        raise CapacityExceeded(
            "oracle would enumerate %d group elements (cap %d)" % (count, cap), count
        )
    if _fast_eligible(f, k, (inst_a, inst_b)):
        mats = _invertible_mats(f.p, k)
        mask = _match_mask(f.p, k, mats, inst_a, inst_b)
        hits = np.flatnonzero(mask)
        if len(hits) == 0:
            return False, None
        return True, Semilinear(f, mats[hits[0]].copy(), 0)
    keys_b = _set_keys(inst_b)
    for g in _all_semilinear(f, k):
        if _maps_onto(g, inst_a, keys_b):
            return True, g
    return False, None


def brute_stab_order(fam, cap=10_000_000):
    """Order of the full semilinear stabilizer, counted element by element."""
    inst = normalize(fam)
    f = inst.field
    k = inst.k
    count = _candidate_count(f, k)
    if count > cap:
        raise CapacityExceeded(
            "oracle would enumerate %d group elements (cap %d)" % (count, cap), count
        )
    if _fast_eligible(f, k, (inst,)):
        mats = _invertible_mats(f.p, k)
        return int(_match_mask(f.p, k, mats, inst, inst).sum())
    keys = _set_keys(inst)
    found = 0
    for g in _all_semilinear(f, k):
        if _maps_onto(g, inst, keys):
            found += 1
    return found
