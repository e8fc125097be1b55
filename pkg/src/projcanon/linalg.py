"""Exact linear algebra over GF(q) on integer-encoded numpy matrices.

Every routine takes the field as first argument and works on 2-d int64
arrays whose entries are field element indices.  Reductions return the
transformation that produced them so callers can use them as certificates.
"""

from __future__ import annotations

import numpy as np

from .errors import RankDeficient, ShapeError


def zeros(m, n):
    return np.zeros((m, n), dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def as_matrix(rows):
    M = np.array(rows, dtype=np.int64)
    if M.ndim != 2:
        raise ShapeError("expected a 2-d matrix")
    return M


def matmul(f, A, B):
    """Matrix product over f."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ShapeError("matmul shape mismatch %r x %r" % (A.shape, B.shape))
    if f.r == 1:
        return (A @ B) % f.p
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    prod = f.amul(A[:, :, None], B[None, :, :])
    acc = prod[:, 0, :]
    for l in range(1, A.shape[1]):
        acc = f.aadd(acc, prod[:, l, :])
    return acc


def matvec(f, A, v):
    return matmul(f, A, np.asarray(v).reshape(-1, 1)).reshape(-1)


def frob_mat(f, M, m=1):
    return f.afrob(M, m)


def rref(f, M):
    """Reduced row echelon form: returns (R, T, rank) with T @ M = R,
    T invertible, pivot entries 1 and pivot columns cleared."""
    M = np.asarray(M)
    m, n = M.shape
    R = M.copy()
    T = identity(m)
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            R[[row, i]] = R[[i, row]]
            T[[row, i]] = T[[i, row]]
        piv = int(R[row, col])
        if piv != 1:
            c = f.inv(piv)
            R[row] = f.ascale(R[row], c)
            T[row] = f.ascale(T[row], c)
        others = np.nonzero(R[:, col])[0]
        others = others[others != row]
        if others.size:
            factors = R[others, col]
            R[others] = f.asub(R[others], f.amul(factors[:, None], R[row][None, :]))
            T[others] = f.asub(T[others], f.amul(factors[:, None], T[row][None, :]))
        row += 1
    return R, T, row


def rcef(f, M):
    """Reduced column echelon form: returns (R, S, rank) with M @ S.T = R."""
    R0, T0, rank = rref(f, np.asarray(M).T)
    return R0.T.copy(), T0, rank


def pivot_rows_of_rcef(R, rank):
    """Row index of the leading entry of each of the first `rank` columns."""
    out = []
    for c in range(rank):
        nz = np.nonzero(R[:, c])[0]
        out.append(int(nz[0]))
    return out


def kernel_basis(f, M):
    """Rows form a basis of the left kernel {v : v^T M = 0}."""
    _, T, rank = rref(f, M)
    return T[rank:].copy()


def mat_rank(f, M):
    return rref(f, M)[2]


def inverse(f, A):
    A = np.asarray(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeError("only square matrices can be inverted")
    R, T, rank = rref(f, A)
    if rank != A.shape[0]:
        raise RankDeficient("matrix is singular")
    return T


def solve(f, A, B):
    """One solution X of A @ X = B, or None if the system is inconsistent."""
    A = np.asarray(A)
    B = np.asarray(B)
    squeeze = B.ndim == 1
    if squeeze:
        B = B.reshape(-1, 1)
    if A.shape[0] != B.shape[0]:
        raise ShapeError("solve shape mismatch")
    R, T, rank = rref(f, A)
    rhs = matmul(f, T, B)
    if rank < A.shape[0] and rhs[rank:].any():
        return None
    X = zeros(A.shape[1], B.shape[1])
    for i in range(rank):
        piv = int(np.nonzero(R[i])[0][0])
        X[piv] = rhs[i]
    return X.reshape(-1) if squeeze else X


def matrix_cmp(f, A, B):
    """Total order on equal-shape matrices: columns compared left to right,
    entries within a column compared bottom row first, by element order."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ShapeError("matrix_cmp requires equal shapes")
    ka = np.flipud(f.arank(A)).flatten(order="F")
    kb = np.flipud(f.arank(B)).flatten(order="F")
    diff = np.nonzero(ka != kb)[0]
    if diff.size == 0:
        return 0
    i = diff[0]
    return -1 if ka[i] < kb[i] else 1


def matrix_key(f, M):
    """Sort/hash key consistent with matrix_cmp."""
    return tuple(int(x) for x in np.flipud(f.arank(np.asarray(M))).flatten(order="F"))


def vector_key(f, v):
    """Sort key for a column vector under the same order as matrix_cmp."""
    return tuple(int(x) for x in f.arank(np.asarray(v))[::-1])
