"""Adapters between generator matrices and subspace families.

A linear code of length n is equivalent to the multiset of points spanned
by its generator-matrix columns; an additive code over an extension field
corresponds to the multiset of column-block spans.  Canonizing the derived
family therefore canonizes the code, and the transporter folds back into a
column-level certificate (matrix, per-block transforms, permutation,
field-automorphism exponent) that carries the input generator matrix onto
a generator matrix of the canonical code.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import AxiomViolation, RankDeficient, ShapeError, VerificationFailed
from .field import GF
from .model import RawFamily, Subspace
from .search import canonize


@dataclass
class GeneratorInput:
    """A k x (s*n) generator matrix over F_q, read as n blocks of s columns.

    ``s`` is 1 for linear codes; for additive codes it is the degree of the
    extension field the code is additive over, so each block of ``s``
    columns describes one coordinate.
    """

    field: object
    matrix: np.ndarray
    s: int = 1

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64)
        if self.matrix.ndim != 2:
            raise ShapeError("generator matrix must be two-dimensional")
        if self.s < 1:
            raise ShapeError("block width s must be at least 1")
        if self.matrix.shape[1] == 0 or self.matrix.shape[1] % self.s != 0:
            raise ShapeError(
                "generator matrix has %d columns, not a positive multiple of s=%d"
                % (self.matrix.shape[1], self.s)
            )
        if ((self.matrix < 0) | (self.matrix >= self.field.q)).any():
            raise ShapeError("generator matrix entries must lie in 0..q-1")
        k = self.matrix.shape[0]
        if linalg.mat_rank(self.field, self.matrix) != k:
            raise RankDeficient("generator matrix must have full row rank %d" % k)

    @property
    def k(self):
        return self.matrix.shape[0]

    @property
    def n(self):
        """Number of column blocks (code length)."""
        return self.matrix.shape[1] // self.s

    def block(self, i):
        return self.matrix[:, i * self.s : (i + 1) * self.s]

    def kept_blocks(self):
        """Indices of blocks that span a nonzero subspace, then the dropped ones."""
        kept, dropped = [], []
        for i in range(self.n):
            (dropped if not self.block(i).any() else kept).append(i)
        return kept, dropped


def _as_input(field, matrix, s):
    if isinstance(matrix, GeneratorInput):
        return matrix
    return GeneratorInput(field, matrix, s)


def lincode_to_family(field, matrix):
    """The multiset of points spanned by the columns of a generator matrix.

    Zero columns carry no point and are dropped with a warning; repeated
    columns become repeated members, so the multiplicity structure of the
    code survives.
    """
    gi = _as_input(field, matrix, 1)
    return addcode_to_family(field, gi.matrix, 1)


def addcode_to_family(field, matrix, s):
    """The multiset of subspaces spanned by the s-column blocks of a
    generator matrix.  Blocks may span fewer than s dimensions; blocks that
    are entirely zero are dropped with a warning.  With s = 1 this is
    exactly the linear-code adapter.
    """
    gi = _as_input(field, matrix, s)
    kept, dropped = gi.kept_blocks()
    if dropped:
        warnings.warn(
            "dropping %d zero column block(s) at position(s) %s"
            % (len(dropped), dropped)
        )
    members = [Subspace(gi.field, gi.block(i)) for i in kept]
    return RawFamily(gi.field, gi.k, [members])


def netcode_wrap(field, k, subspaces):
    """Wrap a set of subspaces (a subspace code) as a one-set family."""
    return RawFamily(field, k, [list(subspaces)])


@dataclass
class CodeCertificate:
    """A column-level witness that two generator matrices present the same
    code up to the allowed moves: ``canonical_matrix`` block ``perm[i]``
    equals ``mat * frobenius^frob(block_i) * block_mats[i]`` for every kept
    input block ``i``.
    """

    field: object
    s: int
    mat: np.ndarray  # k x k invertible
    frob: int
    perm: np.ndarray  # kept-block index -> canonical block index
    block_mats: list  # one s x s invertible matrix per kept block
    kept: list  # original indices of the blocks that survived
    dropped: list  # original indices of dropped zero blocks
    canonical_matrix: np.ndarray  # k x (s * len(kept))

    @property
    def scalars(self):
        """The per-column multipliers, available when s == 1."""
        if self.s != 1:
            raise ShapeError("scalars are only defined for single-column blocks")
        return [int(B[0, 0]) for B in self.block_mats]

    def verify(self, gi):
        """Check the certificate against the generator matrix it was issued
        for; raises VerificationFailed on any mismatch."""
        f = self.field
        if sorted(self.kept + self.dropped) != list(range(gi.n)):
            raise VerificationFailed("certificate block bookkeeping is inconsistent")
        if sorted(int(p) for p in self.perm) != list(range(len(self.kept))):
            raise VerificationFailed("certificate permutation is not a bijection")
        if linalg.mat_rank(f, self.mat) != gi.k:
            raise VerificationFailed("certificate matrix is singular")
        s = self.s
        for j, i in enumerate(self.kept):
            B = self.block_mats[j]
            if linalg.mat_rank(f, B) != s:
                raise VerificationFailed("certificate block transform %d is singular" % i)
            image = linalg.matmul(f, linalg.matmul(f, self.mat, f.afrob(gi.block(i), self.frob)), B)
            slot = int(self.perm[j])
            target = self.canonical_matrix[:, slot * s : (slot + 1) * s]
            if not (image == target).all():
                raise VerificationFailed(
                    "certificate fails on block %d: image does not match slot %d"
                    % (i, slot)
                )

    def key(self):
        return (
            self.s,
            self.frob,
            linalg.matrix_key(self.field, self.mat),
            tuple(int(p) for p in self.perm),
            tuple(linalg.matrix_key(self.field, B) for B in self.block_mats),
            linalg.matrix_key(self.field, self.canonical_matrix),
        )


def _member_slots(canon_sets):
    """First column-block slot of each canonical member, walking the sets in
    order and giving each member ``multiplicity`` adjacent slots."""
    slots = {}
    base = 0
    for si, (dim, mult, members) in enumerate(canon_sets):
        for mi in range(len(members)):
            slots[(si, mi)] = base
            base += mult
    return slots, base


def _canonical_generator(f, k, s, canon_sets):
    """Generator matrix of the canonical code: each canonical member
    contributes ``multiplicity`` adjacent blocks holding its reduced basis,
    padded with zero columns up to the block width."""
    cols = []
    for dim, mult, members in canon_sets:
        for U in members:
            block = np.zeros((k, s), dtype=np.int64)
            block[:, : U.dim] = U.basis
            for _ in range(mult):
                cols.append(block)
    return np.concatenate(cols, axis=1) if cols else np.zeros((k, 0), dtype=np.int64)


def code_transporter(result, gi):
    """Fold a family-level canonization result back into a column-level
    certificate for the generator matrix it came from.  The certificate is
    verified before it is returned; failure to verify means an internal
    error, never bad input.
    """
    f = gi.field
    s = gi.s
    kept, dropped = gi.kept_blocks()

    # Map each kept block to its canonical member by transporting its span.
    canon_index = {}
    for si, (dim, mult, members) in enumerate(result.canonical):
        for mi, U in enumerate(members):
            canon_index[U.key()] = (si, mi)

    slots, total = _member_slots(result.canonical)
    if total != len(kept):
        raise VerificationFailed(
            "canonical family describes %d blocks but the input kept %d"
            % (total, len(kept))
        )
    canonical_matrix = _canonical_generator(f, gi.k, s, result.canonical)

    if not dropped and (gi.matrix == canonical_matrix).all():
        cert = CodeCertificate(
            field=f,
            s=s,
            mat=linalg.identity(gi.k),
            frob=0,
            perm=np.arange(len(kept), dtype=np.int64),
            block_mats=[linalg.identity(s) for _ in kept],
            kept=kept,
            dropped=dropped,
            canonical_matrix=canonical_matrix,
        )
        cert.verify(gi)
        return cert

    tr = result.transporter
    next_copy = {pos: 0 for pos in slots}
    perm = np.empty(len(kept), dtype=np.int64)
    block_mats = []
    for j, i in enumerate(kept):
        block = gi.block(i)
        image = tr.apply_mat(block)
        reduced, S, rank = linalg.rcef(f, image)
        member = canon_index.get(Subspace(f, reduced[:, :rank], reduce=False).key())
        if member is None:
            raise VerificationFailed(
                "transported block %d is not a member of the canonical family" % i
            )
        if next_copy[member] >= result.canonical[member[0]][1]:
            raise VerificationFailed(
                "block %d exceeds the multiplicity of its canonical member" % i
            )
        perm[j] = slots[member] + next_copy[member]
        next_copy[member] += 1
        block_mats.append(S.T.copy())

    cert = CodeCertificate(
        field=f,
        s=s,
        mat=tr.mat,
        frob=tr.frob,
        perm=perm,
        block_mats=block_mats,
        kept=kept,
        dropped=dropped,
        canonical_matrix=canonical_matrix,
    )
    cert.verify(gi)
    return cert


def canonize_code(field, matrix, s=1, options=None):
    """Canonize the code presented by a generator matrix: returns the
    family-level result together with the column-level certificate."""
    gi = _as_input(field, matrix, s)
    fam = addcode_to_family(field, gi, s)
    result = canonize(fam, options)
    return result, code_transporter(result, gi)


def _intersection_dim_and_point(f, A, B):
    """Dimension of the meet of two column spaces with full-column-rank
    bases, and the single spanning vector when that dimension is one."""
    M = np.concatenate([A, B], axis=1)
    ker = linalg.kernel_basis(f, M.T)
    if ker.shape[0] != 1:
        return ker.shape[0], None
    vec = linalg.matvec(f, A, ker[0, : A.shape[1]])
    return 1, Subspace(f, vec.reshape(-1, 1))


def check_point_meet_axioms(field, members, dim=None):
    """Verify that every two members meet in exactly a projective point and
    that no three members share one; raises AxiomViolation otherwise.

    Triple triviality is checked through an equivalent pairwise statement:
    given that all pairwise meets are points, three members share a point
    exactly when some member meets two others in the same point.
    """
    n = len(members)
    if dim is not None:
        for i, U in enumerate(members):
            if U.dim != dim:
                raise AxiomViolation(
                    "member %d has dimension %d, expected %d" % (i, U.dim, dim)
                )
    meet_point = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            mdim, pt = _intersection_dim_and_point(field, members[i].basis, members[j].basis)
            if mdim != 1:
                raise AxiomViolation(
                    "members %d and %d meet in dimension %d, expected 1" % (i, j, mdim)
                )
            meet_point[i][j] = meet_point[j][i] = pt.key()
    for i in range(n):
        seen = set()
        for j in range(n):
            if j == i:
                continue
            if meet_point[i][j] in seen:
                raise AxiomViolation(
                    "member %d meets two others in the same point, so some "
                    "three members share it" % i
                )
            seen.add(meet_point[i][j])


def gen_hyperoval(d):
    """The family of 2**d subspaces of F_2**(2d) whose members are the
    graphs of x -> x*x*a + x*a*a over the field with 2**d elements.

    Any two members meet in a projective point and any three meet
    trivially; both properties are re-checked on the constructed family and
    AxiomViolation is raised if either fails.
    """
    if not 2 <= d <= 8:
        raise ShapeError("d must be between 2 and 8")
    f2 = GF(2, 1)
    ext = GF(2, d)
    k = 2 * d

    def coords(value):
        return [(value >> bit) & 1 for bit in range(d)]

    members = []
    for a in ext.elements():
        basis = np.zeros((k, d), dtype=np.int64)
        a2 = ext.mul(a, a)
        for col in range(d):
            x = 1 << col  # the col-th power of the polynomial generator
            y = ext.add(ext.mul(ext.mul(x, x), a), ext.mul(x, a2))
            basis[:d, col] = coords(x)
            basis[d:, col] = coords(y)
        members.append(Subspace(f2, basis))

    check_point_meet_axioms(f2, members, dim=d)
    return RawFamily(f2, k, [members])
