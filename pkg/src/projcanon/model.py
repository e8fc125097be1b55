"""Subspaces, semilinear maps, and input families.

A configuration is a sequence of sets of subspaces of F_q^k.  The acting
group combines an invertible k x k matrix A with a power of the Frobenius
automorphism: a subspace U is mapped to the column space of A * frob^a(U).
``normalize`` rewrites an arbitrary input family (multisets allowed) into
the disjoint, dimension-homogeneous shape the canonizer works on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .errors import EmptyInstance, NonSpanning, RankDeficient, ShapeError


class Subspace:
    """A subspace of F_q^k, stored as a reduced column echelon basis."""

    __slots__ = ("field", "basis", "_key")

    def __init__(self, field, mat, reduce=True):
        mat = np.asarray(mat, dtype=np.int64)
        if mat.ndim != 2:
            raise ShapeError("subspace basis must be a 2-d matrix")
        if reduce:
            R, _, rank = linalg.rcef(field, mat)
            mat = R[:, :rank].copy()
        self.field = field
        self.basis = mat
        self._key = None

    @property
    def ambient(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def key(self):
        if self._key is None:
            self._key = (self.ambient, self.dim, linalg.matrix_key(self.field, self.basis))
        return self._key

    def contains(self, v):
        aug = np.concatenate([self.basis, np.asarray(v).reshape(-1, 1)], axis=1)
        return linalg.mat_rank(self.field, aug) == self.dim

    def dual(self):
        """The subspace of all v with v^T u = 0 for every u in self."""
        K = linalg.kernel_basis(self.field, self.basis)
        return Subspace(self.field, K.T)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.field == other.field and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Subspace(dim %d of F^%d)" % (self.dim, self.ambient)


class Semilinear:
    """A semilinear map x -> A * frob^a(x) on F_q^k."""

    __slots__ = ("field", "mat", "frob", "_contra")

    def __init__(self, field, mat, frob=0, check=False):
        mat = np.asarray(mat, dtype=np.int64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError("semilinear matrix must be square")
        if check and linalg.mat_rank(field, mat) != mat.shape[0]:
            raise RankDeficient("semilinear matrix must be invertible")
        self.field = field
        self.mat = mat
        self.frob = frob % field.r
        self._contra = None

    @classmethod
    def identity(cls, field, k):
        return cls(field, linalg.identity(k))

    def compose(self, other):
        """self after other: (A,a)(B,b) = (A * frob^a(B), a + b)."""
        f = self.field
        return Semilinear(f, linalg.matmul(f, self.mat, f.afrob(other.mat, self.frob)), self.frob + other.frob)

    def inverse(self):
        f = self.field
        Ainv = linalg.inverse(f, self.mat)
        return Semilinear(f, f.afrob(Ainv, -self.frob), -self.frob)

    def contragredient(self):
        """The map (inverse-transpose, same frob) acting on hyperplane normals."""
        if self._contra is None:
            f = self.field
            self._contra = Semilinear(f, linalg.inverse(f, self.mat).T.copy(), self.frob)
        return self._contra

    def apply_mat(self, M):
        f = self.field
        return linalg.matmul(f, self.mat, f.afrob(M, self.frob))

    def apply_vec(self, v):
        return self.apply_mat(np.asarray(v).reshape(-1, 1)).reshape(-1)

    def apply_subspace(self, U):
        return Subspace(U.field, self.apply_mat(U.basis))

    def is_identity(self):
        return self.frob == 0 and (self.mat == linalg.identity(self.mat.shape[0])).all()

    def key(self):
        return (self.frob, linalg.matrix_key(self.field, self.mat))

    def __eq__(self, other):
        return isinstance(other, Semilinear) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Semilinear(frob=%d, mat=%r)" % (self.frob, self.mat.tolist())


@dataclass
class RawFamily:
    """User-facing input: a sequence of multisets of subspaces of F_q^k."""

    field: object
    k: int
    sets: list  # list of lists of Subspace

    def __post_init__(self):
        for s in self.sets:
            for U in s:
                if U.field != self.field:
                    raise ShapeError("subspace field differs from family field")
                if U.ambient != self.k:
                    raise ShapeError("subspace ambient dimension differs from family k")

    def apply(self, g):
        return RawFamily(self.field, self.k, [[g.apply_subspace(U) for U in s] for s in self.sets])


@dataclass(frozen=True)
class NormalSet:
    """One normalized set: distinct subspaces of equal dimension that all
    occurred with the same multiplicity in the originating input set."""

    dim: int
    multiplicity: int
    origin: int
    members: tuple  # of Subspace, sorted by key


@dataclass
class NormalizedInstance:
    field: object
    k: int
    sets: list  # of NormalSet
    dropped: list = dc_field(default_factory=list)  # (origin, dim, count)

    @property
    def n_positions(self):
        return sum(len(s.members) for s in self.sets)

    def shape_key(self):
        return (
            self.field.p,
            self.field.r,
            self.field.modulus,
            self.k,
            tuple((s.dim, s.multiplicity, len(s.members)) for s in self.sets),
        )

    def family_key(self):
        return tuple(
            (s.dim, s.multiplicity, tuple(U.key() for U in s.members)) for s in self.sets
        )

    def apply(self, g):
        sets = [
            NormalSet(s.dim, s.multiplicity, s.origin, tuple(sorted(g.apply_subspace(U) for U in s.members)))
            for s in self.sets
        ]
        return NormalizedInstance(self.field, self.k, sets, list(self.dropped))

    def dual(self):
        """Dual instance: every member replaced by its dual, order kept."""
        sets = [
            NormalSet(self.k - s.dim, s.multiplicity, s.origin, tuple(sorted(U.dual() for U in s.members)))
            for s in self.sets
        ]
        return NormalizedInstance(self.field, self.k, sets, list(self.dropped))


def normalize(raw):
    """Split multisets by multiplicity, group by dimension, drop trivial
    subspaces, check the union spans, and order the resulting sets."""
    if not isinstance(raw, RawFamily):
        raise ShapeError("normalize expects a RawFamily")
    k = raw.k
    produced = []
    dropped = []
    for origin, multiset in enumerate(raw.sets):
        counts = {}
        for U in multiset:
            counts.setdefault(U.key(), [U, 0])[1] += 1
        buckets = {}
        for U, c in counts.values():
            buckets.setdefault((U.dim, c), []).append(U)
        for (dim, mult), members in sorted(buckets.items()):
            if dim == 0 or dim == k:
                warnings.warn(
                    "dropping %d trivial subspace(s) of dimension %d from input set %d"
                    % (len(members), dim, origin)
                )
                dropped.append((origin, dim, len(members)))
                continue
            produced.append(NormalSet(dim, mult, origin, tuple(sorted(members))))
    if not produced:
        raise EmptyInstance("no nontrivial subspaces left after normalization")
    stacked = np.concatenate([U.basis for s in produced for U in s.members], axis=1)
    got = linalg.mat_rank(raw.field, stacked)
    if got != k:
        raise NonSpanning("input spans only a %d-dimensional subspace of F^%d" % (got, k))
    produced.sort(key=lambda s: (s.dim, s.multiplicity, s.origin))
    return NormalizedInstance(raw.field, k, produced, dropped)


def should_dualize(inst):
    """Heuristic: work on the dual when its total basis size is smaller."""
    primal = sum(s.dim * len(s.members) for s in inst.sets)
    dual = sum((inst.k - s.dim) * len(s.members) for s in inst.sets)
    return dual < primal


def subspace_distance(U, W):
    """dim(U + W) - dim(U intersect W)."""
    if U.field != W.field or U.ambient != W.ambient:
        raise ShapeError("subspaces live in different spaces")
    s = linalg.mat_rank(U.field, np.concatenate([U.basis, W.basis], axis=1))
    return 2 * s - U.dim - W.dim
