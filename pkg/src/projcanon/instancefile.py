"""Reading and writing the plain-text instance file format.

An instance file declares a finite field and an ambient dimension, followed
by one of three bodies: an explicit sequence of sets of subspaces, a linear
code generator matrix, or an additive code generator matrix.  The grammar is
documented in docs/format.md.  Files are UTF-8 text; tokens are separated by
arbitrary whitespace and ``#`` starts a comment that runs to the end of the
line, so line breaks inside matrices are purely cosmetic.
"""

from dataclasses import dataclass

import numpy as np

from . import codes, linalg
from .errors import ParseError, ProjcanonError
from .field import GF
from .model import RawFamily, Subspace

FORMAT_VERSION = 1

_BODY_KINDS = ("subspaces", "lincode", "addcode")


class _TokenStream:
    """Whitespace-separated tokens annotated with their source line."""

    def __init__(self, text):
        self._toks = []
        for lineno, line in enumerate(text.splitlines(), 1):
            body = line.split("#", 1)[0]
            for tok in body.split():
                self._toks.append((lineno, tok))
        self._pos = 0
        self.last_line = self._toks[-1][0] if self._toks else 1

    def exhausted(self):
        return self._pos >= len(self._toks)

    def peek(self):
        if self.exhausted():
            return None
        return self._toks[self._pos][1]

    def trailing_line(self):
        return self._toks[self._pos][0]

    def take(self, what):
        if self.exhausted():
            raise ParseError("unexpected end of file while reading %s" % what, self.last_line)
        lineno, tok = self._toks[self._pos]
        self._pos += 1
        return lineno, tok

    def keyword(self, word):
        lineno, tok = self.take("the keyword '%s'" % word)
        if tok != word:
            raise ParseError("expected '%s', found '%s'" % (word, tok), lineno)
        return lineno

    def integer(self, what, low=None, high=None):
        lineno, tok = self.take(what)
        try:
            value = int(tok, 10)
        except ValueError:
            raise ParseError("expected an integer for %s, found '%s'" % (what, tok), lineno)
        if low is not None and value < low:
            raise ParseError("%s must be at least %d, found %d" % (what, low, value), lineno)
        if high is not None and value > high:
            raise ParseError("%s must be at most %d, found %d" % (what, high, value), lineno)
        return lineno, value

    def matrix(self, rows, cols, q, what):
        """Read rows*cols field-element indices, row major."""
        data = np.zeros((rows, cols), dtype=np.int64)
        for i in range(rows):
            for j in range(cols):
                _, data[i, j] = self.integer(
                    "%s entry (%d,%d)" % (what, i, j), 0, q - 1
                )
        return data


@dataclass
class InstanceData:
    """Parsed contents of an instance file."""

    field: object
    k: int
    kind: str  # one of "subspaces", "lincode", "addcode"
    sets: list = None  # kind == "subspaces": list of lists of Subspace
    matrix: object = None  # code kinds: the generator matrix (k x s*n)
    s: int = 1  # block width (1 for lincode)

    def family(self):
        """The RawFamily this file denotes."""
        if self.kind == "subspaces":
            return RawFamily(self.field, self.k, [list(m) for m in self.sets])
        if self.kind == "lincode":
            return codes.lincode_to_family(self.field, self.matrix)
        return codes.addcode_to_family(self.field, self.matrix, self.s)

    def content_key(self):
        """Hashable summary of the mathematical content (used for the config
        hash; comments and whitespace do not affect it)."""
        f = self.field
        head = (f.p, f.r, f.modulus, self.k, self.kind, self.s)
        if self.kind == "subspaces":
            body = tuple(
                tuple(U.key() for U in members) for members in self.sets
            )
        else:
            body = tuple(map(tuple, self.matrix.tolist()))
        return (head, body)


def loads(text):
    """Parse instance-file text into an InstanceData."""
    ts = _TokenStream(text)
    ts.keyword("projcanon")
    lineno, version = ts.integer("the format version", 1)
    if version != FORMAT_VERSION:
        raise ParseError(
            "unsupported format version %d (this build reads version %d)"
            % (version, FORMAT_VERSION),
            lineno,
        )

    field_line = ts.keyword("field")
    _, p = ts.integer("the field characteristic", 2)
    _, r = ts.integer("the field extension degree", 1)
    modulus = None
    if not ts.exhausted() and ts.peek().isdigit():
        coeffs = []
        for i in range(r + 1):
            _, c = ts.integer("modulus coefficient %d" % i, 0)
            coeffs.append(c)
        modulus = tuple(coeffs)
    try:
        field = GF(p, r, modulus=modulus)
    except ProjcanonError as exc:
        raise ParseError("bad field declaration: %s" % exc, field_line)
    except ValueError as exc:
        raise ParseError("bad field declaration: %s" % exc, field_line)

    ts.keyword("k")
    _, k = ts.integer("the ambient dimension k", 1)

    lineno, kind = ts.take("a body keyword (one of %s)" % ", ".join(_BODY_KINDS))
    if kind not in _BODY_KINDS:
        raise ParseError(
            "expected one of %s, found '%s'" % (", ".join(_BODY_KINDS), kind), lineno
        )

    if kind == "subspaces":
        _, m = ts.integer("the number of sets", 1)
        sets = []
        for si in range(m):
            ts.keyword("set")
            _, n_i = ts.integer("the member count of set %d" % si, 1)
            _, s_i = ts.integer("the column count of set %d" % si, 1)
            members = []
            for mi in range(n_i):
                mat = ts.matrix(k, s_i, field.q, "set %d member %d" % (si, mi))
                members.append(Subspace(field, mat))
            sets.append(members)
        data = InstanceData(field=field, k=k, kind="subspaces", sets=sets)
    else:
        lineno, k_body = ts.integer("the code dimension", 1)
        if k_body != k:
            raise ParseError(
                "code dimension %d does not match the header line 'k %d'"
                % (k_body, k),
                lineno,
            )
        _, n = ts.integer("the code block count", 1)
        if kind == "addcode":
            _, s = ts.integer("the block width", 1)
        else:
            s = 1
        lineno = ts.trailing_line() if not ts.exhausted() else ts.last_line
        mat = ts.matrix(k, s * n, field.q, "%s generator matrix" % kind)
        if linalg.mat_rank(field, mat) != k:
            raise ParseError(
                "%s generator matrix must have full row rank %d" % (kind, k), lineno
            )
        data = InstanceData(field=field, k=k, kind=kind, matrix=mat, s=s)

    if not ts.exhausted():
        raise ParseError(
            "unexpected trailing content '%s'" % ts.peek(), ts.trailing_line()
        )
    return data


def load(path):
    """Parse the instance file at ``path``."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def _matrix_lines(mat):
    return [" ".join(str(int(v)) for v in row) for row in np.asarray(mat)]


def dumps(data):
    """Serialize an InstanceData back to file text (comment-free)."""
    f = data.field
    out = ["projcanon %d" % FORMAT_VERSION]
    out.append(
        "field %d %d %s" % (f.p, f.r, " ".join(str(c) for c in f.modulus))
    )
    out.append("k %d" % data.k)
    if data.kind == "subspaces":
        out.append("subspaces %d" % len(data.sets))
        for members in data.sets:
            width = max(U.basis.shape[1] for U in members)
            out.append("set %d %d" % (len(members), width))
            for U in members:
                mat = U.basis
                if mat.shape[1] < width:  # pad columns so every member matches
                    pad = np.zeros((data.k, width - mat.shape[1]), dtype=np.int64)
                    mat = np.concatenate([mat, pad], axis=1)
                out.append("")
                out.extend(_matrix_lines(mat))
    elif data.kind == "lincode":
        out.append("lincode %d %d" % (data.k, data.matrix.shape[1]))
        out.append("")
        out.extend(_matrix_lines(data.matrix))
    else:
        out.append(
            "addcode %d %d %d" % (data.k, data.matrix.shape[1] // data.s, data.s)
        )
        out.append("")
        out.extend(_matrix_lines(data.matrix))
    return "\n".join(out) + "\n"


def from_family(family):
    """InstanceData in 'subspaces' form for a RawFamily."""
    return InstanceData(
        field=family.field,
        k=family.k,
        kind="subspaces",
        sets=[list(members) for members in family.sets],
    )
