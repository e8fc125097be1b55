"""Exception types shared across the package."""


class ProjcanonError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(ProjcanonError):
    """Matrix/vector dimensions or field mismatch."""


class ParseError(ProjcanonError):
    """Malformed instance file."""

    def __init__(self, msg, lineno=None):
        if lineno is not None:
            msg = "line %d: %s" % (lineno, msg)
        super().__init__(msg)
        self.lineno = lineno


class NonSpanning(ProjcanonError):
    """The union of the input subspaces does not span the ambient space."""


class EmptyInstance(ProjcanonError):
    """Nothing is left to canonize after normalization."""


class CapacityExceeded(ProjcanonError):
    """A configured size or node budget was exceeded."""

    def __init__(self, msg, count=None):
        super().__init__(msg)
        self.count = count


class RankDeficient(ProjcanonError):
    """A matrix that must have full rank does not."""


class VerificationFailed(ProjcanonError):
    """A self-check of a computed certificate failed."""


class AxiomViolation(ProjcanonError):
    """A constructed combinatorial object failed its defining axioms."""
