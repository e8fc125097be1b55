"""Canonical forms of subspace configurations under semilinear transformations.

The package canonizes sequences of sets of subspaces of F_q^k under the
group of semilinear transformations (invertible matrix combined with a
field automorphism).  It returns a canonical representative, a transporter
element mapping the input to it, and generators plus the order of the
automorphism group, all certificate-checked.  Adapters for linear codes,
additive codes and network codes are included.
"""

from .errors import (
    ProjcanonError,
    ShapeError,
    ParseError,
    NonSpanning,
    EmptyInstance,
    CapacityExceeded,
    RankDeficient,
    VerificationFailed,
    AxiomViolation,
)
from .field import GF
from .model import (
    RawFamily,
    Semilinear,
    Subspace,
    normalize,
    subspace_distance,
)
from .search import CanonOptions, CanonResult, canonize, same_orbit
from .oracle import brute_same_orbit, brute_stab_order
from .codes import (
    CodeCertificate,
    addcode_to_family,
    canonize_code,
    code_transporter,
    gen_hyperoval,
    lincode_to_family,
    netcode_wrap,
)
from . import instancefile

__version__ = "0.1.0"

__all__ = [
    "GF",
    "Subspace",
    "Semilinear",
    "RawFamily",
    "normalize",
    "subspace_distance",
    "CanonOptions",
    "CanonResult",
    "canonize",
    "same_orbit",
    "brute_same_orbit",
    "brute_stab_order",
    "CodeCertificate",
    "lincode_to_family",
    "addcode_to_family",
    "netcode_wrap",
    "canonize_code",
    "code_transporter",
    "gen_hyperoval",
    "instancefile",
    "ProjcanonError",
    "ShapeError",
    "ParseError",
    "NonSpanning",
    "EmptyInstance",
    "CapacityExceeded",
    "RankDeficient",
    "VerificationFailed",
    "AxiomViolation",
    "__version__",
]
