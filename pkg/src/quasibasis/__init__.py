"""Biorthogonal quasi bases, multiplier operators and their numerical verification.

Three example pairs are provided: two in sequence space (coefficient vectors
against an orthonormal basis) and one built from deformed Hermite functions in
L2(R).  The :mod:`~quasibasis.verify` module checks each analytic claim about
them at finite truncation; :mod:`~quasibasis.cli` exposes the checks on the
command line.
"""

__version__ = "0.1.0"

from .families import (  # noqa: E402
    DomainError,
    FamilyKind,
    GaussOp,
    SequenceFamily,
    apply_gauss_operator,
    example_pair,
    expansion_matrix,
    family,
    family_member,
    h_vector,
    reference_family,
)
from .multipliers import (  # noqa: E402
    Classification,
    LadderOperator,
    MetricOperator,
    MultiplierOperator,
    TailDiagnostics,
    formal_frame,
)
from .seqspace import CoeffVector, GaussPolyVector, ScalarSequence, inner, norm, seq_diagnostics  # noqa: E402
from .verify import Status, VerificationReport, run_suite  # noqa: E402

__all__ = [
    "__version__",
    "CoeffVector",
    "GaussPolyVector",
    "ScalarSequence",
    "inner",
    "norm",
    "seq_diagnostics",
    "FamilyKind",
    "SequenceFamily",
    "family",
    "family_member",
    "example_pair",
    "reference_family",
    "h_vector",
    "expansion_matrix",
    "GaussOp",
    "DomainError",
    "apply_gauss_operator",
    "Classification",
    "TailDiagnostics",
    "MultiplierOperator",
    "MetricOperator",
    "LadderOperator",
    "formal_frame",
    "Status",
    "VerificationReport",
    "run_suite",
]
