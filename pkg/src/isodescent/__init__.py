"""Exact descent of finite isometry groups to odd positive characteristic.

The package builds cyclotomic base fields with a certified prime, balances
group-stable lattices against a nondegenerate form, and reduces the whole
group to the residue field with certificates that characteristic polynomials
survive and that the reduced form keeps the predicted kind and block shape.
A companion module packages boundary examples where the reduction provably
cannot stay faithful, together with finite certificates of that failure.
"""

__version__ = "0.1.0"

from .errors import (
    BundleFormatError,
    CharTwo,
    DegenerateForm,
    DimensionMismatch,
    GroupTooLarge,
    HypothesisViolated,
    InternalInconsistency,
    InvalidDescriptor,
    IsodescentError,
    KindMismatch,
    NegativeValuation,
    NoInvolution,
    NotContained,
    NotFiniteOrder,
    NotStable,
    PreconditionViolated,
    SearchSpaceTooLarge,
    Singular,
    SingularMatrix,
)
from .exactfield import (
    FieldDescriptor,
    FieldElement,
    apply_involution,
    make_descriptor,
    reduce,
    valuation,
    with_uniformizer,
)
from .lattice import (
    Lattice,
    dual_lattice,
    is_stable,
    lattice_intersect,
    lattice_sum,
    quotient_invariants,
    quotient_length,
    scale_lattice,
    snf,
    stabilize,
    standard_lattice,
)
from .forms import (
    AssembledForm,
    GramForm,
    ResidueForm,
    assemble_f0,
    classify_gram,
    normalize_scale,
    reduce_bar,
    reduce_tilde,
)
from .descent import (
    BalanceResult,
    DescentResult,
    GroupRep,
    balance,
    charpoly,
    descend,
    rigidity_check,
)
from .counterexamples import (
    NonexistenceCertificate,
    build_prop5_bundle,
    build_prop6_bundle,
    no_invariant_symmetric_form,
    verify_prop5,
    verify_prop6,
)

__all__ = [
    "__version__",
    "AssembledForm",
    "BalanceResult",
    "BundleFormatError",
    "CharTwo",
    "DegenerateForm",
    "DescentResult",
    "DimensionMismatch",
    "FieldDescriptor",
    "FieldElement",
    "GramForm",
    "GroupRep",
    "GroupTooLarge",
    "HypothesisViolated",
    "InternalInconsistency",
    "InvalidDescriptor",
    "IsodescentError",
    "KindMismatch",
    "Lattice",
    "NegativeValuation",
    "NoInvolution",
    "NonexistenceCertificate",
    "NotContained",
    "NotFiniteOrder",
    "NotStable",
    "PreconditionViolated",
    "ResidueForm",
    "SearchSpaceTooLarge",
    "Singular",
    "SingularMatrix",
    "apply_involution",
    "assemble_f0",
    "balance",
    "build_prop5_bundle",
    "build_prop6_bundle",
    "charpoly",
    "classify_gram",
    "descend",
    "dual_lattice",
    "is_stable",
    "lattice_intersect",
    "lattice_sum",
    "make_descriptor",
    "no_invariant_symmetric_form",
    "normalize_scale",
    "quotient_invariants",
    "quotient_length",
    "reduce",
    "reduce_bar",
    "reduce_tilde",
    "rigidity_check",
    "scale_lattice",
    "snf",
    "stabilize",
    "standard_lattice",
    "valuation",
    "verify_prop5",
    "verify_prop6",
    "with_uniformizer",
]
