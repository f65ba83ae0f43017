"""Unital completely positive maps on M_n: operational convexity and extremality."""

from .channels import (
    ChannelFlags,
    ChoiMatrix,
    KrausMap,
    NotCompletelyPositiveError,
    ad,
    apply,
    canonicalize,
    classify,
    compose,
    identity_map,
    kraus_from_choi,
    map_distance,
    size,
    to_choi,
)
from .extremality import (
    ExtremalityCertificate,
    PreconditionError,
    TheoremAnomaly,
    certify_thm37,
    kadison_schwarz_gap,
    search_refuting_witness,
    usual_extreme_check,
)
from .matrixcore import (
    DEFAULT_TOL,
    SpectralDecomposition,
    frobenius_distance,
    hermitian_eig,
    is_psd,
    kron,
    matrix_units,
    random_unitary,
)
from .opconvex import (
    DecompositionWitness,
    WitnessVerdict,
    op_convex_combine,
    scalar_witness,
    validate_witness,
)
from .partitions import (
    OperationalPartition,
    PartitionReport,
    bridge_coefficients,
    verify_cs,
    verify_fop,
    verify_lindblad,
)

__version__ = "0.1.0"
