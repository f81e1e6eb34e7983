"""Noiseless-channel capacities with and without dense coding.

Density-matrix algebra, encoding unitary families, Holevo capacities,
the convex-roof correlation functional, and Monte-Carlo simulation of
the quantum and classical dense-coding protocols.
"""

from .capacity import (
    CapacityReport,
    average_state,
    dense_capacity,
    dense_capacity_via_ensemble,
    holevo_chi,
    mutual_information,
    normal_capacity,
    optimize_prior,
    relative_entropy,
)
from .encodings import (
    EncodingEnsemble,
    OperatorBasis,
    OrthonormalFrame,
    antipodal_pair,
    canonical_qubit_set,
    ensemble_from_json,
    ensemble_to_json,
    gellmann_basis,
    lift_ensemble,
    verify_orthogonality,
    weyl_set,
)
from .entanglement import (
    ConvexRoofResult,
    Decomposition,
    concurrence_oracle,
    convex_roof,
    decomposition_cost,
)
from .errors import (
    BlochNormExceeded,
    DenseCapError,
    DimensionMismatch,
    DimensionUnsupported,
    FrameNotOrthonormal,
    InvalidDimension,
    InvalidState,
    InvalidTrials,
    NoStates,
    ParseError,
    RankTooLarge,
    SplitMismatch,
)
from .protosim import (
    BellDecoder,
    ClassicalJointState,
    ProtocolTrace,
    SingleParticleDecoder,
    empirical_mutual_information,
    run_classical_dense,
    run_quantum_dense,
)
from .qstate import (
    BipartiteState,
    BlochVector,
    DensityMatrix,
    bell_state,
    correlation_decompose,
    correlation_reconstruct,
    from_bloch,
    max_entangled_state,
    partial_trace,
    pure_state,
    state_from_json,
    state_to_json,
    tensor,
    to_bloch,
    von_neumann_entropy,
    werner_state,
)

__all__ = [
    "BellDecoder",
    "BipartiteState",
    "BlochNormExceeded",
    "BlochVector",
    "CapacityReport",
    "ClassicalJointState",
    "ConvexRoofResult",
    "Decomposition",
    "DenseCapError",
    "DensityMatrix",
    "DimensionMismatch",
    "DimensionUnsupported",
    "EncodingEnsemble",
    "FrameNotOrthonormal",
    "InvalidDimension",
    "InvalidState",
    "InvalidTrials",
    "NoStates",
    "OperatorBasis",
    "OrthonormalFrame",
    "ParseError",
    "ProtocolTrace",
    "RankTooLarge",
    "SingleParticleDecoder",
    "SplitMismatch",
    "antipodal_pair",
    "average_state",
    "bell_state",
    "canonical_qubit_set",
    "concurrence_oracle",
    "convex_roof",
    "correlation_decompose",
    "correlation_reconstruct",
    "decomposition_cost",
    "dense_capacity",
    "dense_capacity_via_ensemble",
    "empirical_mutual_information",
    "ensemble_from_json",
    "ensemble_to_json",
    "from_bloch",
    "gellmann_basis",
    "holevo_chi",
    "lift_ensemble",
    "max_entangled_state",
    "mutual_information",
    "normal_capacity",
    "optimize_prior",
    "partial_trace",
    "pure_state",
    "relative_entropy",
    "run_classical_dense",
    "run_quantum_dense",
    "state_from_json",
    "state_to_json",
    "tensor",
    "to_bloch",
    "verify_orthogonality",
    "von_neumann_entropy",
    "weyl_set",
    "werner_state",
]

__version__ = "0.1.0"
