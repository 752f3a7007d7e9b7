"""Two-qubit gate compiler with interaction-time optimization.

Pipeline: factor a 4x4 unitary into one-qubit gates around a minimal
Ising interaction (cartan_decompose), optionally premultiply a basis
permutation that shortens the interaction time (warp_search), compile
the factorization to a hard-pulse program (compile_sequence), and
certify the program by exact simulation (simulate_sequence) with
stick-spectrum readout prediction (predict_spectrum).
"""

from .errors import (
    FactorizationFailure,
    NegativeDuration,
    NonCanonicalCoordinates,
    NotLocal,
    NotSpecialUnitary,
    NotUnitary,
    OutOfRangeAlpha,
    WarpgateError,
)
from .grover import TargetFile, all_targets, grover_gate
from .kak import (
    CartanCoordinates,
    KakDecomposition,
    LocalGatePair,
    MagicSpectrum,
    cartan_decompose,
    cartan_matrix,
    canonical_coordinates,
    from_magic,
    is_canonical,
    kron_factorize,
    magic_spectrum,
    theta_to_alpha,
    to_magic,
    weyl_canonicalize,
)
from .pulses import (
    HamiltonianParams,
    Idle,
    PulseSequence,
    Rot,
    compile_sequence,
    conjugate_coupling,
    emit_table,
    euler_xyx,
    inplane_pair,
    parse_sequence,
    serialize_sequence,
)
from .simulator import (
    EquivalenceReport,
    ReadoutConfig,
    SpectralLine,
    StateVector4,
    StickSpectrum,
    apply,
    basis_state,
    equivalence_report,
    predict_spectrum,
    serialize_spectrum,
    simulate_sequence,
)
from .su4 import (
    AXIS_NAMES,
    I2,
    I4,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    TOL_EQUIV,
    TOL_UNITARY,
    SpecialUnitary4,
    coupling_evolution,
    ensure_special,
    ensure_unitary,
    kron,
    pauli_rotation,
    phase_distance,
    project_su4,
    unitarity_defect,
)
from .warp import (
    Duration,
    WarpGate,
    WarpSearchRecord,
    WarpSearchResult,
    coupling_time,
    decode_output,
    full_permutation_catalog,
    snap_quarter,
    warp_catalog,
    warp_search,
)

__version__ = "0.1.0"

__all__ = [
    "AXIS_NAMES",
    "CartanCoordinates",
    "Duration",
    "EquivalenceReport",
    "FactorizationFailure",
    "HamiltonianParams",
    "I2",
    "I4",
    "Idle",
    "KakDecomposition",
    "LocalGatePair",
    "MagicSpectrum",
    "NegativeDuration",
    "NonCanonicalCoordinates",
    "NotLocal",
    "NotSpecialUnitary",
    "NotUnitary",
    "OutOfRangeAlpha",
    "PAULIS",
    "PulseSequence",
    "ReadoutConfig",
    "Rot",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SpecialUnitary4",
    "SpectralLine",
    "StateVector4",
    "StickSpectrum",
    "TOL_EQUIV",
    "TOL_UNITARY",
    "TargetFile",
    "WarpGate",
    "WarpSearchRecord",
    "WarpSearchResult",
    "WarpgateError",
    "all_targets",
    "apply",
    "basis_state",
    "canonical_coordinates",
    "cartan_decompose",
    "cartan_matrix",
    "compile_sequence",
    "conjugate_coupling",
    "coupling_evolution",
    "coupling_time",
    "decode_output",
    "emit_table",
    "ensure_special",
    "ensure_unitary",
    "equivalence_report",
    "euler_xyx",
    "from_magic",
    "full_permutation_catalog",
    "grover_gate",
    "inplane_pair",
    "is_canonical",
    "kron",
    "kron_factorize",
    "magic_spectrum",
    "parse_sequence",
    "pauli_rotation",
    "phase_distance",
    "predict_spectrum",
    "project_su4",
    "serialize_sequence",
    "serialize_spectrum",
    "simulate_sequence",
    "snap_quarter",
    "theta_to_alpha",
    "to_magic",
    "unitarity_defect",
    "warp_catalog",
    "warp_search",
    "weyl_canonicalize",
]
