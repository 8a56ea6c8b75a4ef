"""Decoherence, entanglement, and CHSH security analysis for the Ekert91 protocol.

The package follows one pipeline: build a noisy two-qubit state (a singlet
pushed through a one-sided Kraus channel, or its closed form), quantify its
entanglement (Wootters concurrence) and nonlocality (CHSH, in-plane and
optimal), and simulate the entanglement-based key protocol on top of it.
"""

from .bell import (
    CANONICAL_CHSH,
    ChshConfig,
    CorrelationTensor,
    MeasurementDirection,
    chsh_s,
    correlation,
    correlation_tensor,
    critical_error_rate,
    joint_probabilities,
    optimal_s,
)
from .channels import (
    ChannelFamily,
    CptpReport,
    KrausChannel,
    apply_one_sided,
    apply_single_qubit,
    bit_flip,
    depolarizing,
    generalized_amplitude_damping,
    validate_cptp,
)
from .entanglement import (
    ConcurrenceSpectrum,
    concurrence,
    concurrence_dp_closed,
    concurrence_gad_closed,
    gad_disentanglement_threshold,
)
from .linalg import allclose, hermitian_eigenvalues, matrix_sqrt_psd, tensor
from .protocol import (
    E91_ALICE_ANGLES,
    E91_BOB_ANGLES,
    ProtocolConfig,
    ProtocolReport,
    Verdict,
    estimate_s,
    run_ekert91,
    sample_pair_outcome,
)
from .states import (
    KeyStatistics,
    TwoQubitState,
    key_statistics,
    maximally_mixed,
    noisy_singlet_bitflip,
    noisy_singlet_depolarizing,
    noisy_singlet_gad,
    singlet,
)

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_CHSH",
    "ChannelFamily",
    "ChshConfig",
    "ConcurrenceSpectrum",
    "CorrelationTensor",
    "CptpReport",
    "E91_ALICE_ANGLES",
    "E91_BOB_ANGLES",
    "KeyStatistics",
    "KrausChannel",
    "MeasurementDirection",
    "ProtocolConfig",
    "ProtocolReport",
    "TwoQubitState",
    "Verdict",
    "allclose",
    "apply_one_sided",
    "apply_single_qubit",
    "bit_flip",
    "chsh_s",
    "concurrence",
    "concurrence_dp_closed",
    "concurrence_gad_closed",
    "correlation",
    "correlation_tensor",
    "critical_error_rate",
    "depolarizing",
    "estimate_s",
    "gad_disentanglement_threshold",
    "generalized_amplitude_damping",
    "hermitian_eigenvalues",
    "joint_probabilities",
    "key_statistics",
    "matrix_sqrt_psd",
    "maximally_mixed",
    "noisy_singlet_bitflip",
    "noisy_singlet_depolarizing",
    "noisy_singlet_gad",
    "optimal_s",
    "run_ekert91",
    "sample_pair_outcome",
    "singlet",
    "tensor",
    "validate_cptp",
]
