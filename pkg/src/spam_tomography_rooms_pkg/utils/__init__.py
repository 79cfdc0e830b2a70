from .choi import (
    ChoiState,
    PauliTransferMatrix,
    apply_choi,
    choi_from_unitary,
    choi_to_ptm,
    partial_trace_b,
    pauli_expansion,
    pauli_reconstruct,
    ptm_to_choi,
    random_choi,
    random_unitary,
)
from .errors import (
    InvalidParameterError,
    InvalidStateError,
    RankDeficientError,
    ShapeMismatchError,
    StorageError,
    TomographyError,
    UnphysicalProcessError,
)
from .methods import Method
from .qubit import (
    BlochVector,
    DensityMatrix,
    Effect,
    EvolutionParams,
    born_probability,
    evolve_state,
    lindblad_integrate,
    state_fidelity,
)
from .seeding import derive_seed

__all__ = [
    "BlochVector",
    "ChoiState",
    "DensityMatrix",
    "Effect",
    "EvolutionParams",
    "InvalidParameterError",
    "InvalidStateError",
    "Method",
    "PauliTransferMatrix",
    "RankDeficientError",
    "ShapeMismatchError",
    "StorageError",
    "TomographyError",
    "UnphysicalProcessError",
    "apply_choi",
    "born_probability",
    "choi_from_unitary",
    "choi_to_ptm",
    "derive_seed",
    "evolve_state",
    "lindblad_integrate",
    "partial_trace_b",
    "pauli_expansion",
    "pauli_reconstruct",
    "ptm_to_choi",
    "random_choi",
    "random_unitary",
    "state_fidelity",
]
