"""Brute-force quantum-state oracles: bosonic modes and qubit registers."""
from .fock import (
    FockTwoMode,
    apply_mode_matrix,
    beam_splitter,
    beam_splitter_matrix,
    swap_station_state,
    transducer_output_state,
)
from .herald import (
    HeraldOutcome,
    PhotonClass,
    SwapBranch,
    ies_class_probabilities,
    ies_swap_branches,
    ies_swap_oracle,
)
from .qubits import PureState, bell_phi_plus, make_ghz, measure_out_qubit, teleport

__all__ = [
    "FockTwoMode",
    "HeraldOutcome",
    "PhotonClass",
    "PureState",
    "SwapBranch",
    "apply_mode_matrix",
    "beam_splitter",
    "beam_splitter_matrix",
    "bell_phi_plus",
    "ies_class_probabilities",
    "ies_swap_branches",
    "ies_swap_oracle",
    "make_ghz",
    "measure_out_qubit",
    "swap_station_state",
    "teleport",
    "transducer_output_state",
]
