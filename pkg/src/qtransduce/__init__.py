"""Microwave-optical transduction models for multipartite entanglement distribution."""
from .channel import (
    ERASURE,
    ErasureChannel,
    FiberLink,
    MixedOutcome,
    apply_erasure,
    one_way_capacity,
    survival,
    two_way_capacity,
)
from .strategies import (
    DetectorKind,
    DetectorModel,
    LinkConfig,
    StrategyKind,
    capacity_bound,
    dmd_state_success_prob,
    dmd_threshold_cooperativity,
    ebit_prob,
    ebit_prob_ie,
    ebit_prob_ies,
    ebit_prob_vanilla,
    ies_counter_click_prob,
    ies_herald_fidelity_fraction,
    ies_spd_click_prob,
)
from .transducer import (
    C_DMD,
    C_TH,
    PhysicalParams,
    ReducedParams,
    binary_entropy,
    cooperativity_for_efficiency,
    distillable_entanglement,
    efficiency,
    efficiency_from,
    efficiency_physical,
    reduce,
    scattering_matrix,
)

__version__ = "0.1.0"
