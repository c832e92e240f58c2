"""Closed-form models of the four distribution strategies.

Per-link ebit distribution probabilities, capacity bounds and the click
statistics of the swapping scheme's heralding station.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .channel import ErasureChannel, FiberLink, one_way_capacity, survival, two_way_capacity
from .errors import DomainError, NoSolutionError
from .transducer import C_TH, ReducedParams, binary_entropy, efficiency, efficiency_from


class StrategyKind(enum.Enum):
    DMD = "dmd"
    VanillaTMD = "vanilla"
    IE_TMD = "ie"
    IES_TMD = "ies"

    @property
    def is_teleported(self) -> bool:
        return self is not StrategyKind.DMD

    @classmethod
    def parse(cls, text: str) -> "StrategyKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {
            "dmd": cls.DMD,
            "vanilla": cls.VanillaTMD,
            "vanilla-tmd": cls.VanillaTMD,
            "vanillatmd": cls.VanillaTMD,
            "ie": cls.IE_TMD,
            "ie-tmd": cls.IE_TMD,
            "ies": cls.IES_TMD,
            "ies-tmd": cls.IES_TMD,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown strategy {text!r}") from None


class DetectorKind(enum.Enum):
    PhotonCounter = "counter"
    SinglePhotonDetector = "spd"


@dataclass(frozen=True)
class DetectorModel:
    kind: DetectorKind = DetectorKind.PhotonCounter
    efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise DomainError(f"detector efficiency must lie in [0, 1], got {self.efficiency}")


IDQ_GATED_EFFICIENCY = 0.25


@dataclass(frozen=True)
class LinkConfig:
    orchestrator: ReducedParams
    client: ReducedParams
    link: FiberLink = field(default_factory=FiberLink)

    @classmethod
    def symmetric(
        cls,
        cooperativity: float,
        zeta_o: float = 1.0,
        zeta_m: float = 1.0,
        length_km: float = 0.0,
        attenuation_length_km: float = 22.0,
    ) -> "LinkConfig":
        """Identical transducer hardware at both ends of the link."""
        hw = ReducedParams(cooperativity, zeta_o, zeta_m)
        return cls(hw, hw, FiberLink(length_km, attenuation_length_km))


def ebit_prob_vanilla(cfg: LinkConfig) -> float:
    return efficiency(cfg.orchestrator) * efficiency(cfg.client) * survival(cfg.link)


def intrinsic_efficiency(hw: ReducedParams) -> float:
    """Orchestrator efficiency with the cooperativity capped at ``C_TH``.

    Driving past ``C_TH`` only moves the generated pair away from maximal
    entanglement, so the pump is assumed backed off.
    """
    return efficiency_from(
        min(hw.cooperativity, C_TH), hw.extraction_optical, hw.extraction_microwave
    )


def ebit_prob_ie(cfg: LinkConfig) -> float:
    eta_up = intrinsic_efficiency(cfg.orchestrator)
    return binary_entropy(eta_up) * efficiency(cfg.client) * survival(cfg.link)


def ebit_prob_ies(eta: float, link: FiberLink) -> float:
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    return binary_entropy(eta) * ies_counter_click_prob(eta) * survival(link, 0.5)


def ebit_prob(kind: StrategyKind, cfg: LinkConfig) -> float:
    if kind in (StrategyKind.DMD, StrategyKind.VanillaTMD):
        return ebit_prob_vanilla(cfg)
    if kind is StrategyKind.IE_TMD:
        return ebit_prob_ie(cfg)
    if kind is StrategyKind.IES_TMD:
        return ebit_prob_ies(efficiency(cfg.orchestrator), cfg.link)
    raise ValueError(f"unknown strategy {kind!r}")


def dmd_state_success_prob(p_link: float, n_clients: int) -> float:
    """Chance that all ``n_clients`` ebits of a persistency-1 state arrive."""
    if n_clients < 1:
        raise DomainError(f"need at least one client, got {n_clients}")
    return p_link**n_clients


def capacity_bound(kind: StrategyKind, cfg: LinkConfig) -> float:
    ch = ErasureChannel(min(1.0, max(0.0, ebit_prob(kind, cfg))))
    if kind is StrategyKind.DMD:
        return one_way_capacity(ch)
    return two_way_capacity(ch)


def ies_counter_click_prob(eta: float) -> float:
    """Exactly one of the two transducers emits an optical photon."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    return 2.0 * (eta - eta * eta)


def ies_spd_click_prob(eta: float, det: DetectorModel | None = None, model: str = "independent") -> float:
    """Click probability of a non-number-resolving detector.

    ``model="independent"`` detects each arriving photon with probability
    ``det.efficiency``; ``model="scaled"`` multiplies the ideal click rate
    by the efficiency instead.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    eta_d = 1.0 if det is None else det.efficiency
    single = 2.0 * eta * (1.0 - eta)
    double = eta * eta
    if model == "independent":
        return single * eta_d + double * (1.0 - (1.0 - eta_d) ** 2)
    if model == "scaled":
        return eta_d * (single + double)
    raise ValueError(f"unknown detector model {model!r}")


def ies_herald_fidelity_fraction(eta: float) -> float:
    """Fraction of ideal-SPD clicks that herald a genuine entangled pair."""
    if not 0.0 < eta <= 1.0:
        raise DomainError("herald fraction is undefined without clicks (eta must be in (0, 1])")
    return 2.0 * (1.0 - eta) / (2.0 - eta)


def dmd_threshold_cooperativity(n_clients: int = 1, zeta_o: float = 1.0, zeta_m: float = 1.0,
                                length_km: float = 0.0, attenuation_length_km: float = 22.0,
                                tol: float = 1e-15) -> float:
    """Smallest symmetric C with ``p_link ** n = 1/2`` found by bisection on [0, 1].

    Raises ``NoSolutionError`` when the link can never reach that level.
    """
    def excess(c):
        cfg = LinkConfig.symmetric(c, zeta_o, zeta_m, length_km, attenuation_length_km)
        return dmd_state_success_prob(ebit_prob_vanilla(cfg), n_clients) - 0.5

    lo, hi = 0.0, 1.0
    if excess(hi) < 0.0:
        raise NoSolutionError("the DMD state success probability never exceeds 1/2")
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
