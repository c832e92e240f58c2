"""Exact and sampled statistics of the swapping-style heralding station."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..strategies import DetectorKind, DetectorModel
from .fock import DEFAULT_CUTOFF, FockTwoMode, swap_station_state

_ZERO = 1e-14


class PhotonClass(enum.Enum):
    NONE = "none"
    SINGLE = "single"
    DOUBLE = "double"


@dataclass(frozen=True)
class SwapBranch:
    """One photon-number pattern at the two station detectors."""

    counts: tuple[int, int]
    probability: float
    microwave_state: FockTwoMode  # modes (orchestrator, client)

    @property
    def photon_class(self) -> PhotonClass:
        total = sum(self.counts)
        return (PhotonClass.NONE, PhotonClass.SINGLE, PhotonClass.DOUBLE)[min(total, 2)]


@dataclass(frozen=True)
class HeraldOutcome:
    photon_class: PhotonClass
    counts: tuple[int, int]
    detected: tuple[int, int]
    clicked: bool
    heralded: bool
    microwave_state: FockTwoMode

    @property
    def genuine(self) -> bool:
        """Heralded and actually sharing one microwave excitation."""
        return self.heralded and self.photon_class is PhotonClass.SINGLE


def ies_swap_branches(eta_o: float, eta_c: float, cutoff: int = DEFAULT_CUTOFF) -> list[SwapBranch]:
    """Project the station onto every detector photon-number pattern.

    Probabilities are exact (no sampling); zero-probability patterns are dropped.
    """
    psi = swap_station_state(eta_o, eta_c, cutoff)
    dim = cutoff + 1
    branches = []
    for k1, k2 in product(range(dim), repeat=2):
        slice_ = psi[:, k1, :, k2]
        prob = float(np.sum(np.abs(slice_) ** 2))
        if prob < _ZERO:
            continue
        state = FockTwoMode(slice_ / math.sqrt(prob), labels=("microwave@orchestrator", "microwave@client"))
        branches.append(SwapBranch((k1, k2), prob, state))
    return branches


def ies_class_probabilities(eta_o: float, eta_c: float, cutoff: int = DEFAULT_CUTOFF) -> dict[PhotonClass, float]:
    out = {c: 0.0 for c in PhotonClass}
    for b in ies_swap_branches(eta_o, eta_c, cutoff):
        out[b.photon_class] += b.probability
    return out


def ies_swap_oracle(
    eta_o: float,
    eta_c: float,
    detector: DetectorModel | None = None,
    rng_seed: int = 0,
    cutoff: int = DEFAULT_CUTOFF,
) -> HeraldOutcome:
    """Sample one heralding attempt.

    Each photon reaching a detector is registered with the detector
    efficiency. A photon counter heralds on exactly one registered photon,
    a plain single-photon detector on any click.
    """
    detector = detector or DetectorModel()
    rng = np.random.default_rng(rng_seed)
    branches = ies_swap_branches(eta_o, eta_c, cutoff)
    weights = np.array([b.probability for b in branches])
    branch = branches[rng.choice(len(branches), p=weights / weights.sum())]
    detected = tuple(int(rng.binomial(k, detector.efficiency)) for k in branch.counts)
    clicked = sum(detected) > 0
    if detector.kind is DetectorKind.PhotonCounter:
        heralded = sum(detected) == 1
    else:
        heralded = clicked
    return HeraldOutcome(
        photon_class=branch.photon_class,
        counts=branch.counts,
        detected=detected,
        clicked=clicked,
        heralded=heralded,
        microwave_state=branch.microwave_state,
    )
