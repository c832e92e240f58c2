"""Fiber links and the quantum erasure channel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from .errors import DomainError

DEFAULT_ATTENUATION_LENGTH_KM = 22.0  # 0.2 dB/km at 1550 nm


@dataclass(frozen=True)
class FiberLink:
    length_km: float = 0.0
    attenuation_length_km: float = DEFAULT_ATTENUATION_LENGTH_KM

    def __post_init__(self):
        if not self.length_km >= 0.0:
            raise DomainError(f"link length must be non-negative, got {self.length_km}")
        if not self.attenuation_length_km > 0.0:
            raise DomainError(
                f"attenuation length must be positive, got {self.attenuation_length_km}"
            )


def survival(link: FiberLink, fraction_of_length: float = 1.0) -> float:
    """Probability an optical photon survives ``fraction_of_length`` of the link."""
    if not 0.0 < fraction_of_length <= 1.0:
        raise DomainError(f"fraction of length must lie in (0, 1], got {fraction_of_length}")
    return math.exp(-fraction_of_length * link.length_km / link.attenuation_length_km)


class _Erased:
    """Flag state replacing an erased input."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ERASURE"


ERASURE = _Erased()


class Branch(NamedTuple):
    weight: float
    state: Any


@dataclass(frozen=True)
class MixedOutcome:
    """Weighted mixture of an intact state and the erasure flag."""

    branches: tuple[Branch, ...]

    @property
    def total_weight(self) -> float:
        return sum(b.weight for b in self.branches)

    def weight_of_erasure(self) -> float:
        return sum(b.weight for b in self.branches if b.state is ERASURE)

    def sample(self, rng: np.random.Generator):
        u = rng.random()
        acc = 0.0
        for b in self.branches:
            acc += b.weight
            if u < acc:
                return b.state
        return self.branches[-1].state

    def density_matrix(self) -> np.ndarray:
        """Block density operator ``p |psi><psi| (+) (1-p) |e><e|``.

        The erasure flag is an extra basis vector orthogonal to the state's space.
        """
        intact = [b for b in self.branches if b.state is not ERASURE]
        dim = len(np.asarray(intact[0].state.amplitudes).ravel()) if intact else 0
        rho = np.zeros((dim + 1, dim + 1), dtype=complex)
        for b in intact:
            v = np.asarray(b.state.amplitudes, dtype=complex).ravel()
            rho[:dim, :dim] += b.weight * np.outer(v, v.conj())
        rho[dim, dim] = self.weight_of_erasure()
        return rho


@dataclass(frozen=True)
class ErasureChannel:
    success_prob: float

    def __post_init__(self):
        if not 0.0 <= self.success_prob <= 1.0:
            raise DomainError(f"success probability must lie in [0, 1], got {self.success_prob}")

    @property
    def erasure_prob(self) -> float:
        return 1.0 - self.success_prob


def apply_erasure(ch: ErasureChannel, state) -> MixedOutcome:
    p = ch.success_prob
    return MixedOutcome((Branch(p, state), Branch(1.0 - p, ERASURE)))


def one_way_capacity(ch: ErasureChannel) -> float:
    return max(0.0, 2.0 * ch.success_prob - 1.0)


def two_way_capacity(ch: ErasureChannel) -> float:
    return ch.success_prob
