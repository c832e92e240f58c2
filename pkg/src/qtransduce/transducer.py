"""Electro-optical transducer model.

All rates share one unit (Hz by convention); only their ratios enter the
results, so any consistent unit works.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, NoSolutionError, UnsupportedRegimeError

# Cooperativity at which the conversion efficiency equals 1/2 (lower branch).
C_TH = 3.0 - 2.0 * math.sqrt(2.0)
# Cooperativity at which the squared efficiency equals 1/2 (lower branch).
C_DMD = 2.0 * math.sqrt(2.0) - 2.0 * math.sqrt(2.0 - math.sqrt(2.0)) - 1.0


@dataclass(frozen=True)
class PhysicalParams:
    """Hardware parameters of one transducer on resonance."""

    coupling_rate_optical_ext: float
    coupling_rate_microwave_ext: float
    total_loss_optical: float
    total_loss_microwave: float
    electro_optic_coupling: float
    mean_pump_photons: float

    def __post_init__(self):
        pairs = (
            ("optical", self.coupling_rate_optical_ext, self.total_loss_optical),
            ("microwave", self.coupling_rate_microwave_ext, self.total_loss_microwave),
        )
        for name, ext, tot in pairs:
            if not (math.isfinite(ext) and math.isfinite(tot)):
                raise DomainError(f"{name} rates must be finite")
            if tot <= 0.0:
                raise DomainError(f"{name} total loss rate must be positive")
            if ext < 0.0 or ext > tot:
                raise DomainError(
                    f"{name} external coupling must lie in [0, total loss], got {ext} vs {tot}"
                )
        if self.electro_optic_coupling < 0.0 or not math.isfinite(self.electro_optic_coupling):
            raise DomainError("electro-optic coupling must be finite and non-negative")
        if self.mean_pump_photons < 0.0 or not math.isfinite(self.mean_pump_photons):
            raise DomainError("mean pump photon number must be finite and non-negative")

    @property
    def internal_loss_optical(self) -> float:
        return self.total_loss_optical - self.coupling_rate_optical_ext

    @property
    def internal_loss_microwave(self) -> float:
        return self.total_loss_microwave - self.coupling_rate_microwave_ext

    @classmethod
    def from_reduced(
        cls,
        cooperativity: float,
        zeta_o: float = 1.0,
        zeta_m: float = 1.0,
        total_loss_optical: float = 1.0,
        total_loss_microwave: float = 1.0,
        electro_optic_coupling: float = 1.0,
    ) -> "PhysicalParams":
        """Build hardware parameters that reduce to the given (C, zeta_o, zeta_m)."""
        pump = cooperativity * total_loss_optical * total_loss_microwave / (
            4.0 * electro_optic_coupling**2
        )
        return cls(
            coupling_rate_optical_ext=zeta_o * total_loss_optical,
            coupling_rate_microwave_ext=zeta_m * total_loss_microwave,
            total_loss_optical=total_loss_optical,
            total_loss_microwave=total_loss_microwave,
            electro_optic_coupling=electro_optic_coupling,
            mean_pump_photons=pump,
        )


@dataclass(frozen=True)
class ReducedParams:
    """Cooperativity and extraction ratios; all the efficiency depends on."""

    cooperativity: float
    extraction_optical: float = 1.0
    extraction_microwave: float = 1.0

    def __post_init__(self):
        if not (self.cooperativity >= 0.0) or math.isnan(self.cooperativity):
            raise DomainError(f"cooperativity must be non-negative, got {self.cooperativity}")
        for name, z in (("optical", self.extraction_optical), ("microwave", self.extraction_microwave)):
            if not (0.0 <= z <= 1.0):
                raise DomainError(f"{name} extraction ratio must lie in [0, 1], got {z}")

    @property
    def efficiency(self) -> float:
        return efficiency(self)


def efficiency_physical(p: PhysicalParams) -> float:
    """Up-conversion efficiency straight from the hardware rates."""
    drive = p.mean_pump_photons * p.electro_optic_coupling**2
    denom = (p.total_loss_optical * p.total_loss_microwave / 4.0 + drive) ** 2
    return p.coupling_rate_optical_ext * p.coupling_rate_microwave_ext * drive / denom


def reduce(p: PhysicalParams) -> ReducedParams:
    C = 4.0 * p.mean_pump_photons * p.electro_optic_coupling**2 / (
        p.total_loss_optical * p.total_loss_microwave
    )
    return ReducedParams(
        cooperativity=C,
        extraction_optical=p.coupling_rate_optical_ext / p.total_loss_optical,
        extraction_microwave=p.coupling_rate_microwave_ext / p.total_loss_microwave,
    )


def efficiency_from(cooperativity, zeta_o=1.0, zeta_m=1.0):
    """Vectorised conversion efficiency ``4 zeta_o zeta_m C / (1 + C)^2``.

    Up- and down-conversion share the same expression. Accepts scalars or
    arrays; no validation is performed here.
    """
    C = np.asarray(cooperativity, dtype=float)
    out = 4.0 * zeta_o * zeta_m * C / (1.0 + C) ** 2
    return float(out) if out.ndim == 0 else out


def efficiency(r: ReducedParams) -> float:
    return efficiency_from(r.cooperativity, r.extraction_optical, r.extraction_microwave)


def cooperativity_for_efficiency(
    target: float,
    zeta_o: float = 1.0,
    zeta_m: float = 1.0,
    branch: Literal["lower", "upper"] = "lower",
) -> float:
    """Invert the efficiency curve in closed form.

    Solves ``4 zeta_o zeta_m C = target (1 + C)^2``. The lower root lies in
    [0, 1] and the upper one in [1, inf); the two roots multiply to 1.
    """
    if branch not in ("lower", "upper"):
        raise ValueError(f"branch must be 'lower' or 'upper', got {branch!r}")
    peak = zeta_o * zeta_m
    if not target > 0.0:
        raise DomainError(f"target efficiency must be positive, got {target}")
    if target > peak:
        raise NoSolutionError(
            f"target efficiency {target} exceeds the attainable maximum {peak}"
        )
    # C^2 + 2(1 - 2k)C + 1 = 0 with k = peak/target
    k = peak / target
    b = 2.0 * k - 1.0
    disc = b * b - 1.0
    root = math.sqrt(max(disc, 0.0))
    # b - root suffers cancellation for small targets; use the product of roots.
    upper = b + root
    lower = 1.0 / upper
    return lower if branch == "lower" else upper


def binary_entropy(eta):
    """Binary entropy in bits, with ``0 log 0 = 0``.

    Works on scalars and arrays.
    """
    x = np.asarray(eta, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)) or np.any(np.isnan(x)):
        raise DomainError("entropy argument must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    h = np.where((x == 0.0) | (x == 1.0), 0.0, h)
    return float(h) if h.ndim == 0 else h


def scattering_matrix(p: PhysicalParams) -> np.ndarray:
    """Steady-state input-output matrix at zero detuning.

    Rows and columns are ordered (optical, microwave). Only defined for
    lossless cavities (unit extraction ratios).
    """
    r = reduce(p)
    if r.extraction_optical != 1.0 or r.extraction_microwave != 1.0:
        raise UnsupportedRegimeError(
            "scattering matrix is only modelled for unit extraction ratios"
        )
    gg = p.total_loss_optical * p.total_loss_microwave
    drive = p.electro_optic_coupling**2 * p.mean_pump_photons
    d = gg / 4.0 + drive
    diag = (gg / 4.0 - drive) / d
    off = 1j * p.electro_optic_coupling * math.sqrt(p.mean_pump_photons * gg) / d
    return np.array([[diag, off], [off, diag]], dtype=complex)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits of a Hermitian density matrix."""
    w = np.linalg.eigvalsh(np.asarray(rho))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def distillable_entanglement(eta: float) -> float:
    """Entanglement of distillation of the transducer output state.

    Equals the entropy of the single-mode reduced state ``diag(eta, 1-eta)``.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    return von_neumann_entropy(np.diag([eta, 1.0 - eta]))
