"""Two-mode (and four-mode) bosonic Fock-space engine.

Linear optics acts on creation operators, ``a_i^dag -> sum_j M[j, i] a_j^dag``,
where ``M`` maps input annihilation operators to output ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import CutoffError, DomainError
from ..transducer import von_neumann_entropy

DEFAULT_CUTOFF = 2
_ZERO = 1e-14


@dataclass(frozen=True, eq=False)
class FockTwoMode:
    """Pure state of two bosonic modes, amplitudes indexed ``[n_a, n_b]``."""

    amplitudes: np.ndarray
    labels: tuple[str, str] = ("optical", "microwave")

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise ValueError("amplitudes must be a square (cutoff+1, cutoff+1) array")
        if amps.shape[0] < 3:
            raise ValueError("cutoff must be at least 2")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalised (norm^2 = {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    @classmethod
    def basis(cls, n_a: int, n_b: int, cutoff: int = DEFAULT_CUTOFF, labels=("optical", "microwave")):
        if max(n_a, n_b) > cutoff:
            raise CutoffError(f"|{n_a},{n_b}> does not fit under cutoff {cutoff}")
        amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        amps[n_a, n_b] = 1.0
        return cls(amps, tuple(labels))

    def amplitude(self, n_a: int, n_b: int) -> complex:
        if max(n_a, n_b) > self.cutoff:
            return 0j
        return complex(self.amplitudes[n_a, n_b])

    def photon_number_distribution(self) -> dict[int, float]:
        """Probability of each total photon number."""
        probs: dict[int, float] = {}
        p = np.abs(self.amplitudes) ** 2
        for (i, j), w in np.ndenumerate(p):
            if w > 0:
                probs[i + j] = probs.get(i + j, 0.0) + float(w)
        return probs

    def reduced_density_matrix(self, mode: int = 0) -> np.ndarray:
        A = self.amplitudes if mode == 0 else self.amplitudes.T
        return A @ A.conj().T

    def entanglement_entropy(self) -> float:
        return von_neumann_entropy(self.reduced_density_matrix(0))

    def fidelity(self, other: "FockTwoMode") -> float:
        a, b = _pad(self.amplitudes, other.amplitudes)
        return float(abs(np.vdot(a, b)) ** 2)


def _pad(a: np.ndarray, b: np.ndarray):
    n = max(a.shape[0], b.shape[0])
    out = []
    for x in (a, b):
        y = np.zeros((n,) * x.ndim, dtype=complex)
        y[tuple(slice(0, s) for s in x.shape)] = x
        out.append(y)
    return out


def _transform_pair(amps: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Apply a 2x2 mode transformation to a two-mode amplitude array."""
    dim = amps.shape[0]
    cutoff = dim - 1
    out = np.zeros_like(amps, dtype=complex)
    for n, m in product(range(dim), repeat=2):
        c = amps[n, m]
        if abs(c) < _ZERO:
            continue
        c = c / math.sqrt(math.factorial(n) * math.factorial(m))
        for k in range(n + 1):
            ck = math.comb(n, k) * M[0, 0] ** k * M[1, 0] ** (n - k)
            for l in range(m + 1):
                coef = c * ck * math.comb(m, l) * M[0, 1] ** l * M[1, 1] ** (m - l)
                if abs(coef) < _ZERO:
                    continue
                na, nb = k + l, n + m - k - l
                if na > cutoff or nb > cutoff:
                    raise CutoffError(
                        f"output |{na},{nb}> exceeds cutoff {cutoff}; raise the cutoff"
                    )
                out[na, nb] += coef * math.sqrt(math.factorial(na) * math.factorial(nb))
    return out


def beam_splitter_matrix(T: float) -> np.ndarray:
    """Lossless beam splitter ``[[sqrt(R), i sqrt(T)], [i sqrt(T), sqrt(R)]]``."""
    if not 0.0 <= T <= 1.0:
        raise DomainError(f"transmission must lie in [0, 1], got {T}")
    r, t = math.sqrt(1.0 - T), math.sqrt(T)
    return np.array([[r, 1j * t], [1j * t, r]], dtype=complex)


def apply_mode_matrix(state: FockTwoMode, M: np.ndarray) -> FockTwoMode:
    """Evolve ``state`` through the linear input-output relation ``M``."""
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise ValueError("mode matrix must be 2x2")
    return FockTwoMode(_transform_pair(state.amplitudes, M), state.labels)


def beam_splitter(state: FockTwoMode, T: float) -> FockTwoMode:
    return apply_mode_matrix(state, beam_splitter_matrix(T))


def transducer_output_state(eta: float, cutoff: int = DEFAULT_CUTOFF) -> FockTwoMode:
    """Output of a lossless transducer fed one microwave photon.

    Modes are ordered (microwave, optical); the optical occupation is the
    up-converted photon, found with probability ``eta``.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    inp = FockTwoMode.basis(1, 0, cutoff, labels=("microwave", "optical"))
    return beam_splitter(inp, eta)


# -- swapping station ------------------------------------------------------

# Four-mode index order for the heralding oracle.
MW_O, OPT_O, MW_C, OPT_C = range(4)


def spdc_source(eta: float, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Two-level pair source ``sqrt(1-eta)|0_M 0_O> + sqrt(eta)|1_M 1_O>``."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[0, 0] = math.sqrt(1.0 - eta)
    amps[1, 1] = math.sqrt(eta)
    return amps


def swap_station_state(eta_o: float, eta_c: float, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Joint four-mode state after the optical modes meet on a 50/50 splitter.

    Axes are (microwave@orchestrator, detector 1, microwave@client, detector 2).
    """
    joint = np.einsum("ab,cd->abcd", spdc_source(eta_o, cutoff), spdc_source(eta_c, cutoff))
    bs = beam_splitter_matrix(0.5)
    out = np.zeros_like(joint)
    dim = cutoff + 1
    for mo, mc in product(range(dim), repeat=2):
        sl = joint[mo, :, mc, :]
        if np.any(np.abs(sl) > _ZERO):
            out[mo, :, mc, :] = _transform_pair(sl, bs)
    return out
