"""Small state-vector engine for GHZ preparation and teleportation.

Qubit 0 is the most significant bit of the basis index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ResourceError

MAX_QUBITS = 14
MAX_GHZ = 12

H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        k = int(round(math.log2(len(amps)))) if len(amps) else -1
        if k < 0 or 2**k != len(amps):
            raise ValueError("amplitude vector length must be a power of two")
        if k > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} qubits are supported, got {k}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalised (norm^2 = {norm})")
        labels = tuple(self.labels) or tuple(f"q{i}" for i in range(k))
        if len(labels) != k:
            raise ValueError("one label per qubit is required")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @classmethod
    def from_bits(cls, bits: str, labels: Sequence[str] = ()) -> "PureState":
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps, tuple(labels))

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes), self.labels + other.labels)

    def fidelity(self, other: "PureState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def reduced_density_matrix(self, keep: Sequence[int]) -> np.ndarray:
        k = self.n_qubits
        keep = list(keep)
        rest = [i for i in range(k) if i not in keep]
        psi = self.amplitudes.reshape((2,) * k).transpose(keep + rest)
        psi = psi.reshape(2 ** len(keep), -1)
        return psi @ psi.conj().T

    def apply(self, gate: np.ndarray, *qubits: int) -> "PureState":
        k = self.n_qubits
        m = len(qubits)
        psi = self.amplitudes.reshape((2,) * k)
        g = np.asarray(gate, dtype=complex).reshape((2,) * (2 * m))
        psi = np.tensordot(g, psi, axes=(list(range(m, 2 * m)), list(qubits)))
        psi = np.moveaxis(psi, list(range(m)), list(qubits))
        return PureState(psi.ravel(), self.labels)


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def bell_phi_plus(labels=("a", "b")) -> PureState:
    return PureState(np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0), tuple(labels))


def make_ghz(n: int) -> PureState:
    if not 1 <= n <= MAX_GHZ:
        raise ValueError(f"GHZ size must lie in [1, {MAX_GHZ}], got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return PureState(amps, tuple(f"ghz{i}" for i in range(n)))


def measure_out_qubit(
    state: PureState,
    index: int,
    basis: str = "Z",
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[int, PureState | None]:
    """Z-measure one qubit and drop it from the register.

    ``outcome`` forces a post-selected result (it must have nonzero
    probability). Returns ``None`` as the state when no qubits remain.
    """
    if basis != "Z":
        raise ValueError("only Z-basis measurement is supported")
    k = state.n_qubits
    if not 0 <= index < k:
        raise IndexError(f"qubit index {index} out of range for {k} qubits")
    psi = np.moveaxis(state.amplitudes.reshape((2,) * k), index, 0).reshape(2, -1)
    probs = np.sum(np.abs(psi) ** 2, axis=1)
    if outcome is None:
        rng = rng or np.random.default_rng()
        outcome = int(rng.random() >= probs[0])
    if probs[outcome] < 1e-15:
        raise ValueError(f"outcome {outcome} has zero probability")
    labels = state.labels[:index] + state.labels[index + 1 :]
    if k == 1:
        return outcome, None
    rest = psi[outcome] / math.sqrt(probs[outcome])
    return outcome, PureState(rest, labels)


def _bsm(state: PureState, q_in: int, q_res: int, rng, forced):
    """Bell measurement of two qubits; returns (m_z, m_x, remaining state)."""
    state = state.apply(CNOT, q_in, q_res).apply(H, q_in)
    f1, f2 = forced if forced is not None else (None, None)
    m1, state = measure_out_qubit(state, q_in, rng=rng, outcome=f1)
    q_res -= 1 if q_res > q_in else 0
    m2, state = measure_out_qubit(state, q_res, rng=rng, outcome=f2)
    return m1, m2, state


def teleport(
    state: PureState,
    resources: int | Sequence[object],
    bsm_seed: int = 0,
    bsm_outcomes: Sequence[tuple[int, int]] | None = None,
) -> PureState:
    """Teleport every qubit of ``state`` onto client halves of ideal EPR pairs.

    ``resources`` is either the number of available EPR pairs or a sequence
    of pairs (``PureState`` or the erasure flag). ``bsm_outcomes`` forces the
    Bell-measurement results, one ``(m_z, m_x)`` pair per qubit.
    """
    n = state.n_qubits
    if isinstance(resources, int):
        pairs = [bell_phi_plus() for _ in range(resources)]
    else:
        pairs = list(resources)
    if len(pairs) != n:
        raise ResourceError(f"need {n} EPR pairs to teleport {n} qubits, got {len(pairs)}")
    for i, pair in enumerate(pairs):
        if not isinstance(pair, PureState) or pair.n_qubits != 2:
            raise ResourceError(f"EPR pair {i} is missing (erased or invalid)")
    if bsm_outcomes is not None and len(bsm_outcomes) != n:
        raise ValueError("one forced BSM outcome per teleported qubit is required")
    rng = np.random.default_rng(bsm_seed)
    # register while teleporting qubit i: [inputs i..n-1, clients 0..i-1, orch_i, client_i]
    current = state
    for i in range(n):
        epr = PureState(pairs[i].amplitudes, (f"orch{i}", f"client{i}"))
        current = current.tensor(epr)
        q_res = current.n_qubits - 2
        forced = None if bsm_outcomes is None else bsm_outcomes[i]
        m1, m2, current = _bsm(current, 0, q_res, rng, forced)
        client = current.n_qubits - 1
        if m2:
            current = current.apply(X, client)
        if m1:
            current = current.apply(Z, client)
    return current
