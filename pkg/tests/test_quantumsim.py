import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from qtransduce.errors import CutoffError, ResourceError
from qtransduce.quantumsim import (
    FockTwoMode,
    PhotonClass,
    PureState,
    apply_mode_matrix,
    beam_splitter,
    bell_phi_plus,
    ies_class_probabilities,
    ies_swap_branches,
    ies_swap_oracle,
    make_ghz,
    measure_out_qubit,
    teleport,
    transducer_output_state,
)
from qtransduce.channel import ERASURE
from qtransduce.strategies import DetectorKind, DetectorModel
from qtransduce.transducer import C_TH, PhysicalParams, binary_entropy, scattering_matrix


def expm_beam_splitter(amps, T):
    """Independent oracle: exp(i theta (a b^dag + a^dag b)) on a truncated space.

    The sign of theta fixes the +i off-diagonal convention.
    """
    dim = amps.shape[0]
    a1 = np.diag(np.sqrt(np.arange(1, dim)), 1)
    a = np.kron(a1, np.eye(dim))
    b = np.kron(np.eye(dim), a1)
    theta = math.asin(math.sqrt(T))
    H = theta * (a @ b.conj().T + a.conj().T @ b)
    return (expm(1j * H) @ amps.ravel()).reshape(dim, dim)


def fock(n_a, n_b, cutoff=2):
    return FockTwoMode.basis(n_a, n_b, cutoff)


class TestBeamSplitter:
    def test_full_transmission(self):
        out = beam_splitter(fock(1, 0), 1.0)
        assert out.fidelity(fock(0, 1)) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("eta", [0.1, 0.3, 0.5, 0.9])
    def test_partial(self, eta):
        out = beam_splitter(fock(1, 0), eta)
        assert abs(out.amplitude(0, 1)) ** 2 == pytest.approx(eta, abs=1e-14)
        assert abs(out.amplitude(1, 0)) ** 2 == pytest.approx(1 - eta, abs=1e-14)

    def test_hong_ou_mandel(self):
        out = beam_splitter(fock(1, 1), 0.5)
        assert out.amplitude(1, 1) == 0
        expected = np.zeros((3, 3), dtype=complex)
        expected[2, 0] = expected[0, 2] = 1j / math.sqrt(2)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    @pytest.mark.parametrize("T", [0.0, 0.2, 0.5, 0.77, 1.0])
    @pytest.mark.parametrize("n_a, n_b", [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)])
    def test_against_matrix_exponential(self, T, n_a, n_b):
        state = fock(n_a, n_b, cutoff=3)
        ours = beam_splitter(state, T).amplitudes
        oracle = expm_beam_splitter(state.amplitudes, T)
        # same state up to a global phase
        assert abs(np.vdot(oracle.ravel(), ours.ravel())) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_cutoff_overflow(self):
        state = FockTwoMode.basis(2, 1, cutoff=2)
        with pytest.raises(CutoffError):
            beam_splitter(state, 0.5)

    @settings(max_examples=60, deadline=None)
    @given(T=st.floats(0.0, 1.0), seed=st.integers(0, 2**32 - 1))
    def test_norm_and_number_conservation(self, T, seed):
        rng = np.random.default_rng(seed)
        amps = np.zeros((5, 5), dtype=complex)
        for i, j in itertools.product(range(5), repeat=2):
            if i + j <= 4:
                amps[i, j] = rng.normal() + 1j * rng.normal()
        state = FockTwoMode(amps / np.linalg.norm(amps))
        out = beam_splitter(state, T)
        assert np.sum(np.abs(out.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-12)
        before, after = state.photon_number_distribution(), out.photon_number_distribution()
        for n in range(5):
            assert after.get(n, 0.0) == pytest.approx(before.get(n, 0.0), abs=1e-12)


class TestTransducerState:
    def test_half_is_bell(self):
        out = transducer_output_state(0.5)
        # equal to (|01> + |10>)/sqrt2 up to a local phase on one mode
        bell = np.zeros((3, 3), dtype=complex)
        bell[0, 1] = 1j / math.sqrt(2)
        bell[1, 0] = 1 / math.sqrt(2)
        assert out.fidelity(FockTwoMode(bell)) == pytest.approx(1.0, abs=1e-14)
        assert out.entanglement_entropy() == pytest.approx(1.0, abs=1e-12)

    def test_full_conversion_is_product(self):
        out = transducer_output_state(1.0)
        assert out.fidelity(FockTwoMode.basis(0, 1, 2)) == pytest.approx(1.0, abs=1e-15)
        assert out.entanglement_entropy() == pytest.approx(0.0, abs=1e-12)

    def test_reduced_state_independent_routine(self):
        out = transducer_output_state(0.3)
        rho = out.reduced_density_matrix(0)
        w = np.linalg.eig(rho)[0].real
        w = w[w > 1e-15]
        assert sorted(w) == pytest.approx([0.3, 0.7], abs=1e-14)
        assert out.entanglement_entropy() == pytest.approx(binary_entropy(0.3), abs=1e-12)

    def test_matches_physical_scattering(self):
        p = PhysicalParams.from_reduced(C_TH)
        state = apply_mode_matrix(FockTwoMode.basis(0, 1, 2), scattering_matrix(p))
        assert state.entanglement_entropy() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("eta", np.linspace(0, 1, 101))
    def test_entropy_sweep(self, eta):
        assert transducer_output_state(eta).entanglement_entropy() == pytest.approx(binary_entropy(eta), abs=1e-12)


def enumerate_sources(eta_o, eta_c):
    """Oracle: the four emission branches of two independent pair sources."""
    return {
        PhotonClass.NONE: (1 - eta_o) * (1 - eta_c),
        PhotonClass.SINGLE: eta_o * (1 - eta_c) + (1 - eta_o) * eta_c,
        PhotonClass.DOUBLE: eta_o * eta_c,
    }


class TestSwapOracle:
    @pytest.mark.parametrize("eta_o, eta_c", [(0.5, 0.5), (0.3, 0.3), (0.2, 0.7), (0.0, 0.0), (1.0, 1.0)])
    def test_class_probabilities(self, eta_o, eta_c):
        probs = ies_class_probabilities(eta_o, eta_c)
        for k, v in enumerate_sources(eta_o, eta_c).items():
            assert probs[k] == pytest.approx(v, abs=1e-12)

    def test_heralded_state_maximally_entangled(self):
        singles = [b for b in ies_swap_branches(0.37, 0.37) if b.photon_class is PhotonClass.SINGLE]
        assert {b.counts for b in singles} == {(1, 0), (0, 1)}
        for b in singles:
            assert b.microwave_state.entanglement_entropy() == pytest.approx(1.0, abs=1e-12)
            assert abs(b.microwave_state.amplitude(1, 0)) ** 2 == pytest.approx(0.5, abs=1e-12)
            assert abs(b.microwave_state.amplitude(0, 1)) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_double_photon_unentangled(self):
        doubles = [b for b in ies_swap_branches(0.5, 0.5) if b.photon_class is PhotonClass.DOUBLE]
        # bunched at one detector, never split
        assert {b.counts for b in doubles} == {(2, 0), (0, 2)}
        for b in doubles:
            assert b.microwave_state.fidelity(FockTwoMode.basis(1, 1, 2)) == pytest.approx(1.0, abs=1e-12)
            assert b.microwave_state.entanglement_entropy() == pytest.approx(0.0, abs=1e-12)

    def test_dark_sources(self):
        for seed in range(20):
            out = ies_swap_oracle(0.0, 0.0, rng_seed=seed)
            assert out.photon_class is PhotonClass.NONE and not out.clicked

    def test_sampling_frequencies(self):
        n = 4000
        outs = [ies_swap_oracle(0.5, 0.5, rng_seed=s) for s in range(n)]
        single = sum(o.photon_class is PhotonClass.SINGLE for o in outs) / n
        assert abs(single - 0.5) < 4 * math.sqrt(0.25 / n)
        assert all(o.genuine == (o.photon_class is PhotonClass.SINGLE) for o in outs)

    def test_spd_false_heralds(self):
        det = DetectorModel(DetectorKind.SinglePhotonDetector)
        outs = [ies_swap_oracle(1.0, 1.0, det, rng_seed=s) for s in range(50)]
        assert all(o.heralded and not o.genuine for o in outs)
        counter = [ies_swap_oracle(1.0, 1.0, rng_seed=s) for s in range(50)]
        assert not any(o.heralded for o in counter)

    def test_seed_reproducible(self):
        a = ies_swap_oracle(0.4, 0.6, rng_seed=9)
        b = ies_swap_oracle(0.4, 0.6, rng_seed=9)
        assert (a.counts, a.detected, a.heralded) == (b.counts, b.detected, b.heralded)


class TestQubits:
    def test_ghz_small(self):
        np.testing.assert_allclose(make_ghz(1).amplitudes, [1 / math.sqrt(2)] * 2)
        assert make_ghz(2).fidelity(bell_phi_plus()) == pytest.approx(1.0)
        g3 = make_ghz(3).amplitudes
        assert g3[0] == g3[7] == pytest.approx(1 / math.sqrt(2))
        assert np.count_nonzero(g3) == 2

    def test_ghz_cap(self):
        with pytest.raises(ValueError):
            make_ghz(13)
        with pytest.raises(ValueError):
            make_ghz(0)

    def test_measure_ghz(self):
        rng = np.random.default_rng(0)
        seen = {0: 0, 1: 0}
        for _ in range(2000):
            m, rest = measure_out_qubit(make_ghz(3), 0, rng=rng)
            seen[m] += 1
            assert rest.fidelity(PureState.from_bits(str(m) * 2)) == pytest.approx(1.0)
        assert abs(seen[0] / 2000 - 0.5) < 4 * math.sqrt(0.25 / 2000)

    def test_measure_product(self):
        plus = PureState(np.array([1, 1]) / math.sqrt(2))
        state = plus.tensor(PureState.from_bits("0"))
        for seed in range(10):
            m, rest = measure_out_qubit(state, 1, rng=np.random.default_rng(seed))
            assert m == 0 and rest.fidelity(plus) == pytest.approx(1.0)

    @pytest.mark.parametrize("outcome", [0, 1])
    def test_ghz_persistency_one(self, outcome):
        _, rest = measure_out_qubit(make_ghz(3), 1, outcome=outcome)
        rho = rest.reduced_density_matrix([0])
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-12)

    def test_teleport_plus(self):
        plus = PureState(np.array([1, 1]) / math.sqrt(2))
        for seed in range(8):
            assert teleport(plus, 1, bsm_seed=seed).fidelity(plus) == pytest.approx(1.0, abs=1e-12)

    def test_teleport_erased_resource(self):
        with pytest.raises(ResourceError):
            teleport(make_ghz(2), [bell_phi_plus(), ERASURE])
        with pytest.raises(ResourceError):
            teleport(make_ghz(3), 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_teleport_random_states_all_outcomes(self, n):
        rng = np.random.default_rng(n)
        v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        state = PureState(v / np.linalg.norm(v))
        for pattern in itertools.product(itertools.product((0, 1), repeat=2), repeat=n):
            out = teleport(state, n, bsm_outcomes=pattern)
            assert out.fidelity(state) == pytest.approx(1.0, abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**31), bsm_seed=st.integers(0, 2**31))
    def test_teleport_norm_preserved(self, seed, bsm_seed):
        rng = np.random.default_rng(seed)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = PureState(v / np.linalg.norm(v))
        out = teleport(state, 2, bsm_seed=bsm_seed)
        assert np.vdot(out.amplitudes, out.amplitudes).real == pytest.approx(1.0, abs=1e-12)
        assert out.fidelity(state) == pytest.approx(1.0, abs=1e-10)
