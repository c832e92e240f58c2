"""Hot Monte Carlo loops.

Every random number is a pure function of ``(link key, trial, attempt,
slot)`` through a splitmix64 hash, so the compiled kernels and the numpy
fallbacks produce bit-identical results and trials can be split freely
across workers.
"""
from __future__ import annotations

import numpy as np

from .._accel import HAVE_NUMBA, njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ATTEMPT_STRIDE = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0

# Uniform slots consumed by one IES attempt.
SLOT_GEN_O, SLOT_GEN_C, SLOT_SURV_O, SLOT_SURV_C, SLOT_DET_O, SLOT_DET_C, SLOT_DISTILL = range(7)
# Layout of the IES herald counter array.
N_HERALD_COUNTS = 5
CNT_ATTEMPTS, CNT_COUNTER, CNT_SPD, CNT_GENUINE, CNT_FALSE = range(N_HERALD_COUNTS)

_MASK = (1 << 64) - 1


def mix64_int(z: int) -> int:
    """splitmix64 finaliser on Python ints (used to derive link keys)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def link_key(seed: int, link_index: int) -> int:
    return mix64_int(mix64_int(seed) ^ mix64_int(0x9E3779B97F4A7C15 * (link_index + 1)))


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True)
def _uniform(key, trial, attempt, slot):
    h = _mix(key ^ ((trial + _ONE) * _GOLDEN))
    h = _mix(h ^ ((attempt * _ATTEMPT_STRIDE) + slot))
    return (h >> _S11) * _INV53


# -- chains of independent Bernoulli stages (DMD, vanilla-TMD, IE-TMD) ------


@njit(cache=True)
def _chain_numba(key, stage_probs, offset, trials, max_attempts, attempts, success):
    n_stages = stage_probs.shape[0]
    k = np.uint64(key)
    for t in range(trials):
        tt = np.uint64(t + offset)
        ok = False
        a = 0
        while a < max_attempts:
            aa = np.uint64(a)
            ok = True
            for s in range(n_stages):
                if not _uniform(k, tt, aa, np.uint64(s)) < stage_probs[s]:
                    ok = False
                    break
            a += 1
            if ok:
                break
        attempts[t] = a
        success[t] = ok


def _chain_numpy(key, stage_probs, offset, trials, max_attempts, attempts, success):
    k = np.uint64(key)
    active = np.arange(offset, offset + trials, dtype=np.uint64)
    for a in range(max_attempts):
        if active.size == 0:
            break
        aa = np.uint64(a)
        ok = np.ones(active.size, dtype=bool)
        for s, p in enumerate(stage_probs):
            ok &= _uniform(k, active, aa, np.uint64(s)) < p
        idx = active.astype(np.int64) - offset
        attempts[idx] = a + 1
        success[idx[ok]] = True
        active = active[~ok]


def chain_attempts(key: int, stage_probs, trials: int, max_attempts: int, offset: int = 0):
    """Retry each trial until every stage succeeds in the same attempt.

    Trials are numbered from ``offset`` so a run can be split into chunks
    without changing any sample. Returns ``(attempts, success)``; ``attempts`` counts the attempts used,
    ``success`` is False when the budget ran out.
    """
    probs = np.ascontiguousarray(stage_probs, dtype=np.float64)
    attempts = np.zeros(trials, dtype=np.int64)
    success = np.zeros(trials, dtype=np.bool_)
    if trials == 0:
        return attempts, success
    if np.any(probs <= 0.0):
        # no attempt can ever succeed; skip the loop
        attempts[:] = max_attempts
        return attempts, success
    kernel = _chain_numba if HAVE_NUMBA else _chain_numpy
    with np.errstate(over="ignore"):
        kernel(np.uint64(key), probs, offset, trials, max_attempts, attempts, success)
    return attempts, success


# -- swapping-station heralding (IES-TMD) ----------------------------------


@njit(cache=True)
def _ies_numba(key, params, counter_mode, offset, trials, max_attempts, attempts, success, counts):
    eta_o = params[0]
    eta_c = params[1]
    surv = params[2]
    det = params[3]
    distill = params[4]
    k = np.uint64(key)
    for t in range(trials):
        tt = np.uint64(t + offset)
        ok = False
        a = 0
        while a < max_attempts:
            aa = np.uint64(a)
            go = _uniform(k, tt, aa, np.uint64(0)) < eta_o
            gc = _uniform(k, tt, aa, np.uint64(1)) < eta_c
            do = go and _uniform(k, tt, aa, np.uint64(2)) < surv and _uniform(k, tt, aa, np.uint64(4)) < det
            dc = gc and _uniform(k, tt, aa, np.uint64(3)) < surv and _uniform(k, tt, aa, np.uint64(5)) < det
            generated = int(go) + int(gc)
            detected = int(do) + int(dc)
            counts[0] += 1
            if detected == 1:
                counts[1] += 1
            if detected >= 1:
                counts[2] += 1
            genuine = generated == 1 and detected == 1
            heralded = detected == 1 if counter_mode else detected >= 1
            if genuine:
                counts[3] += 1
            elif heralded:
                counts[4] += 1
            a += 1
            if genuine and _uniform(k, tt, aa, np.uint64(6)) < distill:
                ok = True
                break
        attempts[t] = a
        success[t] = ok


def _ies_numpy(key, params, counter_mode, offset, trials, max_attempts, attempts, success, counts):
    eta_o, eta_c, surv, det, distill = params
    k = np.uint64(key)
    active = np.arange(offset, offset + trials, dtype=np.uint64)
    for a in range(max_attempts):
        if active.size == 0:
            break
        aa = np.uint64(a)

        def u(slot):
            return _uniform(k, active, aa, np.uint64(slot))

        go = u(SLOT_GEN_O) < eta_o
        gc = u(SLOT_GEN_C) < eta_c
        do = go & (u(SLOT_SURV_O) < surv) & (u(SLOT_DET_O) < det)
        dc = gc & (u(SLOT_SURV_C) < surv) & (u(SLOT_DET_C) < det)
        generated = go.astype(np.int64) + gc
        detected = do.astype(np.int64) + dc
        genuine = (generated == 1) & (detected == 1)
        heralded = (detected == 1) if counter_mode else (detected >= 1)
        counts[CNT_ATTEMPTS] += active.size
        counts[CNT_COUNTER] += int(np.count_nonzero(detected == 1))
        counts[CNT_SPD] += int(np.count_nonzero(detected >= 1))
        counts[CNT_GENUINE] += int(np.count_nonzero(genuine))
        counts[CNT_FALSE] += int(np.count_nonzero(heralded & ~genuine))
        ok = genuine & (u(SLOT_DISTILL) < distill)
        idx = active.astype(np.int64) - offset
        attempts[idx] = a + 1
        success[idx[ok]] = True
        active = active[~ok]


def ies_attempts(
    key: int,
    eta_o: float,
    eta_c: float,
    survival_half: float,
    detector_efficiency: float,
    distill_prob: float,
    counter_mode: bool,
    trials: int,
    max_attempts: int,
    offset: int = 0,
):
    """Photon-level heralding attempts, retried until a distilled ebit.

    Returns ``(attempts, success, counts)`` where ``counts`` is indexed by
    the ``CNT_*`` constants.
    """
    attempts = np.zeros(trials, dtype=np.int64)
    success = np.zeros(trials, dtype=np.bool_)
    counts = np.zeros(N_HERALD_COUNTS, dtype=np.int64)
    if trials == 0:
        return attempts, success, counts
    p_genuine = (eta_o * (1 - eta_c) + eta_c * (1 - eta_o)) * survival_half * detector_efficiency
    if p_genuine * distill_prob <= 0.0:
        # no attempt can ever succeed; herald statistics are not sampled
        attempts[:] = max_attempts
        return attempts, success, counts
    params = np.array([eta_o, eta_c, survival_half, detector_efficiency, distill_prob])
    kernel = _ies_numba if HAVE_NUMBA else _ies_numpy
    with np.errstate(over="ignore"):
        kernel(np.uint64(key), params, bool(counter_mode), offset, trials, max_attempts, attempts, success, counts)
    return attempts, success, counts
