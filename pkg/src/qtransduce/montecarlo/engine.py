"""Trial-level simulation of multipartite distribution on a star network."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from .._accel import backend
from ..channel import survival
from ..errors import ConfigError, ResourceError
from ..quantumsim import PureState, teleport
from ..strategies import (
    DetectorKind,
    DetectorModel,
    LinkConfig,
    StrategyKind,
    dmd_state_success_prob,
    intrinsic_efficiency,
)
from ..transducer import binary_entropy, efficiency
from . import kernels

DEFAULT_MAX_ATTEMPTS = 100_000
CHUNK = 1 << 20
SIGMA_LEVEL = 3.0


@dataclass(frozen=True)
class NetworkConfig:
    n_clients: int
    links: tuple[LinkConfig, ...]
    strategy: StrategyKind = StrategyKind.VanillaTMD
    detector: DetectorModel = field(default_factory=DetectorModel)
    max_attempts_per_epr: int = DEFAULT_MAX_ATTEMPTS
    rng_seed: int = 0
    sequential: bool = False

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if self.n_clients < 1:
            raise ConfigError(f"need at least one client, got {self.n_clients}")
        if len(self.links) != self.n_clients:
            raise ConfigError(
                f"expected {self.n_clients} links, got {len(self.links)}"
            )
        if self.max_attempts_per_epr < 1:
            raise ConfigError("max_attempts_per_epr must be at least 1")

    @classmethod
    def homogeneous(cls, n_clients: int, link: LinkConfig, **kwargs) -> "NetworkConfig":
        return cls(n_clients, (link,) * n_clients, **kwargs)


@dataclass
class TrialReport:
    strategy: str
    trials: int
    n_clients: int
    per_link_attempts: list[int]
    per_link_successes: list[int]
    per_link_success_rate: list[float]
    per_link_mean_attempts: list[float | None]
    state_successes: int
    state_success_rate: float
    mean_attempts_per_epr: float | None
    mean_rounds_per_state: float | None
    exhausted: int
    herald_stats: dict[str, int]
    wilson_interval_95: dict[str, tuple[float, float]]
    backend: str = "numpy"

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(successes: int, n: int, alpha: float = 0.05) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    lo, hi = proportion_confint(successes, n, alpha=alpha, method="wilson")
    return (float(lo), float(hi))


def stage_probabilities(kind: StrategyKind, link: LinkConfig) -> list[float]:
    """Independent per-attempt stages for the non-heralded strategies."""
    s = survival(link.link)
    down = efficiency(link.client)
    if kind in (StrategyKind.DMD, StrategyKind.VanillaTMD):
        return [efficiency(link.orchestrator), s, down]
    if kind is StrategyKind.IE_TMD:
        return [binary_entropy(intrinsic_efficiency(link.orchestrator)), s, down]
    raise ValueError(f"{kind} is not a chain of independent stages")


def ies_parameters(link: LinkConfig, detector: DetectorModel) -> dict[str, float]:
    eta_o = efficiency(link.orchestrator)
    return dict(
        eta_o=eta_o,
        eta_c=efficiency(link.client),
        survival_half=survival(link.link, 0.5),
        detector_efficiency=detector.efficiency,
        distill_prob=binary_entropy(eta_o),
    )


def link_success_prob(kind: StrategyKind, link: LinkConfig, detector: DetectorModel | None = None) -> float:
    """Per-attempt probability that the simulator establishes a usable ebit.

    Matches the closed-form strategy probabilities for symmetric hardware
    and ideal detectors.
    """
    if kind is StrategyKind.IES_TMD:
        q = ies_parameters(link, detector or DetectorModel())
        single = q["eta_o"] * (1 - q["eta_c"]) + q["eta_c"] * (1 - q["eta_o"])
        return q["distill_prob"] * single * q["survival_half"] * q["detector_efficiency"]
    return math.prod(stage_probabilities(kind, link))


def _run_link(cfg: NetworkConfig, index: int, trials: int):
    link = cfg.links[index]
    key = kernels.link_key(cfg.rng_seed, index)
    budget = 1 if cfg.strategy is StrategyKind.DMD else cfg.max_attempts_per_epr
    attempts = np.empty(trials, dtype=np.int64)
    success = np.empty(trials, dtype=np.bool_)
    counts = np.zeros(kernels.N_HERALD_COUNTS, dtype=np.int64)
    for start in range(0, trials, CHUNK):
        size = min(CHUNK, trials - start)
        if cfg.strategy is StrategyKind.IES_TMD:
            a, s, c = kernels.ies_attempts(
                key,
                counter_mode=cfg.detector.kind is DetectorKind.PhotonCounter,
                trials=size,
                max_attempts=budget,
                offset=start,
                **ies_parameters(link, cfg.detector),
            )
            counts += c
        else:
            a, s = kernels.chain_attempts(
                key, stage_probabilities(cfg.strategy, link), size, budget, offset=start
            )
        attempts[start : start + size] = a
        success[start : start + size] = s
    return attempts, success, counts


def run_trials(cfg: NetworkConfig, trials: int) -> TrialReport:
    """Simulate ``trials`` independent attempts to share one n-party state.

    DMD gets a single simultaneous shot over all links. The teleportation
    variants retry each link up to the attempt budget.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    n = cfg.n_clients
    all_ok = np.ones(trials, dtype=bool)
    rounds = np.zeros(trials, dtype=np.int64)
    per_attempts, per_success, per_mean = [], [], []
    counts = np.zeros(kernels.N_HERALD_COUNTS, dtype=np.int64)
    exhausted = 0
    for i in range(n):
        attempts, success, c = _run_link(cfg, i, trials)
        counts += c
        all_ok &= success
        rounds = rounds + attempts if cfg.sequential else np.maximum(rounds, attempts)
        per_attempts.append(int(attempts.sum()))
        per_success.append(int(success.sum()))
        per_mean.append(float(attempts[success].mean()) if success.any() else None)
        exhausted += int(trials - success.sum()) if cfg.strategy.is_teleported else 0

    rates = [s / a for s, a in zip(per_success, per_attempts)]
    state_successes = int(all_ok.sum())
    ci = {f"link{i}": wilson_interval(s, a) for i, (s, a) in enumerate(zip(per_success, per_attempts))}
    ci["state"] = wilson_interval(state_successes, trials)
    herald = {
        "attempts": int(counts[kernels.CNT_ATTEMPTS]),
        "counter_clicks": int(counts[kernels.CNT_COUNTER]),
        "spd_clicks": int(counts[kernels.CNT_SPD]),
        "genuine_heralds": int(counts[kernels.CNT_GENUINE]),
        "false_heralds": int(counts[kernels.CNT_FALSE]),
    }
    if herald["spd_clicks"]:
        ci["herald_fraction"] = wilson_interval(herald["genuine_heralds"], herald["spd_clicks"])

    total_success = sum(per_success)
    mean_attempts = None
    if cfg.strategy.is_teleported and total_success:
        mean_attempts = sum(
            m * s for m, s in zip(per_mean, per_success) if m is not None
        ) / total_success
    return TrialReport(
        strategy=cfg.strategy.name,
        trials=trials,
        n_clients=n,
        per_link_attempts=per_attempts,
        per_link_successes=per_success,
        per_link_success_rate=rates,
        per_link_mean_attempts=per_mean,
        state_successes=state_successes,
        state_success_rate=state_successes / trials,
        mean_attempts_per_epr=mean_attempts,
        mean_rounds_per_state=float(rounds[all_ok].mean()) if state_successes else None,
        exhausted=exhausted,
        herald_stats=herald,
        wilson_interval_95=ci,
        backend=backend(),
    )


@dataclass(frozen=True)
class ComparisonRow:
    quantity: str
    analytic: float
    empirical: float
    samples: int
    sigma: float
    deviation: float
    flagged: bool


def _row(name: str, analytic: float, successes: int, n: int) -> ComparisonRow:
    empirical = successes / n if n else float("nan")
    sigma = math.sqrt(analytic * (1.0 - analytic) / n) if n else float("nan")
    dev = abs(empirical - analytic)
    if sigma > 0:
        flagged = dev > SIGMA_LEVEL * sigma
    else:
        flagged = dev > 1e-12
    return ComparisonRow(name, analytic, empirical, n, sigma, dev, bool(flagged))


def compare_report(cfg: NetworkConfig, report: TrialReport) -> list[ComparisonRow]:
    """Empirical rates against their closed forms, flagged beyond 3 sigma."""
    rows = []
    p_links = [link_success_prob(cfg.strategy, l, cfg.detector) for l in cfg.links]
    for i, p in enumerate(p_links):
        if report.per_link_attempts[i] and p > 0.0:
            rows.append(_row(f"link{i}.success_rate", p, report.per_link_successes[i], report.per_link_attempts[i]))
        else:
            # nothing can succeed: any success is a hard failure
            rows.append(ComparisonRow(f"link{i}.success_rate", p, report.per_link_success_rate[i],
                                      report.per_link_attempts[i], 0.0,
                                      abs(report.per_link_success_rate[i] - p),
                                      report.per_link_successes[i] != 0))
    if cfg.strategy is StrategyKind.DMD:
        p_state = math.prod(p_links)
        if len(set(p_links)) == 1:
            p_state = dmd_state_success_prob(p_links[0], cfg.n_clients)
        rows.append(_row("state.success_rate", p_state, report.state_successes, report.trials))
    if cfg.strategy.is_teleported:
        for i, p in enumerate(p_links):
            m, k = report.per_link_mean_attempts[i], report.per_link_successes[i]
            if m is None or p <= 0.0:
                continue
            # geometric attempts: mean 1/p, std sqrt(1-p)/p
            sigma = math.sqrt(1.0 - p) / p / math.sqrt(k)
            dev = abs(m - 1.0 / p)
            flagged = dev > SIGMA_LEVEL * sigma if sigma > 0 else dev > 1e-12
            rows.append(ComparisonRow(f"link{i}.mean_attempts", 1.0 / p, m, k, sigma, dev, bool(flagged)))
    h = report.herald_stats
    if cfg.strategy is StrategyKind.IES_TMD and h["spd_clicks"]:
        # genuine heralds among all clicks of a non-resolving detector
        fr = [_herald_fraction(l, cfg.detector) for l in cfg.links]
        if len(set(fr)) == 1:
            rows.append(_row("herald.genuine_fraction", fr[0], h["genuine_heralds"], h["spd_clicks"]))
    return rows


def _herald_fraction(link: LinkConfig, detector: DetectorModel) -> float:
    q = ies_parameters(link, detector)
    d = q["survival_half"] * q["detector_efficiency"]
    single = q["eta_o"] * (1 - q["eta_c"]) + q["eta_c"] * (1 - q["eta_o"])
    genuine = single * d
    double = q["eta_o"] * q["eta_c"]
    return genuine / (genuine + double * (1.0 - (1.0 - d) ** 2))


def empirical_vs_analytic(cfg: NetworkConfig, trials: int) -> tuple[TrialReport, list[ComparisonRow]]:
    if trials < 10_000:
        raise ValueError("the comparison harness needs at least 1e4 trials")
    report = run_trials(cfg, trials)
    return report, compare_report(cfg, report)


def teleport_after_distribution(cfg: NetworkConfig, multipartite: PureState, seed: int = 0) -> float:
    """Distribute one EPR per client, then teleport ``multipartite`` over them.

    ``seed`` drives both the distribution attempts and the Bell
    measurements. Returns the fidelity with the intended state. Raises ``ResourceError``
    when any link failed within its attempt budget.
    """
    if not cfg.strategy.is_teleported:
        raise ValueError("DMD sends the state directly; nothing to teleport")
    if multipartite.n_qubits != cfg.n_clients:
        raise ResourceError(
            f"state has {multipartite.n_qubits} qubits but the network has {cfg.n_clients} clients"
        )
    report = run_trials(replace(cfg, rng_seed=seed), 1)
    missing = [i for i, s in enumerate(report.per_link_successes) if s == 0]
    if missing:
        raise ResourceError(f"distribution incomplete: no EPR on links {missing}")
    final = teleport(multipartite, cfg.n_clients, bsm_seed=seed)
    return final.fidelity(multipartite)
