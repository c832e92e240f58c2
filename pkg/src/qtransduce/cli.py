"""Command-line front end.

Exit codes: 0 success, 1 a statistical check fired, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .strategies import (
    IDQ_GATED_EFFICIENCY,
    DetectorKind,
    DetectorModel,
    LinkConfig,
    StrategyKind,
    capacity_bound,
    dmd_threshold_cooperativity,
    ebit_prob,
    ies_counter_click_prob,
    ies_herald_fidelity_fraction,
    ies_spd_click_prob,
    intrinsic_efficiency,
)
from .transducer import C_DMD, C_TH, efficiency, efficiency_from

EXIT_OK, EXIT_FLAGGED, EXIT_USAGE = 0, 1, 2
CONTOUR_TOL = 1e-3
SWEEP_COLUMNS = [
    "strategy", "C", "l_km", "zeta_o", "zeta_m", "eta",
    "probability", "capacity_bound", "contour_half", "extra",
]
CLICK_COLUMNS = [
    "C", "eta", "counter_prob", "spd_ideal_prob", "spd_real_prob",
    "spd_real_scaled_prob", "det_eff", "genuine_fraction",
]


def fmt(x) -> str:
    """Fixed float rendering: 17 significant digits, round-trips exactly."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


@dataclass(frozen=True)
class SweepSpec:
    cooperativities: tuple[float, ...]
    lengths_km: tuple[float, ...]
    zeta_o: float = 1.0
    zeta_m: float = 1.0
    attenuation_length_km: float = 22.0
    strategies: tuple[StrategyKind, ...] = tuple(StrategyKind)
    detector: DetectorModel = DetectorModel()

    def __post_init__(self):
        if not self.cooperativities or not self.lengths_km:
            raise ConfigError("sweep grids must be non-empty")


def make_grid(lo: float, hi: float, points: int, log: bool) -> tuple[float, ...]:
    if points < 2:
        raise ConfigError(f"grid needs at least 2 points, got {points}")
    if not lo < hi:
        raise ConfigError(f"grid minimum must be below maximum ({lo} >= {hi})")
    if log:
        if lo <= 0:
            raise ConfigError("log-spaced grid needs a positive minimum")
        return tuple(float(x) for x in np.geomspace(lo, hi, points))
    return tuple(float(x) for x in np.linspace(lo, hi, points))


def sweep_rows(spec: SweepSpec):
    for kind in spec.strategies:
        for C in spec.cooperativities:
            for l in spec.lengths_km:
                cfg = LinkConfig.symmetric(C, spec.zeta_o, spec.zeta_m, l, spec.attenuation_length_km)
                if kind is StrategyKind.IE_TMD:
                    eta = intrinsic_efficiency(cfg.orchestrator)
                else:
                    eta = efficiency(cfg.orchestrator)
                p = ebit_prob(kind, cfg)
                extra = ""
                if kind is StrategyKind.IES_TMD:
                    if spec.detector.kind is DetectorKind.PhotonCounter:
                        extra = f"counter_click={fmt(ies_counter_click_prob(eta))}"
                    else:
                        extra = f"spd_click={fmt(ies_spd_click_prob(eta, spec.detector))}"
                yield [
                    kind.name, C, l, spec.zeta_o, spec.zeta_m, eta, p,
                    capacity_bound(kind, cfg), abs(p - 0.5) <= CONTOUR_TOL, extra,
                ]


def click_rows(cooperativities, zeta_o, zeta_m, det_eff):
    det = DetectorModel(DetectorKind.SinglePhotonDetector, det_eff)
    for C in cooperativities:
        eta = efficiency_from(C, zeta_o, zeta_m)
        frac = ies_herald_fidelity_fraction(eta) if eta > 0.0 else ""
        yield [
            C, eta, ies_counter_click_prob(eta), ies_spd_click_prob(eta),
            ies_spd_click_prob(eta, det), ies_spd_click_prob(eta, det, model="scaled"),
            det_eff, frac,
        ]


def write_csv(rows, header, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


# -- subcommands ---------------------------------------------------------------


def _strategies(values) -> tuple[StrategyKind, ...]:
    if not values:
        return tuple(StrategyKind)
    out = []
    for v in values:
        for part in v.split(","):
            if part.strip():
                out.append(StrategyKind.parse(part))
    return tuple(dict.fromkeys(out))


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _c_grid(args) -> tuple[float, ...]:
    if args.cvalues:
        return _floats(args.cvalues)
    return make_grid(args.cmin, args.cmax, args.cpoints, log=True)


def cmd_sweep(args) -> int:
    lengths = _floats(args.lvalues) if args.lvalues else make_grid(args.lmin, args.lmax, args.lpoints, log=False)
    spec = SweepSpec(
        cooperativities=_c_grid(args),
        lengths_km=lengths,
        zeta_o=args.zeta_o,
        zeta_m=args.zeta_m,
        attenuation_length_km=args.att_length,
        strategies=_strategies(args.strategy),
        detector=DetectorModel(DetectorKind(args.detector), args.det_eff),
    )
    with _open_out(args.out) as fh:
        write_csv(sweep_rows(spec), SWEEP_COLUMNS, fh)
    return EXIT_OK


def threshold_report(clients=(1,), length_km=0.0, att_length=22.0, zeta_o=1.0, zeta_m=1.0) -> list[tuple[str, float]]:
    rows = [
        ("C_th (efficiency = 1/2)", C_TH),
        ("DMD one-way threshold (efficiency^2 = 1/2, closed form)", C_DMD),
    ]
    for n in clients:
        c = dmd_threshold_cooperativity(n, zeta_o, zeta_m, length_km, att_length)
        rows.append((f"DMD state threshold, n={n} (p^n = 1/2, bisection)", c))
    return rows


def cmd_thresholds(args) -> int:
    clients = tuple(int(x) for x in args.clients.split(",")) if args.clients else (1,)
    try:
        rows = threshold_report(clients, args.length, args.att_length, args.zeta_o, args.zeta_m)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    with _open_out(args.out) as fh:
        for name, value in rows:
            fh.write(f"{name}: {value:.12f}\n")
    return EXIT_OK


def cmd_clicks(args) -> int:
    with _open_out(args.out) as fh:
        write_csv(click_rows(_c_grid(args), args.zeta_o, args.zeta_m, args.det_eff), CLICK_COLUMNS, fh)
    return EXIT_OK


def render_text_report(report, rows) -> str:
    buf = io.StringIO()
    w = buf.write
    w(f"strategy: {report.strategy}\n")
    w(f"clients: {report.n_clients}\n")
    w(f"trials: {report.trials}\n")
    w(f"state success rate: {fmt(report.state_success_rate)}\n")
    for i, rate in enumerate(report.per_link_success_rate):
        lo, hi = report.wilson_interval_95[f"link{i}"]
        w(f"link {i}: rate {fmt(rate)} [{fmt(lo)}, {fmt(hi)}] over {report.per_link_attempts[i]} attempts\n")
    if report.mean_attempts_per_epr is not None:
        w(f"mean attempts per EPR: {fmt(report.mean_attempts_per_epr)}\n")
    if report.exhausted:
        w(f"exhausted attempt budgets: {report.exhausted}\n")
    if report.herald_stats["attempts"]:
        for k, v in report.herald_stats.items():
            w(f"herald {k}: {v}\n")
    w("\nquantity, analytic, empirical, samples, sigma, deviation, flagged\n")
    for r in rows:
        w(", ".join([r.quantity, fmt(r.analytic), fmt(r.empirical), str(r.samples),
                     fmt(r.sigma), fmt(r.deviation), fmt(r.flagged)]) + "\n")
    return buf.getvalue()


def cmd_simulate(args) -> int:
    from .montecarlo import compare_report, load_config, run_trials

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.seed is not None:
        cfg = replace(cfg, rng_seed=args.seed)
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    report = run_trials(cfg, args.trials)
    rows = compare_report(cfg, report)
    payload = {
        "config": {"path": str(args.config), "seed": cfg.rng_seed},
        "report": report.to_dict(),
        "comparison": [r.__dict__ for r in rows],
    }
    text = render_text_report(report, rows)
    data = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        out.with_suffix(".txt").write_text(text, encoding="utf-8")
        out.with_suffix(".json").write_text(data, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_FLAGGED if any(r.flagged for r in rows) else EXIT_OK


def cmd_sample_config(args) -> int:
    from .montecarlo import SAMPLE_CONFIG

    sys.stdout.write(SAMPLE_CONFIG)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _add_hardware(p):
    p.add_argument("--zeta-o", type=float, default=1.0, help="optical extraction ratio (default 1)")
    p.add_argument("--zeta-m", type=float, default=1.0, help="microwave extraction ratio (default 1)")
    p.add_argument("--att-length", type=float, default=22.0, help="fiber attenuation length in km (default 22)")


def _add_c_grid(p):
    p.add_argument("--cmin", type=float, default=1e-5, help="smallest cooperativity (log grid)")
    p.add_argument("--cmax", type=float, default=10.0, help="largest cooperativity (log grid)")
    p.add_argument("--cpoints", type=int, default=61, help="number of cooperativity points")
    p.add_argument("--cvalues", help="explicit comma-separated cooperativities (overrides the grid)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtransduce",
        description="Transduction-limited multipartite entanglement distribution models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "sweep",
        help="ebit probability / capacity grids over cooperativity and link length",
        description=(
            "Tabulate per-link ebit distribution probability and capacity bound "
            "on a (cooperativity x link length) grid. Reproduces: conversion "
            "efficiency vs C (column eta); DMD and vanilla-TMD probability "
            "surface with its p=1/2 contour (contour_half); IE-TMD surface; "
            "IES-TMD surface; capacity upper bounds vs C (use --lvalues 0)."
        ),
    )
    p.add_argument("--strategy", action="append",
                   help="dmd, vanilla, ie, ies (repeatable or comma list; default all)")
    _add_c_grid(p)
    p.add_argument("--lmin", type=float, default=0.0, help="shortest link in km")
    p.add_argument("--lmax", type=float, default=100.0, help="longest link in km")
    p.add_argument("--lpoints", type=int, default=51, help="number of link lengths")
    p.add_argument("--lvalues", help="explicit comma-separated link lengths in km")
    _add_hardware(p)
    p.add_argument("--detector", choices=["counter", "spd"], default="counter")
    p.add_argument("--det-eff", type=float, default=1.0, help="detector efficiency")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "thresholds",
        help="closed-form cooperativity thresholds",
        description=(
            "Print C_th = 3-2*sqrt(2) (intrinsic EPR generation), the pairwise "
            "DMD threshold 2*sqrt(2)-2*sqrt(2-sqrt(2))-1 and, for each n, the "
            "symmetric C at which (p_link)^n = 1/2."
        ),
    )
    p.add_argument("--clients", help="comma-separated client counts (default 1)")
    p.add_argument("--length", type=float, default=0.0, help="link length in km")
    _add_hardware(p)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser(
        "clicks",
        help="heralding-station click probabilities vs cooperativity",
        description=(
            "Click probability vs cooperativity for the swapping scheme: photon "
            "counter, ideal single-photon detector, realistic detector at "
            "--det-eff (default 0.25, gated commercial SPD) and the genuine-herald fraction."
        ),
    )
    _add_c_grid(p)
    _add_hardware(p)
    p.add_argument("--det-eff", type=float, default=IDQ_GATED_EFFICIENCY)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_clicks)

    p = sub.add_parser(
        "simulate",
        help="Monte Carlo run from a network config file",
        description=(
            "Simulate distribution on a star network and compare against the "
            "closed forms. Writes <out>.txt and <out>.json; exit status 1 when "
            "any quantity deviates by more than 3 binomial sigma."
        ),
    )
    p.add_argument("config", help="network config file (INI)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", help="report path prefix (default: text to stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample-config", help="print a sample network config")
    p.set_defaults(func=cmd_sample_config)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
