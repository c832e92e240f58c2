"""Network configuration files.

Grammar (INI style, ``#`` or ``;`` comments)::

    [network]
    strategy = vanilla          # dmd | vanilla | ie | ies
    n_clients = 3
    detector = counter          # counter | spd
    detector_efficiency = 1.0
    max_attempts = 100000
    seed = 42
    sequential = false

    [links]                     # defaults applied to every link
    cooperativity = 1.0         # both ends, unless overridden below
    zeta_o = 1.0
    zeta_m = 1.0
    length_km = 0.0
    attenuation_length_km = 22.0

    [link.0]                    # per-link overrides, 0-based
    length_km = 22.0
    orchestrator.cooperativity = 0.1716
    client.cooperativity = 1.0

Per-end keys (``orchestrator.*`` / ``client.*``) take precedence over the
shared ``cooperativity``/``zeta_o``/``zeta_m`` keys.
"""
from __future__ import annotations

import configparser
import re
from pathlib import Path

from ..channel import FiberLink
from ..errors import ConfigError
from ..strategies import DetectorKind, DetectorModel, LinkConfig, StrategyKind
from ..transducer import ReducedParams
from .engine import DEFAULT_MAX_ATTEMPTS, NetworkConfig

_NETWORK_KEYS = {"strategy", "n_clients", "detector", "detector_efficiency", "max_attempts", "seed", "sequential"}
_HW = ("cooperativity", "zeta_o", "zeta_m")
_LINK_KEYS = set(_HW) | {"length_km", "attenuation_length_km"} | {
    f"{end}.{k}" for end in ("orchestrator", "client") for k in _HW
}
_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")


def _line_index(text: str) -> dict[tuple[str, str], int]:
    index, section = {}, None
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).strip()
            index[(section, "")] = lineno
            continue
        m = _KEY_RE.match(line)
        if m and section is not None:
            index[(section, m.group(1).strip().lower())] = lineno
    return index


class _Reader:
    def __init__(self, parser, lines, source):
        self.parser, self.lines, self.source = parser, lines, source

    def fail(self, section, key, msg):
        line = self.lines.get((section, key)) or self.lines.get((section, ""))
        where = f"{self.source}:{line}" if line else self.source
        raise ConfigError(f"{where}: [{section}] {key}: {msg}")

    def get(self, section, key, conv, default=None):
        if not self.parser.has_option(section, key):
            if default is None:
                self.fail(section, key, "missing required key")
            return default
        raw = self.parser.get(section, key)
        try:
            return conv(raw)
        except (ValueError, TypeError) as exc:
            self.fail(section, key, f"bad value {raw!r} ({exc})")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in {"1", "true", "yes", "on"}:
        return True
    if t in {"0", "false", "no", "off"}:
        return False
    raise ValueError("expected a boolean")


def parse_config(text: str, source: str = "<config>") -> NetworkConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    r = _Reader(parser, _line_index(text), source)
    if not parser.has_section("network"):
        raise ConfigError(f"{source}: missing [network] section")
    for key in parser.options("network"):
        if key not in _NETWORK_KEYS:
            r.fail("network", key, "unknown key")

    strategy = r.get("network", "strategy", StrategyKind.parse)
    n = r.get("network", "n_clients", int)
    det_kind = r.get("network", "detector", lambda t: DetectorKind(t.strip().lower()), DetectorKind.PhotonCounter)
    det_eff = r.get("network", "detector_efficiency", float, 1.0)
    max_attempts = r.get("network", "max_attempts", int, DEFAULT_MAX_ATTEMPTS)
    seed = r.get("network", "seed", int, 0)
    sequential = r.get("network", "sequential", _bool, False)

    for section in parser.sections():
        if section == "network":
            continue
        if section != "links" and not re.fullmatch(r"link\.\d+", section):
            r.fail(section, "", "unknown section")
        for key in parser.options(section):
            if key not in _LINK_KEYS:
                r.fail(section, key, "unknown key")
        if section.startswith("link.") and int(section[5:]) >= max(n, 0):
            r.fail(section, "", f"link index out of range for n_clients = {n}")

    links = []
    for i in range(max(n, 0)):
        links.append(_parse_link(r, i))
    try:
        detector = DetectorModel(det_kind, det_eff)
        return NetworkConfig(n, tuple(links), strategy, detector, max_attempts, seed, sequential)
    except ValueError as exc:
        raise ConfigError(f"{source}: [network] {exc}") from exc


def _parse_link(r: _Reader, i: int) -> LinkConfig:
    section = f"link.{i}"
    layers = [s for s in ("links", section) if r.parser.has_section(s)]

    def lookup(key, default):
        value, where = default, None
        for s in layers:
            if r.parser.has_option(s, key):
                value, where = r.get(s, key, float), s
        return value, where

    ends = {}
    for end in ("orchestrator", "client"):
        vals, where = {}, None
        for k in _HW:
            v, w = lookup(f"{end}.{k}", None)
            if v is None:
                v, w = lookup(k, 1.0)
            vals[k] = v
            where = w or where
        try:
            ends[end] = ReducedParams(vals["cooperativity"], vals["zeta_o"], vals["zeta_m"])
        except ValueError as exc:
            r.fail(where or section, f"{end} hardware", str(exc))
    length, wl = lookup("length_km", 0.0)
    att, wa = lookup("attenuation_length_km", 22.0)
    try:
        fiber = FiberLink(length, att)
    except ValueError as exc:
        r.fail(wl or wa or section, "length_km", str(exc))
    return LinkConfig(ends["orchestrator"], ends["client"], fiber)


def load_config(path: str | Path) -> NetworkConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, str(path))


def dump_config(cfg: NetworkConfig) -> str:
    """Fully explicit config text; parses back to an equal ``NetworkConfig``."""
    out = [
        "[network]",
        f"strategy = {cfg.strategy.value}",
        f"n_clients = {cfg.n_clients}",
        f"detector = {cfg.detector.kind.value}",
        f"detector_efficiency = {cfg.detector.efficiency!r}",
        f"max_attempts = {cfg.max_attempts_per_epr}",
        f"seed = {cfg.rng_seed}",
        f"sequential = {str(cfg.sequential).lower()}",
    ]
    for i, link in enumerate(cfg.links):
        out += ["", f"[link.{i}]", f"length_km = {link.link.length_km!r}",
                f"attenuation_length_km = {link.link.attenuation_length_km!r}"]
        for end, hw in (("orchestrator", link.orchestrator), ("client", link.client)):
            out += [
                f"{end}.cooperativity = {hw.cooperativity!r}",
                f"{end}.zeta_o = {hw.extraction_optical!r}",
                f"{end}.zeta_m = {hw.extraction_microwave!r}",
            ]
    return "\n".join(out) + "\n"


SAMPLE_CONFIG = """\
# Three clients, identical links, vanilla teleportation-based distribution.
[network]
strategy = vanilla
n_clients = 3
detector = counter
detector_efficiency = 1.0
max_attempts = 100000
seed = 42

[links]
cooperativity = 1.0
zeta_o = 1.0
zeta_m = 1.0
length_km = 22.0
attenuation_length_km = 22.0
"""
