"""Run configuration and its INI-style file format.

Example::

    [run]
    omega = 120pi
    mode = two-way

    [pade]
    pade_terms = 4
    theta_deg = 45

Every key has a default except ``omega``.  Frequencies accept a trailing
``pi`` (``120pi``, ``2.5 pi``).
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .medium import Medium, build_benchmark_medium
from .pade import MAX_CLASSICAL_ORDER, MAX_TABLE_ORDER

__all__ = ["ConfigError", "RunConfig", "parse_config", "parse_config_text", "parse_omega"]


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


SECTIONS = {
    "run": ("omega", "mode", "ppw_x", "ppw_y"),
    "medium": ("medium", "alpha", "a_damp", "a_frac"),
    "pade": ("pade_terms", "theta_deg", "pade_provider"),
    "output": ("out_dir",),
}


@dataclass(frozen=True)
class RunConfig:
    omega: float
    pade_terms: int = 4
    theta_deg: float = 45.0
    pade_provider: str = "classical"
    ppw_x: float = 36
    ppw_y: float = 12
    alpha: float = 0.5
    a_damp: float = 0.01
    a_frac: float = 10.0
    mode: str = "two-way"
    medium: str = "paper-inclusion"
    out_dir: str = "out"

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ConfigError("; ".join(problems))

    def problems(self) -> list[str]:
        p = []
        if not (isinstance(self.omega, (int, float)) and self.omega > 0):
            p.append(f"omega must be positive (got {self.omega})")
        limit = MAX_TABLE_ORDER if self.pade_provider == "table" else MAX_CLASSICAL_ORDER
        if not 1 <= self.pade_terms <= limit:
            p.append(f"pade_terms must lie in [1, {limit}] for provider {self.pade_provider} (got {self.pade_terms})")
        if not 0 <= self.theta_deg <= 90:
            p.append(f"theta_deg must lie in [0, 90] (got {self.theta_deg})")
        if self.pade_provider not in ("classical", "table"):
            p.append(f"pade_provider must be classical or table (got {self.pade_provider})")
        if self.ppw_x < 4 or self.ppw_y < 4:
            p.append("ppw_x and ppw_y must be >= 4")
        if not 0 < self.alpha < 1:
            p.append(f"alpha must lie in (0, 1) (got {self.alpha})")
        if self.a_damp < 0 or self.a_frac < 0:
            p.append("a_damp and a_frac must be non-negative")
        if self.mode not in ("one-way", "two-way"):
            p.append(f"mode must be one-way or two-way (got {self.mode})")
        if self.medium not in ("paper-inclusion", "homogeneous"):
            p.append(f"medium must be paper-inclusion or homogeneous (got {self.medium})")
        return p

    @property
    def theta(self) -> float:
        return math.radians(self.theta_deg)

    def build_medium(self) -> Medium:
        _, medium = build_benchmark_medium(self.omega, self.ppw_x, self.ppw_y, a_damp=self.a_damp,
                                           a_frac=self.a_frac, alpha=self.alpha,
                                           inclusion=self.medium == "paper-inclusion")
        return medium

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    def to_ini(self) -> str:
        vals = asdict(self)
        lines = []
        for sec, keys in SECTIONS.items():
            lines.append(f"[{sec}]")
            lines += [f"{k} = {vals[k]}" for k in keys]
            lines.append("")
        return "\n".join(lines)


_OMEGA_RE = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*(pi|π)?\s*$")


def parse_omega(text: str) -> float:
    """``"120pi"`` -> 120*pi; plain numbers pass through."""
    m = _OMEGA_RE.match(text)
    if not m or (not m.group(1) and not m.group(2)):
        raise ConfigError(f"cannot parse frequency {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    return num * math.pi if m.group(2) else num


def _convert(key: str, raw: str):
    if key == "omega":
        return parse_omega(raw)
    if key == "pade_terms":
        return int(raw)
    if key in ("theta_deg", "ppw_x", "ppw_y", "alpha", "a_damp", "a_frac"):
        return float(raw)
    return raw.strip()


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        if line is None and getattr(exc, "errors", None):
            line = exc.errors[0][0]
        where = f" (line {line})" if line else ""
        raise ConfigError(f"{source}: parse error{where}: {exc}") from exc

    problems, values = [], {}
    for sec in parser.sections():
        if sec not in SECTIONS:
            problems.append(f"unknown section [{sec}]")
            continue
        for key, raw in parser.items(sec):
            if key not in SECTIONS[sec]:
                problems.append(f"unknown key {key!r} in [{sec}]")
                continue
            try:
                values[key] = _convert(key, raw)
            except (ValueError, ConfigError) as exc:
                problems.append(f"bad value for {key}: {raw!r} ({exc})")
    if "omega" not in values:
        problems.append("omega missing")
    if problems:
        raise ConfigError(f"{source}: " + "; ".join(problems))
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_config(path) -> RunConfig:
    path = Path(path)
    return parse_config_text(path.read_text(), source=str(path))
