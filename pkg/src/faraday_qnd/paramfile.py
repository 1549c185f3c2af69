"""Flat ``key = value`` parameter files.

Frequency suffixes ``Hz kHz MHz GHz THz`` scale by 1, 1e3, 1e6, 1e9, 1e12 and
give angular frequency (rad/s) directly: "10 GHz" means 1e10 rad/s. ``nm`` on
``omega_p`` or ``omega_ex`` is a vacuum wavelength converted with
``omega = 2 pi c / lambda``. Times take ``s ms us ns ps fs`` and powers
``W mW uW nW``. Unknown keys are errors.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .feasibility import DEFAULT_SPIN_LIFETIME
from .specs import C_LIGHT, CavitySpec, ExcitonSpec, ProbeSpec


class ConfigError(ValueError):
    pass


FREQ_UNITS = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15}
POWER_UNITS = {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "nW": 1e-9}

FREQ_KEYS = {"omega_p", "gamma_p", "omega_ex", "gamma_ex", "gamma_rad", "omega_rabi", "omega_probe"}
WAVELENGTH_KEYS = {"omega_p", "omega_ex"}
TIME_KEYS = {"tau", "spin_lifetime"}
POWER_KEYS = {"power_w"}
PLAIN_KEYS = {"q_factor", "v_cav", "n0", "n_in", "sigma_z"}
KNOWN_KEYS = FREQ_KEYS | TIME_KEYS | POWER_KEYS | PLAIN_KEYS
EXCLUSIVE = [("gamma_p", "q_factor"), ("power_w", "n_in")]

_VALUE_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-z]*)\s*$")

BUNDLED_PREFIX = "bundled:"


def parse_value(key: str, text: str) -> float:
    m = _VALUE_RE.match(text)
    if not m:
        raise ConfigError(f"{key}: cannot parse value {text!r}")
    number, unit = float(m.group(1)), m.group(2)
    if not unit:
        return number
    if unit in FREQ_UNITS and key in FREQ_KEYS:
        return number * FREQ_UNITS[unit]
    if unit == "nm" and key in WAVELENGTH_KEYS:
        if number <= 0:
            raise ConfigError(f"{key}: wavelength must be positive")
        return 2 * math.pi * C_LIGHT / (number * 1e-9)
    if unit in TIME_UNITS and key in TIME_KEYS:
        return number * TIME_UNITS[unit]
    if unit in POWER_UNITS and key in POWER_KEYS:
        return number * POWER_UNITS[unit]
    raise ConfigError(f"{key}: unit {unit!r} not allowed for this key")


def parse_text(text: str, source: str = "<string>") -> dict[str, float]:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = parse_value(key, val)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    for a, b in EXCLUSIVE:
        if a in values and b in values:
            raise ConfigError(f"{source}: keys {a!r} and {b!r} are mutually exclusive")
    return values


@dataclass
class ParameterSet:
    """Parsed parameter file; specs are built on demand."""

    values: dict[str, float]
    source: str = "<string>"
    _cache: dict = field(default_factory=dict, repr=False)

    def _need(self, *keys: str) -> None:
        missing = [k for k in keys if k not in self.values]
        if missing:
            raise ConfigError(f"{self.source}: missing keys {', '.join(missing)}")

    def get(self, key: str, default: float | None = None) -> float | None:
        return self.values.get(key, default)

    def cavity(self) -> CavitySpec:
        self._need("omega_p")
        if "gamma_p" not in self.values and "q_factor" not in self.values:
            raise ConfigError(f"{self.source}: need gamma_p or q_factor")
        kw = {k: self.values[k] for k in ("v_cav", "n0") if k in self.values}
        try:
            if "q_factor" in self.values:
                return CavitySpec.from_q(self.values["omega_p"], self.values["q_factor"], **kw)
            return CavitySpec(self.values["omega_p"], self.values["gamma_p"], **kw)
        except ValueError as exc:
            raise ConfigError(f"{self.source}: {exc}") from None

    def exciton(self) -> ExcitonSpec:
        self._need("omega_ex", "gamma_ex")
        v = self.values
        try:
            if "omega_rabi" in v:
                return ExcitonSpec(v["omega_ex"], v["gamma_ex"], v["omega_rabi"], gamma_rad=v.get("gamma_rad"))
            self._need("gamma_rad")
            return ExcitonSpec.from_radiative_rate(self.cavity(), v["omega_ex"], v["gamma_ex"], v["gamma_rad"])
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{self.source}: {exc}") from None

    def probe(self, tau: float | None = None) -> ProbeSpec:
        v = self.values
        omega = v.get("omega_probe", v.get("omega_p"))
        if omega is None:
            raise ConfigError(f"{self.source}: need omega_probe or omega_p")
        if tau is None:
            self._need("tau")
            tau = v["tau"]
        if "power_w" not in v and "n_in" not in v:
            raise ConfigError(f"{self.source}: need power_w or n_in")
        sigma_z = v.get("sigma_z", -1.0)
        try:
            if "power_w" in v:
                return ProbeSpec.from_power(omega, v["power_w"], tau, sigma_z)
            return ProbeSpec(omega, v["n_in"], tau, sigma_z)
        except ValueError as exc:
            raise ConfigError(f"{self.source}: {exc}") from None

    @property
    def spin_lifetime(self) -> float:
        return self.values.get("spin_lifetime", DEFAULT_SPIN_LIFETIME)


def loads(text: str, source: str = "<string>") -> ParameterSet:
    return ParameterSet(parse_text(text, source), source)


def load(path: str | Path) -> ParameterSet:
    """Read a parameter file; ``bundled:NAME`` loads ``NAME.params`` shipped with the package."""
    path = str(path)
    if path.startswith(BUNDLED_PREFIX):
        name = path[len(BUNDLED_PREFIX):]
        res = resources.files("faraday_qnd") / "data" / f"{name}.params"
        if not res.is_file():
            raise ConfigError(f"no bundled parameter set {name!r}")
        return loads(res.read_text(encoding="utf-8"), path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, path)


def dumps(values: dict[str, float]) -> str:
    return "".join(f"{k} = {v:.17g}\n" for k, v in values.items())
