"""Parameter containers for the cavity, the quantum-dot exciton and the probe.

All frequencies and rates are angular (rad/s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import constants

C_LIGHT = constants.c
HBAR = constants.hbar


class Spin(str, Enum):
    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> int:
        return 1 if self is Spin.UP else -1


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class CavitySpec:
    """Single-sided microcavity mode.

    Parameters
    ----------
    omega_p : float
        Cavity resonance (rad/s).
    gamma_p : float
        Energy decay rate through the input mirror (rad/s).
    v_cav : float
        Optical mode volume (m^3).
    n0 : float
        Refractive index of the host.
    """

    omega_p: float
    gamma_p: float
    v_cav: float = 2e-20
    n0: float = 3.6

    def __post_init__(self):
        _require(self.omega_p > 0, f"omega_p must be positive, got {self.omega_p}")
        _require(self.gamma_p > 0, f"gamma_p must be positive, got {self.gamma_p}")
        _require(self.v_cav > 0, f"v_cav must be positive, got {self.v_cav}")
        _require(self.n0 >= 1, f"n0 must be >= 1, got {self.n0}")

    @classmethod
    def from_q(cls, omega_p: float, q_factor: float, **kwargs) -> "CavitySpec":
        _require(q_factor > 0, f"q_factor must be positive, got {q_factor}")
        return cls(omega_p=omega_p, gamma_p=omega_p / q_factor, **kwargs)

    @property
    def q_factor(self) -> float:
        return self.omega_p / self.gamma_p

    @property
    def lifetime(self) -> float:
        return 1.0 / self.gamma_p

    def with_q(self, q_factor: float) -> "CavitySpec":
        return CavitySpec.from_q(self.omega_p, q_factor, v_cav=self.v_cav, n0=self.n0)


@dataclass(frozen=True)
class ExcitonSpec:
    """Two-level exciton transition of the charged dot.

    ``omega_rabi`` may be given directly or derived from ``gamma_rad`` through
    :func:`faraday_qnd.reflectance.vacuum_rabi`; ``rabi_computed`` records which.
    A zero ``omega_rabi`` (uncoupled dot) and a zero ``gamma_ex`` (lossless
    dipole) are accepted as limiting cases.
    """

    omega_ex: float
    gamma_ex: float
    omega_rabi: float
    gamma_rad: float | None = None
    rabi_computed: bool = False

    def __post_init__(self):
        _require(self.omega_ex > 0, f"omega_ex must be positive, got {self.omega_ex}")
        _require(self.gamma_ex >= 0, f"gamma_ex must be non-negative, got {self.gamma_ex}")
        _require(self.omega_rabi >= 0, f"omega_rabi must be non-negative, got {self.omega_rabi}")
        if self.gamma_rad is not None:
            _require(self.gamma_rad > 0, f"gamma_rad must be positive, got {self.gamma_rad}")
        _require(
            not (self.rabi_computed and self.gamma_rad is None),
            "a computed Rabi frequency needs gamma_rad",
        )

    @classmethod
    def from_radiative_rate(
        cls, cavity: CavitySpec, omega_ex: float, gamma_ex: float, gamma_rad: float
    ) -> "ExcitonSpec":
        from .reflectance import vacuum_rabi

        return cls(
            omega_ex=omega_ex,
            gamma_ex=gamma_ex,
            omega_rabi=vacuum_rabi(cavity, gamma_rad),
            gamma_rad=gamma_rad,
            rabi_computed=True,
        )

    @classmethod
    def at_detuning(
        cls, cavity: CavitySpec, detuning: float, gamma_ex: float, omega_rabi: float
    ) -> "ExcitonSpec":
        """Exciton placed ``detuning`` rad/s above the cavity resonance."""
        return cls(omega_ex=cavity.omega_p + detuning, gamma_ex=gamma_ex, omega_rabi=omega_rabi)

    def detuning(self, cavity: CavitySpec) -> float:
        """Exciton-cavity detuning ``omega_ex - omega_p``."""
        return self.omega_ex - cavity.omega_p


@dataclass(frozen=True)
class ProbeSpec:
    """Probe beam: frequency, photon flux, integration time and dot inversion."""

    omega: float
    n_in: float
    tau: float
    sigma_z: float = -1.0

    def __post_init__(self):
        _require(self.omega > 0, f"probe omega must be positive, got {self.omega}")
        _require(self.n_in >= 0, f"n_in must be non-negative, got {self.n_in}")
        _require(self.tau > 0, f"tau must be positive, got {self.tau}")
        _require(-1.0 <= self.sigma_z <= 0.0, f"sigma_z must lie in [-1, 0], got {self.sigma_z}")

    @classmethod
    def from_power(cls, omega: float, power_w: float, tau: float, sigma_z: float = -1.0) -> "ProbeSpec":
        return cls(omega=omega, n_in=power_w / (HBAR * omega), tau=tau, sigma_z=sigma_z)

    @property
    def power(self) -> float:
        """Optical power in watts, ``hbar * omega * n_in``."""
        return HBAR * self.omega * self.n_in

    @property
    def photons(self) -> float:
        """Photon number delivered during one integration window."""
        return self.n_in * self.tau


@dataclass(frozen=True)
class ComplexReflectance:
    """Reflection coefficient for one circular polarization.

    ``value`` may be a scalar or an array (frequency sweep).
    """

    value: complex | np.ndarray

    @property
    def magnitude(self):
        return np.abs(self.value)

    @property
    def phase(self):
        # np.angle gives -pi for a negative real with signed-zero imaginary part
        ph = np.angle(self.value)
        if np.ndim(ph) == 0:
            return math.pi if ph == -math.pi else float(ph)
        return np.where(ph == -np.pi, np.pi, ph)

    def __complex__(self) -> complex:
        return complex(self.value)

    def unwrapped_phase(self) -> np.ndarray:
        return np.unwrap(np.atleast_1d(np.angle(self.value)))


@dataclass(frozen=True)
class JonesVector:
    x: complex
    y: complex = field(default=0j)

    @classmethod
    def x_polarized(cls, amplitude: complex = 1.0) -> "JonesVector":
        return cls(complex(amplitude), 0j)

    @property
    def norm2(self) -> float:
        return abs(self.x) ** 2 + abs(self.y) ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=complex)
