"""Frequency-domain response of the single-sided cavity with and without the dot.

Every formula is evaluated on the offset ``x = omega - omega_p`` so that the
~1e15 rad/s carrier never enters a subtraction against the ~1e9-1e12 rad/s
linewidths.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .specs import C_LIGHT, CavitySpec, ComplexReflectance, ExcitonSpec


class SingularResponseError(ArithmeticError):
    pass


class PhaseShift(NamedTuple):
    d_theta: float
    large_detuning_valid: bool


class EffectiveCavity(NamedTuple):
    omega_p_eff: np.ndarray | float
    gamma_minus: np.ndarray | float
    gamma_plus: np.ndarray | float


def vacuum_rabi(cavity: CavitySpec, gamma_rad: float) -> float:
    """Vacuum Rabi frequency from the exciton radiative rate.

    ``Omega**2 = 2*pi*c**3 * gamma_rad / (n0**3 * V_cav * omega_p**2)``
    """
    if not gamma_rad > 0:
        raise ValueError(f"gamma_rad must be positive, got {gamma_rad}")
    omega2 = 2 * math.pi * C_LIGHT**3 * gamma_rad / (cavity.n0**3 * cavity.v_cav * cavity.omega_p**2)
    return math.sqrt(omega2)


def _offset(omega, cavity: CavitySpec):
    return np.asarray(omega, dtype=float) - cavity.omega_p


def _wrap(value) -> ComplexReflectance:
    if np.ndim(value) == 0:
        return ComplexReflectance(complex(value))
    return ComplexReflectance(value)


def cold_reflectance_offset(x, gamma_p: float):
    x = np.asarray(x, dtype=float)
    half = 0.5j * gamma_p
    return -(x - half) / (x + half)


def coupled_reflectance_offset(x, gamma_p: float, detuning: float, gamma_ex: float,
                               omega_rabi: float, sigma_z: float = -1.0):
    """Coupled reflectance on the cavity-offset axis ``x``.

    ``r = -[(x - i g_p/2) E + Omega**2 sigma_z/4] / [(x + i g_p/2) E + Omega**2 sigma_z/4]``
    with ``E = x - detuning + i g_ex/2``. This is the steady state of the
    linearised Langevin equations; see :mod:`faraday_qnd.dynamics`.
    """
    x = np.asarray(x, dtype=float)
    e = (x - detuning) + 0.5j * gamma_ex
    s = 0.25 * omega_rabi**2 * sigma_z
    if s == 0:
        # exciton factor cancels exactly
        return np.broadcast_to(cold_reflectance_offset(x, gamma_p), np.shape(e)).copy()
    num = (x - 0.5j * gamma_p) * e + s
    den = (x + 0.5j * gamma_p) * e + s
    if np.any(np.abs(den) < 1e-300):
        raise SingularResponseError("reflectance denominator vanishes")
    return -num / den


def cold_reflectance(omega, cavity: CavitySpec) -> ComplexReflectance:
    """Reflectance of the empty cavity, unit modulus for all ``omega``."""
    return _wrap(cold_reflectance_offset(_offset(omega, cavity), cavity.gamma_p))


def _check_sigma_z(sigma_z: float) -> None:
    if not -1.0 <= sigma_z <= 0.0:
        raise ValueError(f"sigma_z must lie in [-1, 0], got {sigma_z}")


def coupled_reflectance(omega, cavity: CavitySpec, exciton: ExcitonSpec,
                        sigma_z: float = -1.0) -> ComplexReflectance:
    """Reflectance of the allowed circular polarization with the dot in place.

    ``sigma_z = -1`` is the empty-exciton (ground-state) dot; ``sigma_z = 0``
    decouples the dot and returns the cold-cavity response.
    """
    _check_sigma_z(sigma_z)
    r = coupled_reflectance_offset(
        _offset(omega, cavity), cavity.gamma_p, exciton.detuning(cavity),
        exciton.gamma_ex, exciton.omega_rabi, sigma_z,
    )
    return _wrap(r)


def absorption_offset(x, gamma_p: float, detuning, gamma_ex: float,
                      omega_rabi: float, sigma_z: float = -1.0):
    x = np.asarray(x, dtype=float)
    e = (x - detuning) + 0.5j * gamma_ex
    den = (x + 0.5j * gamma_p) * e + 0.25 * omega_rabi**2 * sigma_z
    return -sigma_z * omega_rabi**2 * gamma_p * gamma_ex / (4.0 * np.abs(den) ** 2)


def absorption(omega, cavity: CavitySpec, exciton: ExcitonSpec, sigma_z: float = -1.0):
    """Absorbed fraction ``1 - |r|**2`` evaluated without cancellation.

    ``|D|**2 - |N|**2`` reduces to ``-sigma_z Omega**2 g_p g_ex / 4``, so the
    result is exact even when ``|r|`` sits within 1e-15 of one.
    """
    _check_sigma_z(sigma_z)
    out = absorption_offset(_offset(omega, cavity), cavity.gamma_p, exciton.detuning(cavity),
                            exciton.gamma_ex, exciton.omega_rabi, sigma_z)
    return float(out) if np.ndim(out) == 0 else out


def effective_cavity_params(omega, cavity: CavitySpec, exciton: ExcitonSpec) -> EffectiveCavity:
    """Dot-dressed resonance and asymmetric linewidths seen by the probe.

    Valid for ``sigma_z = -1``. The exciton pulls the resonance by a dispersive
    Lorentzian and adds an absorptive Lorentzian to the linewidth: the
    denominator gets ``gamma_plus``, the numerator ``gamma_minus``.
    """
    x = _offset(omega, cavity)
    u = x - exciton.detuning(cavity)
    lorentz = 0.25 * exciton.omega_rabi**2 / (u**2 + (0.5 * exciton.gamma_ex) ** 2)
    shift = lorentz * u
    broad = lorentz * exciton.gamma_ex
    omega_eff = cavity.omega_p + shift
    g_minus = cavity.gamma_p - broad
    g_plus = cavity.gamma_p + broad
    if np.ndim(x) == 0:
        return EffectiveCavity(float(omega_eff), float(g_minus), float(g_plus))
    return EffectiveCavity(omega_eff, g_minus, g_plus)


def reflectance_from_effective(omega, cavity: CavitySpec, exciton: ExcitonSpec) -> ComplexReflectance:
    """Rebuild ``r(omega)`` from :func:`effective_cavity_params`."""
    x = _offset(omega, cavity)
    u = x - exciton.detuning(cavity)
    lorentz = 0.25 * exciton.omega_rabi**2 / (u**2 + (0.5 * exciton.gamma_ex) ** 2)
    # omega - omega_p_eff, kept on the offset axis
    y = x - lorentz * u
    broad = lorentz * exciton.gamma_ex
    r = -(y - 0.5j * (cavity.gamma_p - broad)) / (y + 0.5j * (cavity.gamma_p + broad))
    return _wrap(r)


def dispersive_shift(cavity: CavitySpec, exciton: ExcitonSpec) -> float:
    """Large-detuning resonance pull ``Omega**2 / (4 Delta)`` (resonance moves down)."""
    delta = exciton.detuning(cavity)
    if delta == 0:
        raise ValueError("dispersive shift undefined at zero detuning")
    return exciton.omega_rabi**2 / (4.0 * delta)


def large_detuning_valid(cavity: CavitySpec, exciton: ExcitonSpec) -> bool:
    delta = exciton.detuning(cavity)
    return delta > 10.0 * max(0.5 * exciton.gamma_ex, exciton.omega_rabi)


def faraday_phase_shift(cavity: CavitySpec, exciton: ExcitonSpec) -> PhaseShift:
    """Spin-induced phase difference at the cavity resonance, large-detuning limit.

    ``d_theta = Omega**2 Q / (Delta omega_p)``. Only a blue exciton
    (``Delta > 0``) is covered by this limit.
    """
    delta = exciton.detuning(cavity)
    if delta <= 0:
        raise ValueError(f"phase-shift formula needs omega_ex > omega_p, got detuning {delta:g}")
    d_theta = exciton.omega_rabi**2 * cavity.q_factor / (delta * cavity.omega_p)
    return PhaseShift(d_theta, large_detuning_valid(cavity, exciton))


def exact_phase_difference(omega, cavity: CavitySpec, exciton: ExcitonSpec, sigma_z: float = -1.0):
    """``arg r - arg r0`` from the full expressions, on the principal branch.

    Angles are subtracted rather than taking ``arg(r / r0)`` so the result is
    exactly zero wherever ``r == r0``.
    """
    r = coupled_reflectance(omega, cavity, exciton, sigma_z).value
    r0 = cold_reflectance(omega, cavity).value
    out = np.angle(r) - np.angle(r0)
    out = np.where(out > np.pi, out - 2 * np.pi, np.where(out <= -np.pi, out + 2 * np.pi, out))
    return float(out) if np.ndim(out) == 0 else out


def unwrap_phase(phase) -> np.ndarray:
    return np.unwrap(np.asarray(phase, dtype=float))
