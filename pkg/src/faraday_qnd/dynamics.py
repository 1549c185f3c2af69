"""Time-domain integration of the linearised cavity-exciton Langevin equations.

In the frame rotating at the probe frequency, with the dot inversion frozen
(``sigma_z = -1`` by default) and a constant coherent drive ``a_in``::

    da/dt     = -(i dp + g_p/2) a - (Omega/2) s + sqrt(g_p) a_in
    ds/dt     = -(i dx + g_ex/2) s - (Omega/2) sigma_z a
    a_out     = -a_in + sqrt(g_p) a

with ``dp = omega_p - omega`` and ``dx = omega_ex - omega``. ``a`` is
normalised so that ``|a|**2`` is the intracavity photon number and ``a_in``
so that ``|a_in|**2`` is the photon flux.

The system is linear with constant coefficients, so one classical RK4 step is
an affine map ``y -> P y + q``. The map is built by pushing basis vectors
through the four RK4 stages once, and long runs compose it by repeated
squaring; the result equals step-by-step RK4 up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .specs import CavitySpec, ExcitonSpec

STEP_FACTOR = 0.01


class StepSizeError(ValueError):
    pass


class InstabilityError(ArithmeticError):
    def __init__(self, step: int, message: str = "non-finite field amplitude"):
        super().__init__(f"{message} at step {step}")
        self.step = step


@dataclass(frozen=True)
class FieldState:
    a: complex
    sigma: complex
    t: float


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    a: np.ndarray
    sigma: np.ndarray
    a_out: np.ndarray
    drive: complex
    omega_probe: float
    dt: float

    def states(self) -> list[FieldState]:
        return [FieldState(complex(a), complex(s), float(t)) for t, a, s in zip(self.t, self.a, self.sigma)]

    @property
    def final_reflectance(self) -> complex:
        if self.drive == 0:
            raise ZeroDivisionError("reflectance undefined for zero drive")
        return complex(self.a_out[-1] / self.drive)


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def generator(cavity: CavitySpec, exciton: ExcitonSpec, omega_probe: float,
              sigma_z: float = -1.0) -> np.ndarray:
    """Rotating-frame coefficient matrix ``M`` of ``y' = M y + b``, ``y = (a, s)``."""
    if not -1.0 <= sigma_z <= 0.0:
        raise ValueError(f"sigma_z must lie in [-1, 0], got {sigma_z}")
    dp = cavity.omega_p - omega_probe
    dx = exciton.omega_ex - omega_probe
    half_om = 0.5 * exciton.omega_rabi
    return np.array([
        [-(1j * dp + 0.5 * cavity.gamma_p), -half_om],
        [-half_om * sigma_z, -(1j * dx + 0.5 * exciton.gamma_ex)],
    ], dtype=complex)


def max_rate(cavity: CavitySpec, exciton: ExcitonSpec, omega_probe: float) -> float:
    return max(
        abs(cavity.omega_p - omega_probe), abs(exciton.omega_ex - omega_probe),
        cavity.gamma_p, exciton.gamma_ex, exciton.omega_rabi,
    )


def max_step(cavity: CavitySpec, exciton: ExcitonSpec, omega_probe: float) -> float:
    return STEP_FACTOR / max_rate(cavity, exciton, omega_probe)


def rk4_affine_map(m: np.ndarray, b: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """``(P, q)`` with ``rk4_step(y) == P @ y + q`` for ``y' = m y + b``."""
    n = m.shape[0]
    rhs_h = lambda t, y: m @ y                 # noqa: E731
    rhs_b = lambda t, y: m @ y + b             # noqa: E731
    p = np.column_stack([rk4_step(rhs_h, 0.0, e, h) for e in np.eye(n, dtype=complex)])
    q = rk4_step(rhs_b, 0.0, np.zeros(n, dtype=complex), h)
    return p, q


def compose_power(p: np.ndarray, q: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The affine map ``y -> P y + q`` applied ``k`` times, by repeated squaring."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = p.shape[0]
    acc_p, acc_q = np.eye(n, dtype=complex), np.zeros(n, dtype=complex)
    base_p, base_q = p.copy(), q.copy()
    while k:
        if k & 1:
            acc_p, acc_q = base_p @ acc_p, base_p @ acc_q + base_q
        base_p, base_q = base_p @ base_p, base_p @ base_q + base_q
        k >>= 1
    return acc_p, acc_q


def _check_step(cavity, exciton, omega_probe, dt):
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    limit = max_step(cavity, exciton, omega_probe)
    if dt > limit * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:.3g} s exceeds the stability bound {limit:.3g} s")


def integrate_langevin(cavity: CavitySpec, exciton: ExcitonSpec, drive: complex,
                       omega_probe: float, t_end: float, dt: float | None = None,
                       a0: complex = 0j, sigma0: complex = 0j,
                       samples: int = 1001, sigma_z: float = -1.0) -> Trajectory:
    """RK4 integration from ``t = 0`` to ``t_end``.

    Parameters
    ----------
    drive : complex
        Input amplitude ``a_in`` in sqrt(photons/s), constant in time.
    dt : float, optional
        Step; defaults to the bound ``0.01 / max(|omega_p - omega|,
        |omega_ex - omega|, gamma_p, gamma_ex, Omega)``. Larger steps raise
        :class:`StepSizeError`.
    samples : int
        Number of output samples, evenly spaced in step count, including both
        end points. ``t_end`` is rounded to a whole number of steps.
    """
    if dt is None:
        dt = max_step(cavity, exciton, omega_probe)
    _check_step(cavity, exciton, omega_probe, dt)
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    n_steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    samples = max(2, min(samples, n_steps + 1))
    idx = np.unique(np.round(np.linspace(0, n_steps, samples)).astype(np.int64))

    m = generator(cavity, exciton, omega_probe, sigma_z)
    b = np.array([math.sqrt(cavity.gamma_p) * drive, 0.0], dtype=complex)
    p, q = rk4_affine_map(m, b, dt)

    ys = np.empty((len(idx), 2), dtype=complex)
    y = np.array([a0, sigma0], dtype=complex)
    ys[0] = y
    cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for j in range(1, len(idx)):
        k = int(idx[j] - idx[j - 1])
        if k not in cache:
            cache[k] = compose_power(p, q, k)
        pk, qk = cache[k]
        y = pk @ y + qk
        if not np.all(np.isfinite(y)):
            raise InstabilityError(int(idx[j]))
        ys[j] = y

    a, s = ys[:, 0], ys[:, 1]
    a_out = -drive + math.sqrt(cavity.gamma_p) * a
    return Trajectory(idx * dt, a, s, a_out, complex(drive), float(omega_probe), float(dt))


def settling_time(cavity: CavitySpec, exciton: ExcitonSpec, decades: float = 9.0) -> float:
    """Time for the slowest free mode to decay by ``10**-decades`` in amplitude.

    Uses the smaller of the two bare amplitude damping rates, ``g_p/2`` and
    ``g_ex/2`` (the latter ignored when zero).
    """
    rates = [0.5 * cavity.gamma_p] + ([0.5 * exciton.gamma_ex] if exciton.gamma_ex > 0 else [])
    return decades * math.log(10.0) / min(rates)


def steady_state_reflectance(cavity: CavitySpec, exciton: ExcitonSpec, omega_probes,
                             drive: complex = 1.0, t_end: float | None = None,
                             sigma_z: float = -1.0) -> np.ndarray:
    """``a_out / a_in`` after integrating each probe frequency to steady state."""
    t_end = settling_time(cavity, exciton) if t_end is None else t_end
    out = []
    for w in np.atleast_1d(np.asarray(omega_probes, dtype=float)):
        traj = integrate_langevin(cavity, exciton, drive, float(w), t_end, samples=2, sigma_z=sigma_z)
        out.append(traj.final_reflectance)
    return np.array(out)
