"""QND readout conditions and the parameter regions where all of them hold.

Four conditions are checked, each as a bound-normalised margin (pass iff
margin > 1):

* ``a`` - spin signal above homodyne shot noise,
* ``b`` - fewer than one real exciton excitation per integration window,
* ``c`` - integration longer than the cavity lifetime,
* ``d`` - spin lifetime longer than the integration window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .reflectance import (
    absorption,
    absorption_offset,
    coupled_reflectance_offset,
    coupled_reflectance,
    exact_phase_difference,
    large_detuning_valid,
)
from .specs import CavitySpec, ExcitonSpec, ProbeSpec

BOUNDARY_TOL = 1e-9
DEFAULT_SPIN_LIFETIME = 100e-9
N_EX_WARNING = 0.1
DEFAULT_N_EX = (0.1, 0.01, 0.001)


class GridError(ValueError):
    pass


# --- signal and noise -------------------------------------------------------

def signal_flux(probe: ProbeSpec, d_theta: float, r_bar: float) -> float:
    """Homodyne signal from one spin, in photons/s: ``N_in sin(d_theta/2) r_bar``."""
    return probe.n_in * math.sin(0.5 * d_theta) * r_bar


def sql_flux(probe: ProbeSpec) -> float:
    """Shot-noise floor ``sqrt(N_in / tau)`` of balanced homodyne detection."""
    return math.sqrt(probe.n_in / probe.tau)


def snr(probe: ProbeSpec, d_theta: float, r_bar: float) -> float:
    noise = sql_flux(probe)
    return signal_flux(probe, d_theta, r_bar) / noise if noise > 0 else 0.0


# --- margins ----------------------------------------------------------------

def condition_a(probe: ProbeSpec, r_mag: float, d_theta: float) -> float:
    """Shot-noise margin ``N_in tau (|r| sin(d_theta/2))**2``."""
    if d_theta == 0 or r_mag == 0:
        return 0.0
    return probe.photons * (r_mag * math.sin(0.5 * d_theta)) ** 2


def condition_b(probe: ProbeSpec, r_mag: float | None = None, *, loss: float | None = None) -> float:
    """Real-excitation margin ``1 / ((1 - |r|**2) N_in tau)``.

    Pass ``loss = 1 - |r|**2`` directly when it is known more accurately than
    ``r_mag`` (see :func:`faraday_qnd.reflectance.absorption`).
    """
    if loss is None:
        if r_mag is None:
            raise TypeError("condition_b needs r_mag or loss")
        loss = 1.0 - r_mag**2
    absorbed = loss * probe.photons
    if loss <= 0 or absorbed <= 0:
        return math.inf
    return 1.0 / absorbed


def condition_c(probe: ProbeSpec, cavity: CavitySpec) -> float:
    return probe.tau * cavity.gamma_p


def condition_c_q_form(probe: ProbeSpec, cavity: CavitySpec) -> float:
    """Same margin written as ``tau / (Q / omega_p)``."""
    return probe.tau / (cavity.q_factor / cavity.omega_p)


def condition_d(probe: ProbeSpec, spin_lifetime: float = DEFAULT_SPIN_LIFETIME) -> float:
    if not spin_lifetime > 0:
        raise ValueError(f"spin_lifetime must be positive, got {spin_lifetime}")
    return spin_lifetime / probe.tau


# --- large-detuning bookkeeping ---------------------------------------------

class ExcitonOccupation(NamedTuple):
    n_ex: float
    cavity_photons: float
    large_detuning_valid: bool


def exciton_occupation(probe: ProbeSpec, cavity: CavitySpec, exciton: ExcitonSpec) -> ExcitonOccupation:
    """Steady-state exciton population ``Omega**2 Q N_in / (Delta**2 omega_p)``.

    Also returns the intracavity photon number ``4 Q N_in / omega_p`` on
    resonance, so that ``n_ex = Omega**2 / (4 Delta**2) * cavity_photons``.
    """
    delta = exciton.detuning(cavity)
    if delta <= 0:
        raise ValueError(f"exciton occupation formula needs omega_ex > omega_p, got detuning {delta:g}")
    photons = 4.0 * cavity.q_factor * probe.n_in / cavity.omega_p
    n_ex = exciton.omega_rabi**2 * cavity.q_factor * probe.n_in / (delta**2 * cavity.omega_p)
    return ExcitonOccupation(n_ex, photons, large_detuning_valid(cavity, exciton))


def large_detuning_excitations(gamma_ex: float, n_ex: float, tau: float) -> float:
    """Expected real excitations ``gamma_ex n_ex tau`` during one window."""
    return gamma_ex * n_ex * tau


def critical_linewidth(exciton: ExcitonSpec) -> float:
    """Largest cavity linewidth ``Omega**2 / (4 gamma_ex)`` that admits a solution."""
    if not exciton.gamma_ex > 0:
        raise ValueError("critical linewidth needs gamma_ex > 0")
    return exciton.omega_rabi**2 / (4.0 * exciton.gamma_ex)


def critical_q(cavity: CavitySpec, exciton: ExcitonSpec) -> float:
    return cavity.omega_p / critical_linewidth(exciton)


@dataclass(frozen=True)
class TauWindow:
    tau_min_a: float
    tau_max_b: float
    tau_min_c: float

    @property
    def lower(self) -> float:
        return max(self.tau_min_a, self.tau_min_c)

    @property
    def upper(self) -> float:
        return self.tau_max_b

    @property
    def is_empty(self) -> bool:
        return not self.lower < self.upper

    def contains(self, tau: float) -> bool:
        return self.lower < tau < self.upper


def tau_bounds_large_detuning(cavity: CavitySpec, exciton: ExcitonSpec, n_ex: float) -> TauWindow:
    """Integration-time window at fixed exciton population (dispersive limit)."""
    if not 0 < n_ex < 1:
        raise ValueError(f"n_ex must lie in (0, 1), got {n_ex}")
    if exciton.omega_rabi <= 0 or exciton.gamma_ex <= 0:
        raise ValueError("tau bounds need omega_rabi > 0 and gamma_ex > 0")
    q, wp = cavity.q_factor, cavity.omega_p
    return TauWindow(
        tau_min_a=4.0 * wp / (exciton.omega_rabi**2 * n_ex * q),
        tau_max_b=1.0 / (exciton.gamma_ex * n_ex),
        tau_min_c=q / wp,
    )


# --- single-point report ----------------------------------------------------

@dataclass(frozen=True)
class ConditionResult:
    name: str
    margin: float

    @property
    def passed(self) -> bool:
        return self.margin > 1.0

    @property
    def boundary(self) -> bool:
        return abs(self.margin - 1.0) <= BOUNDARY_TOL

    def to_dict(self) -> dict:
        return {"margin": self.margin, "passed": self.passed, "boundary": self.boundary}


@dataclass(frozen=True)
class FeasibilityReport:
    cond_a: ConditionResult
    cond_b: ConditionResult
    cond_c: ConditionResult
    cond_d: ConditionResult
    n_ex: float | None
    d_theta: float
    r_mag: float
    snr: float
    spin_lifetime: float
    large_detuning_valid: bool
    warnings: tuple[str, ...] = ()

    @property
    def conditions(self) -> tuple[ConditionResult, ...]:
        return (self.cond_a, self.cond_b, self.cond_c, self.cond_d)

    @property
    def feasible(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def feasible_without_d(self) -> bool:
        return all(c.passed for c in self.conditions[:3])

    @property
    def binding(self) -> str:
        """Condition with the smallest margin."""
        return min(self.conditions, key=lambda c: c.margin).name

    @property
    def binding_without_d(self) -> str:
        return min(self.conditions[:3], key=lambda c: c.margin).name

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "feasible_without_d": self.feasible_without_d,
            "binding": self.binding,
            "binding_without_d": self.binding_without_d,
            "conditions": {c.name: c.to_dict() for c in self.conditions},
            "n_ex": self.n_ex,
            "d_theta": self.d_theta,
            "r_mag": self.r_mag,
            "snr": self.snr,
            "spin_lifetime": self.spin_lifetime,
            "large_detuning_valid": self.large_detuning_valid,
            "warnings": list(self.warnings),
        }


def assess(cavity: CavitySpec, exciton: ExcitonSpec, probe: ProbeSpec,
           spin_lifetime: float = DEFAULT_SPIN_LIFETIME) -> FeasibilityReport:
    """Evaluate conditions (a)-(d) at one operating point.

    ``|r|`` and the phase difference come from the full coupled reflectance at
    the probe frequency; ``n_ex`` from the dispersive formula.
    """
    r = coupled_reflectance(probe.omega, cavity, exciton, probe.sigma_z)
    r_mag = r.magnitude
    d_theta = exact_phase_difference(probe.omega, cavity, exciton, probe.sigma_z)
    loss = absorption(probe.omega, cavity, exciton, probe.sigma_z)
    notes = []
    try:
        occ = exciton_occupation(probe, cavity, exciton)
        n_ex, valid = occ.n_ex, occ.large_detuning_valid
        if n_ex > N_EX_WARNING:
            notes.append(f"n_ex = {n_ex:.3g} exceeds {N_EX_WARNING}; linearisation sigma_z ~ -1 is doubtful")
    except ValueError:
        n_ex, valid = None, False
        notes.append("exciton below the cavity resonance; dispersive n_ex not defined")
    if not valid:
        notes.append("large-detuning approximation not valid")
    r_bar = 0.5 * (r_mag + 1.0)
    return FeasibilityReport(
        cond_a=ConditionResult("a", condition_a(probe, r_mag, d_theta)),
        cond_b=ConditionResult("b", condition_b(probe, loss=loss)),
        cond_c=ConditionResult("c", condition_c(probe, cavity)),
        cond_d=ConditionResult("d", condition_d(probe, spin_lifetime)),
        n_ex=n_ex,
        d_theta=d_theta,
        r_mag=r_mag,
        snr=snr(probe, d_theta, r_bar),
        spin_lifetime=spin_lifetime,
        large_detuning_valid=valid,
        warnings=tuple(notes),
    )


# --- grids ------------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    name: str
    values: np.ndarray
    scale: str = "lin"

    @classmethod
    def from_range(cls, name: str, lo: float, hi: float, count: int, scale: str = "log") -> "Axis":
        if count < 2 or not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise GridError(f"degenerate axis {name}: {lo}..{hi} with {count} points")
        if scale == "log":
            if lo <= 0:
                raise GridError(f"log axis {name} needs a positive lower bound")
            vals = np.logspace(math.log10(lo), math.log10(hi), count)
        elif scale == "lin":
            vals = np.linspace(lo, hi, count)
        else:
            raise GridError(f"unknown axis scale {scale!r}")
        return cls(name, vals, scale)

    @classmethod
    def parse(cls, spec: str) -> "Axis":
        """Build from ``name:min:max:count:lin|log``."""
        parts = spec.split(":")
        if len(parts) != 5:
            raise GridError(f"grid spec must be name:min:max:count:lin|log, got {spec!r}")
        name, lo, hi, count, scale = parts
        try:
            return cls.from_range(name, float(lo), float(hi), int(count), scale)
        except ValueError as exc:
            if isinstance(exc, GridError):
                raise
            raise GridError(f"bad grid spec {spec!r}: {exc}") from None

    @classmethod
    def explicit(cls, name: str, values: Sequence[float]) -> "Axis":
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise GridError(f"axis {name} needs at least one value")
        return cls(name, vals, "list")

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class RegionGrid:
    """Margins on a rectangular grid plus analytic boundary polylines.

    Arrays in ``margins`` and ``feasible`` have shape
    ``tuple(len(ax) for ax in axes)``.
    """

    axes: list[Axis]
    margins: dict[str, np.ndarray]
    feasible: np.ndarray
    boundaries: dict[str, np.ndarray] = field(default_factory=dict)
    extra: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.axes)

    @property
    def boundary_cells(self) -> np.ndarray:
        near = np.zeros(self.shape, dtype=bool)
        for m in self.margins.values():
            near |= np.abs(m - 1.0) <= BOUNDARY_TOL
        return near

    def axis(self, name: str) -> Axis:
        for ax in self.axes:
            if ax.name == name:
                return ax
        raise KeyError(name)


def _mesh(*axes: Axis):
    return np.meshgrid(*[ax.values for ax in axes], indexing="ij")


def default_detuning_axes() -> list[Axis]:
    return [
        Axis.from_range("detuning", 1.0, 1e6, 601, "log"),
        Axis.from_range("photons", 1e2, 1e18, 321, "log"),
    ]


def detuning_bounds(cavity: CavitySpec, exciton: ExcitonSpec, n_in: float, detuning_norm):
    """Photon-number bounds ``N_in tau`` versus normalised detuning.

    The dot is placed at ``Delta = x * gamma_ex / 2`` above a cavity probed on
    its bare resonance. Returns ``(a_lower, b_upper, c_lower, |r|, d_theta)``.
    """
    x = np.asarray(detuning_norm, dtype=float)
    delta = x * 0.5 * exciton.gamma_ex
    gp, gex, om = cavity.gamma_p, exciton.gamma_ex, exciton.omega_rabi
    # probe parked on the bare resonance: offset 0, and r0 = 1 there
    r = coupled_reflectance_offset(0.0, gp, delta, gex, om, -1.0)
    r_mag = np.abs(r)
    d_theta = np.angle(r)
    loss = absorption_offset(0.0, gp, delta, gex, om, -1.0)
    with np.errstate(divide="ignore"):
        a_lower = 1.0 / (r_mag * np.sin(0.5 * d_theta)) ** 2
        b_upper = np.where(loss > 0, 1.0 / loss, np.inf)
    c_lower = np.full_like(x, n_in / gp)
    return a_lower, b_upper, c_lower, r_mag, d_theta


def sweep_detuning(cavity: CavitySpec, exciton: ExcitonSpec, probe_power: float,
                   axes: Sequence[Axis] | None = None) -> RegionGrid:
    """Region in the (normalised detuning, photon number) plane at fixed power.

    ``exciton.omega_ex`` is ignored; the detuning is the swept axis. The probe
    sits at ``cavity.omega_p``. Condition (b) uses the exact absorbed fraction.
    """
    axes = list(axes) if axes is not None else default_detuning_axes()
    if len(axes) != 2 or axes[0].name != "detuning" or axes[1].name not in ("photons", "tau"):
        raise GridError("detuning sweep needs axes (detuning, photons|tau)")
    if np.any(axes[0].values <= 0):
        raise GridError("normalised detuning must be positive")
    probe = ProbeSpec.from_power(cavity.omega_p, probe_power, tau=1.0)
    n_in = probe.n_in
    if n_in <= 0:
        raise GridError("probe power must be positive")
    a_lo, b_hi, c_lo, r_mag, d_theta = detuning_bounds(cavity, exciton, n_in, axes[0].values)
    y = axes[1].values
    photons = y if axes[1].name == "photons" else y * n_in
    with np.errstate(divide="ignore"):
        ma = photons[None, :] / a_lo[:, None]
        mb = b_hi[:, None] / photons[None, :]
        mc = photons[None, :] / c_lo[:, None]
    margins = {"a": ma, "b": mb, "c": mc}
    feasible = (ma > 1) & (mb > 1) & (mc > 1)
    x = axes[0].values
    boundaries = {
        "a": np.column_stack([x, a_lo]),
        "b": np.column_stack([x, b_hi]),
        "c": np.column_stack([x, c_lo]),
    }
    to_y = (lambda v: v) if axes[1].name == "photons" else (lambda v: v / n_in)
    for key in boundaries:
        boundaries[key][:, 1] = to_y(boundaries[key][:, 1])
    return RegionGrid(
        axes=axes,
        margins=margins,
        feasible=feasible,
        boundaries=boundaries,
        extra={"r_mag": r_mag, "d_theta": d_theta},
        meta={"n_in": n_in, "probe_power": probe_power, "gamma_p": cavity.gamma_p,
              "critical_linewidth": critical_linewidth(exciton)},
    )


def feasible_detuning_threshold(cavity: CavitySpec, exciton: ExcitonSpec, probe_power: float,
                                lo: float = 1.0, hi: float = 1e7, samples: int = 2001) -> float | None:
    """Smallest normalised detuning at which some ``N_in tau`` satisfies (a)-(c).

    Scans log-spaced detunings, then refines the first sign change of
    ``log(b_upper / max(a_lower, c_lower))`` by Brent's method. ``None`` if no
    detuning in ``[lo, hi]`` admits a solution.
    """
    n_in = ProbeSpec.from_power(cavity.omega_p, probe_power, tau=1.0).n_in

    def gap(x):
        a, b, c, _, _ = detuning_bounds(cavity, exciton, n_in, x)
        return np.log(b) - np.log(np.maximum(a, c))

    xs = np.logspace(math.log10(lo), math.log10(hi), samples)
    g = gap(xs)
    ok = np.flatnonzero(g > 0)
    if ok.size == 0:
        return None
    i = ok[0]
    if i == 0:
        return float(xs[0])
    return float(brentq(lambda x: float(gap(np.array([x]))[0]), xs[i - 1], xs[i], xtol=1e-12, rtol=1e-12))


def default_tau_q_axes() -> list[Axis]:
    return [
        Axis.from_range("q", 1e2, 1e7, 200, "log"),
        Axis.from_range("tau", 1e-12, 1e-6, 200, "log"),
    ]


def sweep_tau_q(cavity_template: CavitySpec, exciton: ExcitonSpec,
                n_ex_list: Sequence[float] = DEFAULT_N_EX,
                axes: Sequence[Axis] | None = None) -> RegionGrid:
    """Integration time versus cavity Q at fixed exciton population.

    Uses the dispersive-limit bounds of :func:`tau_bounds_large_detuning`; the
    template supplies ``omega_p`` and Q is swept. Axes of the returned grid are
    ``(n_ex, q, tau)``; ``extra['union']`` is the (q, tau) mask where any
    population works.
    """
    axes = list(axes) if axes is not None else default_tau_q_axes()
    if len(axes) != 2 or axes[0].name != "q" or axes[1].name != "tau":
        raise GridError("tau-q sweep needs axes (q, tau)")
    if np.any(axes[0].values <= 0) or np.any(axes[1].values <= 0):
        raise GridError("q and tau must be positive")
    n_ex = np.asarray(n_ex_list, dtype=float)
    if n_ex.size == 0 or np.any((n_ex <= 0) | (n_ex >= 1)):
        raise GridError("each n_ex must lie in (0, 1)")
    om, gex = exciton.omega_rabi, exciton.gamma_ex
    if om <= 0 or gex <= 0:
        raise GridError("tau-q sweep needs omega_rabi > 0 and gamma_ex > 0")
    wp = cavity_template.omega_p
    nax = Axis.explicit("n_ex", n_ex)
    n, q, tau = _mesh(nax, axes[0], axes[1])
    ma = tau * om**2 * n * q / (4.0 * wp)
    mb = 1.0 / (gex * n * tau)
    mc = tau * wp / q
    feasible = (ma > 1) & (mb > 1) & (mc > 1)

    qv = axes[0].values
    boundaries: dict[str, np.ndarray] = {"c": np.column_stack([qv, qv / wp])}
    q_crit = 4.0 * wp * gex / om**2
    tv = axes[1].values
    boundaries["critical"] = np.array([[q_crit, tv[0]], [q_crit, tv[-1]]])
    for val in n_ex:
        tag = f"n_ex={float(val)!r}"
        boundaries[f"a:{tag}"] = np.column_stack([qv, 4.0 * wp / (om**2 * val * qv)])
        tb = 1.0 / (gex * val)
        boundaries[f"b:{tag}"] = np.array([[qv[0], tb], [qv[-1], tb]])
        boundaries[f"triangle:{tag}"] = triangle_vertices(wp, exciton, val)
    return RegionGrid(
        axes=[nax, axes[0], axes[1]],
        margins={"a": ma, "b": mb, "c": mc},
        feasible=feasible,
        boundaries=boundaries,
        extra={"union": feasible.any(axis=0)},
        meta={"omega_p": wp, "critical_q": q_crit, "critical_linewidth": critical_linewidth(exciton)},
    )


def triangle_vertices(omega_p: float, exciton: ExcitonSpec, n_ex: float) -> np.ndarray:
    """Corners (Q, tau) of the admissible triangle, closed polygon.

    Apex (a)&(b) sits at the critical Q for every ``n_ex``; (b)&(c) at
    ``Q = omega_p / (gamma_ex n_ex)``; (a)&(c) at ``Q = 2 omega_p / (Omega sqrt(n_ex))``.
    """
    om, gex = exciton.omega_rabi, exciton.gamma_ex
    tb = 1.0 / (gex * n_ex)
    q_ab = 4.0 * omega_p * gex / om**2
    q_bc = omega_p / (gex * n_ex)
    q_ac = 2.0 * omega_p / (om * math.sqrt(n_ex))
    pts = [(q_ab, tb), (q_bc, tb), (q_ac, q_ac / omega_p), (q_ab, tb)]
    return np.array(pts)
