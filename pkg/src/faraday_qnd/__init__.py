"""Faraday-rotation QND readout of a single quantum-dot spin in a microcavity."""

from .specs import CavitySpec, ComplexReflectance, ExcitonSpec, JonesVector, ProbeSpec, Spin
from .reflectance import (
    absorption,
    cold_reflectance,
    coupled_reflectance,
    dispersive_shift,
    effective_cavity_params,
    exact_phase_difference,
    faraday_phase_shift,
    reflectance_from_effective,
    vacuum_rabi,
)
from .polarization import reflected_jones, rotated_amplitude, signal_amplitude_first_order
from .feasibility import (
    FeasibilityReport,
    RegionGrid,
    assess,
    condition_a,
    condition_b,
    condition_c,
    condition_d,
    critical_linewidth,
    exciton_occupation,
    signal_flux,
    sql_flux,
    sweep_detuning,
    sweep_tau_q,
    tau_bounds_large_detuning,
)
from .dynamics import integrate_langevin, steady_state_reflectance
from .readout import readout_fidelity_mc, real_excitation_counter

__version__ = "0.1.0"
