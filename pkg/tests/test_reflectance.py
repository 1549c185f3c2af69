import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from faraday_qnd import CavitySpec, ExcitonSpec
from faraday_qnd.reflectance import (
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


def langevin_linear_solve(omega, cav, exc, sigma_z=-1.0):
    """Oracle: solve the frequency-domain field equations as a 2x2 linear system."""
    # (a, s) e^{-i omega t}:  0 = M (a, s) + (sqrt(g) a_in, 0)
    m = np.array([
        [1j * (omega - cav.omega_p) - cav.gamma_p / 2, -exc.omega_rabi / 2],
        [-exc.omega_rabi * sigma_z / 2, 1j * (omega - exc.omega_ex) - exc.gamma_ex / 2],
    ])
    a_in = 1.0
    a, _ = np.linalg.solve(m, -np.array([math.sqrt(cav.gamma_p) * a_in, 0.0]))
    return -a_in + math.sqrt(cav.gamma_p) * a


# --- vacuum Rabi ----------------------------------------------------------------

def test_rabi_estimate():
    cav = CavitySpec(omega_p=2.1e15, gamma_p=2e12, v_cav=2e-20, n0=3.6)
    om = vacuum_rabi(cav, 2e9)
    assert abs(om - 3e11) / 3e11 < 0.05
    # hand evaluation: sqrt(2 pi c^3 * 2e9 / (3.6^3 * 2e-20 * 2.1e15^2)) = 2.868e11
    assert float(f"{om:.3g}") == 2.87e11


def test_rabi_sqrt_scaling():
    cav = CavitySpec(omega_p=2.1e15, gamma_p=2e12)
    assert vacuum_rabi(cav, 8e9) == pytest.approx(2 * vacuum_rabi(cav, 2e9), rel=1e-14)


@pytest.mark.parametrize("g", [0.0, -1.0])
def test_rabi_rejects_nonpositive(g):
    with pytest.raises(ValueError):
        vacuum_rabi(CavitySpec(2.1e15, 2e12), g)


# --- cold cavity ----------------------------------------------------------------

def test_cold_on_resonance(q850_cavity):
    r0 = cold_reflectance(q850_cavity.omega_p, q850_cavity)
    assert abs(r0.value - 1.0) < 1e-12


def test_cold_half_linewidth(q850_cavity):
    r0 = cold_reflectance(q850_cavity.omega_p + q850_cavity.gamma_p / 2, q850_cavity)
    assert abs(r0.value - 1j) < 1e-12
    assert r0.phase == pytest.approx(math.pi / 2, abs=1e-12)


@pytest.mark.parametrize("sign", [1, -1])
def test_cold_far_off_resonance(q850_cavity, sign):
    r0 = cold_reflectance(q850_cavity.omega_p + sign * 100 * q850_cavity.gamma_p, q850_cavity)
    assert abs(r0.value + 1) < 0.011
    assert abs(r0.phase - sign * math.pi) < 0.011


def test_cold_unitarity_sweep(q850_cavity):
    g = q850_cavity.gamma_p
    lin = np.linspace(-1e3 * g, 1e3 * g, 5000)
    log = np.logspace(-6, 4, 2500) * g
    x = np.concatenate([lin, log, -log])
    r0 = cold_reflectance(q850_cavity.omega_p + x, q850_cavity)
    assert x.size == 10_000
    assert np.max(np.abs(r0.magnitude - 1.0)) < 1e-12


def test_cold_phase_winds_once(q850_cavity):
    # arg r0 = 2 atan(2x / gamma_p): rises monotonically by 2 pi across the resonance
    g = q850_cavity.gamma_p
    x = np.linspace(-1e4 * g, 1e4 * g, 200_001)
    ph = cold_reflectance(q850_cavity.omega_p + x, q850_cavity).unwrapped_phase()
    assert np.all(np.diff(ph) > 0)
    assert ph[-1] - ph[0] == pytest.approx(2 * math.pi, abs=1e-3)
    oracle = 2 * np.arctan(2 * x / g)
    assert np.max(np.abs(ph - ph[100_000] - oracle)) < 1e-9


# --- coupled cavity -------------------------------------------------------------

def test_decoupled_matches_cold(q850_cavity, q850_exciton):
    w = q850_cavity.omega_p + np.linspace(-10, 10, 1000) * q850_cavity.gamma_p
    r = coupled_reflectance(w, q850_cavity, q850_exciton, sigma_z=0.0).value
    r0 = cold_reflectance(w, q850_cavity).value
    assert np.max(np.abs(r - r0)) < 1e-14


def test_triple_resonance_closed_form():
    cav = CavitySpec(2.1e15, 2e12)
    exc = ExcitonSpec(2.1e15, 1e10, 3e11)
    r = coupled_reflectance(2.1e15, cav, exc).value
    gg, om2 = cav.gamma_p * exc.gamma_ex, exc.omega_rabi**2
    assert r == pytest.approx((gg - om2) / (gg + om2), rel=1e-12)
    assert abs(r) < 1


@pytest.mark.parametrize("offset", np.linspace(-5, 5, 11))
def test_coupled_matches_linear_solve(q850_cavity, offset):
    exc = ExcitonSpec(q850_cavity.omega_p + 3e12, 4e11, 2e12)
    w = q850_cavity.omega_p + offset * q850_cavity.gamma_p
    r = coupled_reflectance(w, q850_cavity, exc).value
    assert r == pytest.approx(langevin_linear_solve(w, q850_cavity, exc), rel=1e-10)


@pytest.mark.parametrize("sigma_z", [-1.0, -0.5, -0.1])
def test_coupled_matches_linear_solve_partial_inversion(q850_cavity, sigma_z):
    exc = ExcitonSpec(q850_cavity.omega_p - 1e12, 5e11, 3e12)
    w = q850_cavity.omega_p + 0.7e12
    r = coupled_reflectance(w, q850_cavity, exc, sigma_z).value
    assert r == pytest.approx(langevin_linear_solve(w, q850_cavity, exc, sigma_z), rel=1e-10)


def test_phase_shift_formula_agrees(q850_cavity, q850_exciton):
    exact = exact_phase_difference(q850_cavity.omega_p, q850_cavity, q850_exciton)
    approx = faraday_phase_shift(q850_cavity, q850_exciton).d_theta
    assert abs(exact - approx) / approx < 0.05


def test_sigma_z_range_checked(q850_cavity, q850_exciton):
    with pytest.raises(ValueError):
        coupled_reflectance(q850_cavity.omega_p, q850_cavity, q850_exciton, sigma_z=0.2)


rates = st.floats(1e8, 1e13)


@settings(max_examples=300)
@given(
    gp=rates, gex=st.floats(0.0, 1e13), om=st.floats(0.0, 1e13),
    delta=st.floats(-1e14, 1e14), x=st.floats(-1e14, 1e14), sz=st.floats(-1.0, 0.0),
)
def test_passivity(gp, gex, om, delta, x, sz):
    cav = CavitySpec(2e15, gp)
    exc = ExcitonSpec(2e15 + delta, gex, om)
    r = coupled_reflectance(2e15 + x, cav, exc, sz)
    assert r.magnitude <= 1 + 1e-9


@settings(max_examples=200)
@given(gp=st.floats(1e10, 1e13), gex=st.floats(1e9, 1e12), om=st.floats(1e10, 1e12),
       delta=st.floats(-1e13, 1e13), x=st.floats(-1e13, 1e13))
def test_absorption_matches_modulus(gp, gex, om, delta, x):
    cav = CavitySpec(2e15, gp)
    exc = ExcitonSpec(2e15 + delta, gex, om)
    w = 2e15 + x
    loss = absorption(w, cav, exc)
    direct = 1 - coupled_reflectance(w, cav, exc).magnitude ** 2
    assert loss >= 0
    assert loss == pytest.approx(direct, abs=1e-12)


# --- effective cavity -----------------------------------------------------------

def test_reconstruction_sweep(q850_cavity, q850_exciton):
    w = q850_cavity.omega_p + np.linspace(-10, 10, 4001) * q850_cavity.gamma_p
    direct = coupled_reflectance(w, q850_cavity, q850_exciton).value
    rebuilt = reflectance_from_effective(w, q850_cavity, q850_exciton).value
    assert np.max(np.abs(rebuilt - direct) / np.abs(direct)) < 1e-10


def test_reconstruction_near_exciton():
    cav = CavitySpec(2e15, 1e12)
    exc = ExcitonSpec(2e15 + 5e11, 1e11, 4e11)
    w = 2e15 + np.linspace(-3e12, 3e12, 2001)
    direct = coupled_reflectance(w, cav, exc).value
    rebuilt = reflectance_from_effective(w, cav, exc).value
    assert np.max(np.abs(rebuilt - direct) / np.abs(direct)) < 1e-10


def test_effective_large_detuning_limit(q850_cavity, q850_exciton):
    wp_eff, gm, gpl = effective_cavity_params(q850_cavity.omega_p, q850_cavity, q850_exciton)
    shift = q850_exciton.omega_rabi**2 / (4 * 4e14)
    assert (wp_eff - q850_cavity.omega_p) == pytest.approx(-shift, rel=1e-6)
    assert gm == pytest.approx(q850_cavity.gamma_p, rel=1e-8)
    assert gpl == pytest.approx(q850_cavity.gamma_p, rel=1e-8)


def test_effective_probe_at_exciton(q850_cavity, q850_exciton):
    _, _, gpl = effective_cavity_params(q850_exciton.omega_ex, q850_cavity, q850_exciton)
    assert gpl - q850_cavity.gamma_p == pytest.approx(q850_exciton.omega_rabi**2 / q850_exciton.gamma_ex, rel=1e-10)


def test_dispersive_shift_value(q850_cavity, q850_exciton):
    # 9e22 / 1.6e15
    assert dispersive_shift(q850_cavity, q850_exciton) == pytest.approx(5.625e7, rel=1e-6)


# --- phase shift formula --------------------------------------------------------

def test_phase_shift_value():
    cav = CavitySpec.from_q(1.7e15, 1e3)
    exc = ExcitonSpec(1.7e15 + 4e14, 1e10, 3e11)
    ps = faraday_phase_shift(cav, exc)
    # 9e22 * 1e3 / (4e14 * 1.7e15) = 1.3235e-4
    assert ps.d_theta == pytest.approx(1.3235e-4, rel=1e-3)
    assert ps.large_detuning_valid


def test_phase_shift_scalings():
    cav = CavitySpec.from_q(1.7e15, 1e3)
    exc = ExcitonSpec(1.7e15 + 4e14, 1e10, 3e11)
    base = faraday_phase_shift(cav, exc).d_theta
    assert faraday_phase_shift(cav.with_q(1e4), exc).d_theta == pytest.approx(10 * base, rel=1e-12)
    far = ExcitonSpec(1.7e15 + 8e14, 1e10, 3e11)
    assert faraday_phase_shift(cav, far).d_theta == pytest.approx(base / 2, rel=1e-12)


def test_phase_shift_validity_flag():
    cav = CavitySpec(2e15, 1e12)
    near = ExcitonSpec(2e15 + 1e12, 1e10, 3e11)
    assert not faraday_phase_shift(cav, near).large_detuning_valid


@pytest.mark.parametrize("delta", [0.0, -4e14])
def test_phase_shift_rejects_red_exciton(delta):
    cav = CavitySpec(2e15, 1e12)
    with pytest.raises(ValueError):
        faraday_phase_shift(cav, ExcitonSpec(2e15 + delta, 1e10, 3e11))


def test_phase_shift_asymptotic_agreement():
    # Delta / (gamma_ex / 2) > 1e3 across several cavities
    for q in (1e2, 1e3, 1e4):
        cav = CavitySpec.from_q(2e15, q)
        for delta in (2e13, 1e14, 1e15):
            exc = ExcitonSpec(2e15 + delta, 1e10, 3e11)
            exact = exact_phase_difference(cav.omega_p, cav, exc)
            approx = faraday_phase_shift(cav, exc).d_theta
            assert abs(exact - approx) / approx < 0.05
