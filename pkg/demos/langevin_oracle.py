"""Time-domain check of the reflectance formula.

Drives the linearised cavity-dot equations with a constant probe, integrates
with RK4 in the frame rotating at the probe, and compares a_out / a_in after
settling with the closed-form coupled reflectance.

    python demos/langevin_oracle.py
"""

import time

import numpy as np

from faraday_qnd import CavitySpec, ExcitonSpec
from faraday_qnd.dynamics import integrate_langevin, max_step, settling_time, steady_state_reflectance
from faraday_qnd.reflectance import coupled_reflectance

cavity = CavitySpec(omega_p=2.1e15, gamma_p=2.3e11)
dot = ExcitonSpec(omega_ex=2.5e15, gamma_ex=1e10, omega_rabi=3e11)

# ring-up at the bare resonance; the field fills on the cavity time 2/gamma_p
traj = integrate_langevin(cavity, dot, drive=1.0, omega_probe=cavity.omega_p,
                          t_end=20 / cavity.gamma_p, samples=11)
print(f"step {traj.dt:.2e} s (bound {max_step(cavity, dot, cavity.omega_p):.2e} s)")
print("  t (ps)     |a|^2        |a_out|")
for t, a, out in zip(traj.t, traj.a, traj.a_out):
    print(f"  {t * 1e12:8.2f}  {abs(a) ** 2:10.4e}  {abs(out):.6f}")

# full settling is set by the slow exciton dipole
print(f"\nsettling time {settling_time(cavity, dot) * 1e9:.2f} ns")
offsets = np.linspace(-5, 5, 20) * cavity.gamma_p
t0 = time.perf_counter()
sim = steady_state_reflectance(cavity, dot, cavity.omega_p + offsets)
elapsed = time.perf_counter() - t0
exact = coupled_reflectance(cavity.omega_p + offsets, cavity, dot).value
rel = np.abs(sim - exact) / np.abs(exact)
print("  offset/gamma_p   simulated r              relative error")
for x, s, e in zip(offsets / cavity.gamma_p, sim, rel):
    print(f"  {x:+7.3f}       {s.real:+.6f}{s.imag:+.6f}i   {e:.1e}")
print(f"worst {rel.max():.1e} over {len(offsets)} frequencies in {elapsed:.2f} s")
