"""Single-shot spin readout fidelity from the homodyne signal.

At the bundled operating point the signal-to-noise ratio is computed from the
exact phase difference, then a Monte Carlo run with spin flips shows how the
fidelity depends on the spin lifetime relative to the integration window.

    python demos/readout_monte_carlo.py
"""

import math

from faraday_qnd.paramfile import load
from faraday_qnd.polarization import mean_reflectance
from faraday_qnd.readout import gaussian_fidelity, readout_fidelity_mc, real_excitation_counter
from faraday_qnd.reflectance import cold_reflectance, coupled_reflectance, exact_phase_difference

params = load("bundled:micropost")
cavity, dot = params.cavity(), params.exciton()

print("tau (ns)   SNR     Gaussian   MC (no flips)   absorbed photons")
for tau in (0.1e-9, 0.2e-9, 0.5e-9, 1e-9):
    probe = params.probe(tau=tau)
    d_theta = exact_phase_difference(probe.omega, cavity, dot)
    r_bar = mean_reflectance(coupled_reflectance(probe.omega, cavity, dot), cold_reflectance(probe.omega, cavity))
    est = readout_fidelity_mc(probe, d_theta, trials=20_000, seed=1, r_bar=r_bar)
    absorbed = real_excitation_counter(cavity, dot, probe).general
    print(f"{tau * 1e9:7.2f}  {est.snr:6.2f}   {gaussian_fidelity(est.snr):.4f}     "
          f"{est.fidelity:.4f} +- {est.stderr:.4f}   {absorbed:.3f}")

# longer windows raise the SNR but also the number of real excitations, which
# is what condition (b) bounds; the spin lifetime caps the window from the other side
probe = params.probe(tau=0.5e-9)
d_theta = exact_phase_difference(probe.omega, cavity, dot)
print("\nspin lifetime / tau   fidelity   mean flips")
for ratio in (math.inf, 100, 10, 1, 0.1):
    est = readout_fidelity_mc(probe, d_theta, spin_lifetime=ratio * probe.tau, trials=20_000, seed=2)
    print(f"{ratio:>17}   {est.fidelity:.4f}     {est.mean_flips:.3f}")
