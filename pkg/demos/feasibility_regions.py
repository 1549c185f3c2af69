"""Where single-shot QND readout is possible.

Part 1 walks the detuning axis at 10 mW and prints the photon-number window
allowed by the shot-noise, real-excitation and cavity-lifetime conditions.
Part 2 prints the integration-time window against cavity Q at fixed exciton
population, and the critical Q below which nothing works.

    python demos/feasibility_regions.py
"""

import numpy as np

from faraday_qnd import CavitySpec, ExcitonSpec, ProbeSpec
from faraday_qnd import feasibility as fz

dot = ExcitonSpec(omega_ex=2.5e15, gamma_ex=1e10, omega_rabi=3e11)
g_crit = fz.critical_linewidth(dot)
print(f"critical cavity linewidth Omega^2/(4 gamma_ex) = {g_crit:.3e} rad/s")

# --- part 1: detuning plane ---------------------------------------------------
power = 10e-3
for label, gamma_p in (("0.1 x critical", 0.1 * g_crit), ("critical", g_crit), ("1.1 x critical", 1.1 * g_crit)):
    cavity = CavitySpec(2.1e15, gamma_p)
    n_in = ProbeSpec.from_power(cavity.omega_p, power, 1.0).n_in
    x = np.logspace(0, 6, 7)
    a_lo, b_hi, c_lo, _, _ = fz.detuning_bounds(cavity, dot, n_in, x)
    print(f"\ngamma_p = {label} ({gamma_p:.3g} rad/s), N_in = {n_in:.3g} /s")
    print("  Delta/(gamma_ex/2)   lower bound N_in*tau   upper bound N_in*tau   window")
    for xi, lo, hi in zip(x, np.maximum(a_lo, c_lo), b_hi):
        print(f"  {xi:12.0e}         {lo:12.3e}           {hi:12.3e}        {'open' if lo < hi else '-'}")
    thr = fz.feasible_detuning_threshold(cavity, dot, power)
    print("  smallest workable detuning:", "none" if thr is None else f"{thr:.4g}")

# near critical the (a) and (b) curves merge in the tail, leaving a sliver at best

# --- part 2: tau versus Q -----------------------------------------------------
print(f"\ncritical Q = {2.1e15 / g_crit:.1f}")
print("  Q        n_ex    tau window")
for q in (5e2, 1e3, 3e3, 1e4, 1e5):
    cav = CavitySpec.from_q(2.1e15, q)
    for n_ex in fz.DEFAULT_N_EX:
        w = fz.tau_bounds_large_detuning(cav, dot, n_ex)
        shown = "empty" if w.is_empty else f"{w.lower * 1e9:8.3f} ns .. {w.upper * 1e9:8.3f} ns"
        print(f"  {q:7.0e}  {n_ex:6.3f}  {shown}")

grid = fz.sweep_tau_q(CavitySpec(2.1e15, 2.3e11), dot)
print(f"\n{int(grid.extra['union'].sum())} of {grid.extra['union'].size} (Q, tau) cells admit a solution "
      "for some population in {0.1, 0.01, 0.001}")
for key, tri in grid.boundaries.items():
    if key.startswith("triangle:"):
        corners = ", ".join(f"(Q={q:.3g}, tau={t:.3g} s)" for q, t in tri[:3])
        print(f"  {key[9:]}: {corners}")
