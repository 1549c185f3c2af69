"""``faraday-qnd`` command-line front end.

Exit codes: 0 success (``check``: feasible), 1 ``check`` infeasible,
2 configuration or computation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import feasibility as fz
from .dynamics import StepSizeError, InstabilityError, integrate_langevin, settling_time, steady_state_reflectance
from .io import write_csv, write_json, write_region
from .paramfile import ConfigError, ParameterSet, load
from .polarization import mean_reflectance
from .readout import readout_fidelity_mc, real_excitation_counter
from .reflectance import (
    cold_reflectance,
    coupled_reflectance,
    exact_phase_difference,
    vacuum_rabi,
)

EXIT_OK, EXIT_INFEASIBLE, EXIT_CONFIG = 0, 1, 2


def _grids(args) -> dict[str, fz.Axis]:
    out = {}
    for spec in args.grid or []:
        ax = fz.Axis.parse(spec)
        out[ax.name] = ax
    return out


def _pick(grids: dict[str, fz.Axis], allowed: list[str], defaults: list[fz.Axis]) -> list[fz.Axis]:
    unknown = set(grids) - set(allowed)
    if unknown:
        raise fz.GridError(f"unknown grid axis {sorted(unknown)}; expected one of {allowed}")
    return [grids.get(d.name, d) for d in defaults]


# --- subcommands ----------------------------------------------------------------

def cmd_response(params: ParameterSet, args) -> int:
    cavity, exciton = params.cavity(), params.exciton()
    sigma_z = params.get("sigma_z", -1.0)
    default = fz.Axis.from_range("offset_gamma", -10.0, 10.0, 2001, "lin")
    (ax,) = _pick(_grids(args), ["offset_gamma"], [default])
    offset = ax.values * cavity.gamma_p
    omega = cavity.omega_p + offset
    r0 = cold_reflectance(omega, cavity)
    r = coupled_reflectance(omega, cavity, exciton, sigma_z)
    arg_r0 = np.unwrap(np.angle(r0.value))
    arg_r = np.unwrap(np.angle(r.value))
    dtheta = arg_r - arg_r0
    header = ["offset", "abs_r0", "arg_r0", "abs_r", "arg_r", "dtheta"]
    cols = [offset, r0.magnitude, arg_r0, r.magnitude, arg_r, dtheta]
    out = Path(args.out)
    if args.format == "json":
        write_json(out / "response.json", dict(zip(header, cols)))
    else:
        write_csv(out / "response.csv", header, cols)
    print(f"wrote response over {len(offset)} points to {out}")
    return EXIT_OK


def cmd_check(params: ParameterSet, args) -> int:
    cavity, exciton, probe = params.cavity(), params.exciton(), params.probe()
    lifetime = args.spin_lifetime if args.spin_lifetime is not None else params.spin_lifetime
    report = fz.assess(cavity, exciton, probe, lifetime)
    doc = report.to_dict()
    doc["critical_linewidth"] = fz.critical_linewidth(exciton) if exciton.gamma_ex > 0 else None
    doc["gamma_p"] = cavity.gamma_p
    doc["q_factor"] = cavity.q_factor
    doc["tau"] = probe.tau
    doc["n_in"] = probe.n_in
    write_json(Path(args.out) / "report.json", doc)
    for c in report.conditions:
        state = "pass" if c.passed else "FAIL"
        print(f"condition ({c.name}): margin {c.margin:.4g}  {state}")
    n_ex = "n/a" if report.n_ex is None else f"{report.n_ex:.4g}"
    print(f"n_ex = {n_ex}, d_theta = {report.d_theta:.4g} rad, SNR = {report.snr:.4g}")
    for w in report.warnings:
        print(f"warning: {w}")
    verdict = "FEASIBLE" if report.feasible else "INFEASIBLE"
    print(f"{verdict} (binding: {report.binding}; without (d): "
          f"{'feasible' if report.feasible_without_d else 'infeasible'})")
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_feasibility(params: ParameterSet, args) -> int:
    cavity, exciton = params.cavity(), params.exciton()
    power = params.get("power_w")
    if power is None:
        power = params.probe(tau=1.0).power
    axes = _pick(_grids(args), ["detuning", "photons"], fz.default_detuning_axes())
    grid = fz.sweep_detuning(cavity, exciton, power, axes)
    out = Path(args.out)
    write_region(grid, out, args.format)
    ax = grid.axes[0].values
    threshold = fz.feasible_detuning_threshold(cavity, exciton, power, lo=ax[0], hi=ax[-1])
    summary = dict(grid.meta, detuning_threshold=threshold, feasible_cells=int(grid.feasible.sum()))
    write_json(out / "feasibility.json", summary)
    shown = "none in range" if threshold is None else f"{threshold:.4g}"
    print(f"minimum normalised detuning for a solution: {shown}")
    return EXIT_OK


def cmd_tau_q(params: ParameterSet, args) -> int:
    cavity, exciton = params.cavity(), params.exciton()
    n_ex = args.n_ex or list(fz.DEFAULT_N_EX)
    axes = _pick(_grids(args), ["q", "tau"], fz.default_tau_q_axes())
    grid = fz.sweep_tau_q(cavity, exciton, n_ex, axes)
    out = Path(args.out)
    write_region(grid, out, args.format)
    q, tau = np.meshgrid(grid.axes[1].values, grid.axes[2].values, indexing="ij")
    write_csv(out / "union.csv", ["q", "tau", "feasible"],
              [q.ravel(), tau.ravel(), grid.extra["union"].ravel().astype(int)])
    write_json(out / "tau_q.json", dict(grid.meta, n_ex=list(n_ex)))
    print(f"critical Q = {grid.meta['critical_q']:.4g}; "
          f"{int(grid.extra['union'].sum())} of {grid.extra['union'].size} (Q, tau) cells admit a solution")
    return EXIT_OK


def _ghz_rendering(omega: float) -> str:
    return f"~{float(f'{omega:.1g}') / 1e9:g} GHz"


def cmd_rabi(params: ParameterSet, args) -> int:
    v = params.values
    doc = {}
    if "gamma_rad" in v:
        omega = vacuum_rabi(params.cavity(), v["gamma_rad"])
        doc["omega_rabi"] = omega
        print(f"Omega = {omega:.3e} rad/s ({_ghz_rendering(omega)})")
    elif "omega_rabi" not in v:
        raise ConfigError(f"{params.source}: need gamma_rad to compute the Rabi frequency")
    if "omega_rabi" in v:
        doc["omega_rabi_override"] = v["omega_rabi"]
        print(f"override in parameter file: {v['omega_rabi']:.3e} rad/s")
    if args.format == "json":
        write_json(Path(args.out) / "rabi.json", doc)
    return EXIT_OK


def cmd_simulate(params: ParameterSet, args) -> int:
    cavity, exciton, probe = params.cavity(), params.exciton(), params.probe()
    out = Path(args.out)
    drive = complex(np.sqrt(probe.n_in))
    t_end = args.t_end if args.t_end is not None else settling_time(cavity, exciton)
    traj = integrate_langevin(cavity, exciton, drive, probe.omega, t_end, samples=args.samples,
                              sigma_z=probe.sigma_z)
    write_csv(
        out / "trajectory.csv",
        ["t", "re_a", "im_a", "re_sigma", "im_sigma", "re_aout", "im_aout"],
        [traj.t, traj.a.real, traj.a.imag, traj.sigma.real, traj.sigma.imag, traj.a_out.real, traj.a_out.imag],
    )
    summary: dict = {"t_end": float(traj.t[-1]), "dt": traj.dt, "drive": drive.real, "omega_probe": probe.omega}
    if drive != 0:
        sim = traj.final_reflectance
        exact = complex(coupled_reflectance(probe.omega, cavity, exciton, probe.sigma_z).value)
        summary["steady_state"] = {"simulated": sim, "analytic": exact,
                                   "relative_error": abs(sim - exact) / abs(exact)}

    grids = _grids(args)
    if grids:
        (ax,) = _pick(grids, ["offset_gamma"], [fz.Axis.from_range("offset_gamma", -5, 5, 20, "lin")])
        omegas = cavity.omega_p + ax.values * cavity.gamma_p
        sim = steady_state_reflectance(cavity, exciton, omegas, sigma_z=probe.sigma_z)
        exact = coupled_reflectance(omegas, cavity, exciton, probe.sigma_z).value
        rel = np.abs(sim - exact) / np.abs(exact)
        write_csv(out / "steady_state.csv",
                  ["offset", "re_sim", "im_sim", "re_exact", "im_exact", "rel_err"],
                  [omegas - cavity.omega_p, sim.real, sim.imag, exact.real, exact.imag, rel])
        summary["sweep_max_relative_error"] = float(rel.max())

    d_theta = exact_phase_difference(probe.omega, cavity, exciton, probe.sigma_z)
    r = coupled_reflectance(probe.omega, cavity, exciton, probe.sigma_z)
    r_bar = mean_reflectance(r, cold_reflectance(probe.omega, cavity))
    lifetime = args.spin_lifetime if args.spin_lifetime is not None else params.spin_lifetime
    mc = readout_fidelity_mc(probe, d_theta, lifetime, trials=args.trials, seed=args.seed, r_bar=r_bar)
    exc = real_excitation_counter(cavity, exciton, probe)
    mc_doc = mc.to_dict()
    mc_doc["d_theta"] = d_theta
    mc_doc["expected_absorbed_photons"] = {"general": exc.general, "large_detuning": exc.large_detuning,
                                           "ratio": exc.ratio}
    write_json(out / "readout.json", mc_doc)
    write_json(out / "simulate.json", summary)
    print(f"trajectory: {len(traj.t)} samples to t = {traj.t[-1]:.4g} s")
    if "steady_state" in summary:
        print(f"steady-state |a_out/a_in - r| / |r| = {summary['steady_state']['relative_error']:.3g}")
    print(f"readout fidelity {mc.fidelity:.4f} +- {mc.stderr:.4f} at SNR {mc.snr:.4g} ({mc.trials} trials)")
    return EXIT_OK


COMMANDS = {
    "response": cmd_response,
    "check": cmd_check,
    "feasibility": cmd_feasibility,
    "tau-q": cmd_tau_q,
    "rabi": cmd_rabi,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", required=True, help="parameter file, or bundled:NAME")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", action="append", metavar="SPEC", help="name:min:max:count:lin|log")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    ap = argparse.ArgumentParser(prog="faraday-qnd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("response", parents=[common], help="phase response with and without the dot")
    p = sub.add_parser("check", parents=[common], help="single-point feasibility report")
    p.add_argument("--spin-lifetime", type=float, default=None)
    sub.add_parser("feasibility", parents=[common], help="detuning / photon-number region")
    p = sub.add_parser("tau-q", parents=[common], help="integration time / cavity Q region")
    p.add_argument("--n-ex", type=float, action="append", help="exciton population (repeatable)")
    sub.add_parser("rabi", parents=[common], help="vacuum Rabi frequency")
    p = sub.add_parser("simulate", parents=[common], help="Langevin trajectory and readout Monte Carlo")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=1001)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--spin-lifetime", type=float, default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        params = load(args.params)
        return COMMANDS[args.command](params, args)
    except (ConfigError, fz.GridError, StepSizeError, InstabilityError, ValueError, ArithmeticError) as exc:
        print(f"faraday-qnd: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
