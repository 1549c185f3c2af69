"""Monte Carlo model of single-shot homodyne spin readout.

Each trial prepares a random spin, lets it flip as a symmetric telegraph
process (rate ``1 / spin_lifetime``), averages the signed signal flux
``+-N_SS`` over the integration window, adds Gaussian shot noise with standard
deviation ``N_SQL`` and thresholds at zero (ties go to "up"). A decision is
correct when it matches the spin prepared at ``t = 0``.

Trials are generated in fixed-size blocks; block ``k`` draws from a Philox
stream seeded by child ``k`` of ``SeedSequence(seed)``, so the trial stream
depends only on the seed and not on evaluation order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .feasibility import (
    exciton_occupation,
    large_detuning_excitations,
    signal_flux,
    sql_flux,
)
from .reflectance import absorption
from .specs import CavitySpec, ExcitonSpec, ProbeSpec, Spin

BLOCK = 4096


@dataclass(frozen=True)
class ReadoutTrial:
    spin: Spin
    integrated_signal: float
    decision: Spin
    flip_times: tuple[float, ...] = field(default=())

    @property
    def correct(self) -> bool:
        return self.spin is self.decision


@dataclass(frozen=True)
class ReadoutEstimate:
    trials: int
    correct: int
    snr: float
    seed: int
    spin_lifetime: float
    tau: float
    signal: float
    noise: float
    mean_flips: float
    flipped_fraction: float
    records: tuple[ReadoutTrial, ...] = field(default=(), repr=False)

    @property
    def fidelity(self) -> float:
        return self.correct / self.trials

    @property
    def stderr(self) -> float:
        f = self.fidelity
        return math.sqrt(f * (1.0 - f) / self.trials)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "fidelity": self.fidelity,
            "standard_error": self.stderr,
            "snr": self.snr,
            "seed": self.seed,
            "spin_lifetime": self.spin_lifetime,
            "tau": self.tau,
            "signal_flux": self.signal,
            "noise_flux": self.noise,
            "flips": {"mean_per_trial": self.mean_flips, "trials_with_flips": self.flipped_fraction},
        }


class _Block(NamedTuple):
    spins: np.ndarray        # +1 up, -1 down
    signals: np.ndarray
    flip_counts: np.ndarray
    flip_times: list[np.ndarray] | None


def _signed_fraction(flips: np.ndarray, counts: np.ndarray, tau: float) -> np.ndarray:
    """Time-average of ``(-1)**N(t)`` over ``[0, tau]`` for sorted, padded flip times.

    ``flips`` has shape (n, kmax) with entries past ``counts`` set to ``tau``.
    """
    n = flips.shape[0]
    edges = np.concatenate([np.zeros((n, 1)), flips, np.full((n, 1), tau)], axis=1)
    widths = np.diff(edges, axis=1)
    signs = np.where(np.arange(widths.shape[1]) % 2 == 0, 1.0, -1.0)
    return (widths * signs).sum(axis=1) / tau


def _run_block(seq: np.random.SeedSequence, n: int, signal: float, noise: float,
               tau: float, flip_rate: float, keep: bool) -> _Block:
    rng = np.random.Generator(np.random.Philox(seq))
    spins = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    counts = rng.poisson(flip_rate * tau, size=n) if flip_rate > 0 else np.zeros(n, dtype=np.int64)
    kmax = int(counts.max()) if n else 0
    if kmax:
        # given N(tau) = k, Poisson arrival times are k sorted iid uniforms;
        # mask before sorting so unused slots pad at tau
        draws = rng.uniform(0.0, tau, size=(n, kmax))
        mask = np.arange(kmax)[None, :] < counts[:, None]
        flips = np.sort(np.where(mask, draws, tau), axis=1)
    else:
        flips = np.zeros((n, 0))
    frac = _signed_fraction(flips, counts, tau)
    signals = spins * signal * frac + rng.normal(0.0, noise, size=n)
    times = [flips[i, : counts[i]] for i in range(n)] if keep else None
    return _Block(spins, signals, counts, times)


def simulate_readout(signal: float, noise: float, tau: float, spin_lifetime: float = math.inf,
                     trials: int = 10_000, seed: int = 0, keep_trials: bool = False,
                     workers: int | None = None) -> ReadoutEstimate:
    """Monte Carlo readout with given signal and noise fluxes (photons/s).

    ``spin_lifetime = inf`` disables flips.
    """
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    if not spin_lifetime > 0:
        raise ValueError(f"spin_lifetime must be positive, got {spin_lifetime}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if noise < 0:
        raise ValueError("noise must be non-negative")
    flip_rate = 0.0 if math.isinf(spin_lifetime) else 1.0 / spin_lifetime
    n_blocks = -(-trials // BLOCK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [min(BLOCK, trials - k * BLOCK) for k in range(n_blocks)]
    args = [(children[k], sizes[k], signal, noise, tau, flip_rate, keep_trials) for k in range(n_blocks)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(lambda a: _run_block(*a), args))
    else:
        blocks = [_run_block(*a) for a in args]

    spins = np.concatenate([b.spins for b in blocks])
    signals = np.concatenate([b.signals for b in blocks])
    counts = np.concatenate([b.flip_counts for b in blocks])
    decisions = np.where(signals >= 0.0, 1.0, -1.0)
    correct = int(np.count_nonzero(decisions == spins))

    records: tuple[ReadoutTrial, ...] = ()
    if keep_trials:
        times = [t for b in blocks for t in b.flip_times]
        records = tuple(
            ReadoutTrial(
                Spin.UP if s > 0 else Spin.DOWN, float(v),
                Spin.UP if d > 0 else Spin.DOWN, tuple(float(x) for x in ft),
            )
            for s, v, d, ft in zip(spins, signals, decisions, times)
        )
    return ReadoutEstimate(
        trials=trials,
        correct=correct,
        snr=signal / noise if noise > 0 else (0.0 if signal == 0 else math.inf),
        seed=seed,
        spin_lifetime=spin_lifetime,
        tau=tau,
        signal=signal,
        noise=noise,
        mean_flips=float(counts.mean()),
        flipped_fraction=float(np.count_nonzero(counts) / trials),
        records=records,
    )


def readout_fidelity_mc(probe: ProbeSpec, d_theta: float, spin_lifetime: float = math.inf,
                        trials: int = 10_000, seed: int = 0, r_bar: float = 1.0,
                        **kwargs) -> ReadoutEstimate:
    """Readout fidelity for a probe and spin-induced phase difference ``d_theta``."""
    if not spin_lifetime > 0:
        raise ValueError(f"spin_lifetime must be positive, got {spin_lifetime}")
    return simulate_readout(
        signal_flux(probe, d_theta, r_bar), sql_flux(probe), probe.tau,
        spin_lifetime=spin_lifetime, trials=trials, seed=seed, **kwargs,
    )


def gaussian_fidelity(snr: float) -> float:
    """Correct-decision probability of a sign test on ``N(+-snr, 1)``."""
    return 0.5 * (1.0 + math.erf(snr / math.sqrt(2.0)))


class ExcitationEstimate(NamedTuple):
    general: float
    large_detuning: float | None

    @property
    def ratio(self) -> float | None:
        if self.large_detuning is None or self.large_detuning == 0:
            return None
        return self.general / self.large_detuning


def real_excitation_counter(cavity: CavitySpec, exciton: ExcitonSpec, probe: ProbeSpec,
                            tau: float | None = None) -> ExcitationEstimate:
    """Expected absorbed photons per window, from the exact loss and the dispersive limit.

    The dispersive estimate is ``None`` when the exciton is not above the
    cavity resonance.
    """
    tau = probe.tau if tau is None else tau
    general = absorption(probe.omega, cavity, exciton, probe.sigma_z) * probe.n_in * tau
    try:
        n_ex = exciton_occupation(probe, cavity, exciton).n_ex
    except ValueError:
        return ExcitationEstimate(general, None)
    return ExcitationEstimate(general, large_detuning_excitations(exciton.gamma_ex, n_ex, tau))
