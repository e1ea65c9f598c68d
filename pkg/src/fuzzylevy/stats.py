"""Ensemble simulation and the statistical checks run against it.

Every check returns a :class:`StatResult`, one row of the verification
summary. Thresholds are computed from the configured significance where a
classical test exists and from explicit standard-error bands otherwise.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as _st

from . import rng as _rng
from .embedding import DualProbe, lp_norm, probe
from .levy import (
    LevyTriplet,
    Trajectory,
    char_functional,
    increment,
    jump_sum,
    simulate,
    state_at,
    tail_mass,
    truncation_bound,
)


@dataclass(frozen=True)
class StatResult:
    name: str
    statistic: float
    threshold: float
    passed: bool

    def row(self) -> tuple:
        return (self.name, self.statistic, self.threshold, self.passed)


def _simulate_range(args):
    tr, T, eps, master_seed, start, stop = args
    return [simulate(tr, T, eps, _rng.trajectory_seed(master_seed, k)) for k in range(start, stop)]


def simulate_ensemble(
    tr: LevyTriplet, T: float, eps: float, master_seed: int, count: int, jobs: int = 1
) -> list:
    """Trajectories 0..count-1; trajectory k uses splitmix64(master_seed, k).

    The result does not depend on ``jobs``: every path owns its seed.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    jobs = max(1, int(jobs))
    if jobs == 1 or count < 2:
        return _simulate_range((tr, T, eps, master_seed, 0, count))
    bounds = np.linspace(0, count, min(jobs * 4, count) + 1).astype(int)
    tasks = [(tr, T, eps, master_seed, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunks = list(pool.map(_simulate_range, tasks))
    return [traj for chunk in chunks for traj in chunk]


def ks_critical(n: int, m: int, significance: float = 0.01) -> float:
    """Asymptotic two-sample Kolmogorov-Smirnov critical value."""
    c = math.sqrt(-0.5 * math.log(significance / 2.0))
    return c * math.sqrt((n + m) / (n * m))


def poisson_count_tests(counts, expected_mean: float, n_se: float = 3.0, name: str = "poisson") -> list:
    """Sample mean and variance of counts against a Poisson(expected_mean) law.

    Standard errors use the Poisson moments: Var(mean) = mu / M and
    Var(s^2) = (mu4 - sigma^4 (M-3)/(M-1)) / M with mu4 = mu + 3 mu^2.
    """
    c = np.asarray(counts, dtype=float)
    M = c.size
    if M < 2:
        raise ValueError("need at least two counts")
    mu = float(expected_mean)
    se_mean = math.sqrt(mu / M)
    mu4 = mu + 3.0 * mu * mu
    se_var = math.sqrt(max(mu4 - mu * mu * (M - 3) / (M - 1), 0.0) / M)
    dm = abs(float(c.mean()) - mu)
    dv = abs(float(c.var(ddof=1)) - mu)
    return [
        StatResult(f"{name}_mean", dm, n_se * se_mean, dm <= n_se * se_mean),
        StatResult(f"{name}_variance", dv, n_se * se_var, dv <= n_se * se_var),
    ]


def ks_stationarity(sample_a, sample_b, significance: float = 0.01, name: str = "ks_stationarity") -> StatResult:
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    d = float(_st.ks_2samp(a, b).statistic)
    crit = ks_critical(a.size, b.size, significance)
    return StatResult(name, d, crit, d < crit)


def independence(sample_a, sample_b, n_se: float = 4.0, name: str = "independence") -> StatResult:
    """Rank correlation within n_se / sqrt(M) of zero.

    Spearman's coefficient is used because increment norms are heavy tailed
    and the moment-based coefficient converges too slowly to be useful.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    rho = float(_st.spearmanr(a, b).statistic)
    if not math.isfinite(rho):
        rho = 0.0
    thr = n_se / math.sqrt(a.size)
    return StatResult(name, abs(rho), thr, abs(rho) <= thr)


def continuity(exceed, h: float, rate: float, n_se: float = 3.0, name: str = "continuity") -> StatResult:
    """Exceedance frequency against 1 - exp(-h * rate) plus n_se standard errors."""
    e = np.asarray(exceed, dtype=bool)
    bound = 1.0 - math.exp(-h * rate)
    se = math.sqrt(max(bound * (1.0 - bound), 1e-300) / e.size)
    freq = float(e.mean())
    return StatResult(name, freq, bound + n_se * se, freq <= bound + n_se * se)


def empirical_char(values) -> complex:
    return complex(np.mean(np.exp(1j * np.asarray(values, dtype=float))))


def char_functional_test(
    tr: LevyTriplet, ell: DualProbe, trajectories: Sequence[Trajectory], n_se: float = 4.0, name: str = "char_functional"
) -> StatResult:
    """Monte-Carlo mean of exp(i ell(X_T)) against the closed-form functional.

    The band is n_se / sqrt(M) plus the dual norm of ell times the expected
    norm of the truncated small jumps, since |e^{ia} - e^{ib}| <= |a - b|.
    """
    model = tr.model
    T = trajectories[0].T
    eps = trajectories[0].eps
    vals = [probe(ell, state_at(traj, model, T)) for traj in trajectories]
    err = abs(empirical_char(vals) - char_functional(tr, ell, T))
    thr = n_se / math.sqrt(len(trajectories)) + ell.dual_norm(model.p_model) * truncation_bound(model, eps, T)
    return StatResult(name, err, thr, err <= thr)


def jump_counts(trajectories: Sequence[Trajectory], model, eps_E: float, t: float | None = None) -> np.ndarray:
    out = np.empty(len(trajectories), dtype=np.int64)
    for k, traj in enumerate(trajectories):
        tt = traj.T if t is None else t
        # jump_sum counts strictly before t; nudge so a jump at t itself is included
        _, n = jump_sum(traj, model, eps_E, np.nextafter(tt, np.inf))
        out[k] = n
    return out


def path_statistics(
    tr: LevyTriplet,
    trajectories: Sequence[Trajectory],
    eps_levels: Sequence[float] = (),
    probes: Sequence[DualProbe] = (),
    significance: float = 0.01,
    eps_probe: float | None = None,
) -> list:
    """The aggregate distributional checks on an ensemble of paths.

    Jump counts (Poisson law), increment stationarity (KS between s=0 and
    s=T/2 windows of length T/4), independence of disjoint increments,
    stochastic continuity on a short window and, for each probe, the
    characteristic functional.
    """
    model = tr.model
    p = model.p_model
    T = trajectories[0].T
    eps = trajectories[0].eps
    out = []
    for e in eps_levels:
        counts = jump_counts(trajectories, model, e)
        out += poisson_count_tests(counts, T * tail_mass(model, e), name=f"poisson_eps={e:g}")

    h = T / 4
    a = [lp_norm(increment(tr_, model, 0.0, h), p) for tr_ in trajectories]
    b = [lp_norm(increment(tr_, model, T / 2, T / 2 + h), p) for tr_ in trajectories]
    c = [lp_norm(increment(tr_, model, h, 2 * h), p) for tr_ in trajectories]
    out.append(ks_stationarity(a, b, significance))
    out.append(independence(a, c))

    hc = T / 100
    drift = lp_norm(trajectories[0].gamma0, p)
    if eps_probe is None:
        eps_probe = drift * hc + 0.5 * eps
    exceed = [lp_norm(increment(tr_, model, T / 2, T / 2 + hc), p) > eps_probe for tr_ in trajectories]
    out.append(continuity(exceed, hc, tail_mass(model, eps)))

    for k, ell in enumerate(probes):
        out.append(char_functional_test(tr, ell, trajectories, name=f"char_functional_{k}"))
    return out

