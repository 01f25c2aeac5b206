"""Monte Carlo estimation of ergodic rates."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import sample_draws
from .model import SystemParams, power_budget
from .rates import instantaneous_rates, instantaneous_sinrs

DEFAULT_SEED = 20200607
CHUNK = 1 << 16


@dataclass(frozen=True)
class ErgodicEstimate:
    c1: float
    c2: float
    c_sum: float
    se1: float
    se2: float
    se_sum: float
    n_trials: int


def _chunk_rates(params, budget, seed, start, count):
    draw = sample_draws(params, seed, count, start=start)
    rates = instantaneous_rates(instantaneous_sinrs(params, budget, draw), budget.zeta)
    return rates.r1, rates.r2


def per_trial_rates(params: SystemParams, n_trials: int, seed: int = DEFAULT_SEED,
                    workers: int = 1, chunk: int = CHUNK):
    """Rates (r1, r2) of every trial, in trial order.

    Trial ``i`` uses substream ``i`` of ``seed`` so the result does not depend
    on ``workers`` or ``chunk``.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    budget = power_budget(params)
    starts = range(0, n_trials, chunk)
    jobs = [(s, min(chunk, n_trials - s)) for s in starts]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _chunk_rates(params, budget, seed, *j), jobs))
    else:
        parts = [_chunk_rates(params, budget, seed, *j) for j in jobs]
    r1 = np.concatenate([p[0] for p in parts])
    r2 = np.concatenate([p[1] for p in parts])
    return r1, r2


def _mean_se(x):
    n = x.size
    mean = float(np.sum(x) / n)
    se = float(np.std(x, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return mean, se


def estimate_ergodic(params: SystemParams, n_trials: int = 100_000,
                     seed: int = DEFAULT_SEED, workers: int = 1) -> ErgodicEstimate:
    """Sample means and standard errors of R1, R2 and their sum."""
    r1, r2 = per_trial_rates(params, n_trials, seed, workers=workers)
    c1, se1 = _mean_se(r1)
    c2, se2 = _mean_se(r2)
    _, se_sum = _mean_se(r1 + r2)
    return ErgodicEstimate(c1, c2, c1 + c2, se1, se2, se_sum, n_trials)
