"""UCB1 versus uniform-random arm selection on Bernoulli bandits.

Regret is measured in expectation given the chosen arms,
R_n = n * max(mu) - sum_t mu[a_t], so it is exactly zero when all arms share
the same mean.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ConfigError


def _check(means: np.ndarray, horizon: int) -> None:
    if means.ndim != 1 or len(means) < 2:
        raise ConfigError("need at least two arms")
    if ((means < 0) | (means > 1)).any():
        raise ConfigError("Bernoulli means must lie in [0, 1]")
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")


def bandit_regret(means: Sequence[float], horizon: int, seeds: Sequence[int]):
    """Cumulative regret curves for several seeds at once.

    Returns ``(ucb, rand)``, arrays of shape ``(len(seeds), horizon)``.  Row
    ``s`` depends only on ``seeds[s]``.
    """
    mu = np.asarray(means, dtype=float)
    _check(mu, horizon)
    n_arms = len(mu)
    best = mu.max()
    draws = np.empty((len(seeds), horizon))
    rand_arms = np.empty((len(seeds), horizon), dtype=np.int64)
    for row, seed in enumerate(seeds):
        rng = np.random.default_rng([seed, 7])
        draws[row] = rng.random(horizon)
        rand_arms[row] = rng.integers(n_arms, size=horizon)

    rand = np.cumsum(best - mu[rand_arms], axis=1)

    n_seeds = len(seeds)
    rows = np.arange(n_seeds)
    pulls = np.zeros((n_seeds, n_arms))
    wins = np.zeros((n_seeds, n_arms))
    step_regret = np.empty((n_seeds, horizon))
    for t in range(horizon):
        if t < n_arms:
            arm = np.full(n_seeds, t)
        else:
            index = wins / pulls + np.sqrt(2.0 * np.log(t) / pulls)
            arm = np.argmax(index, axis=1)
        reward = draws[:, t] < mu[arm]
        pulls[rows, arm] += 1
        wins[rows, arm] += reward
        step_regret[:, t] = best - mu[arm]
    return np.cumsum(step_regret, axis=1), rand


def regret_experiment(n_arms: int, horizon: int, seed: int,
                      means: Sequence[float] | None = None) -> tuple[list[float], list[float]]:
    """Single-seed regret trajectories; arm means are drawn uniformly if not given."""
    if means is None:
        if n_arms < 2:
            raise ConfigError("need at least two arms")
        means = np.random.default_rng([seed, 8]).random(n_arms)
    elif len(means) != n_arms:
        raise ConfigError("len(means) must equal n_arms")
    ucb, rand = bandit_regret(means, horizon, [seed])
    return ucb[0].tolist(), rand[0].tolist()


def mean_regret(means: Sequence[float], horizon: int, seeds: Sequence[int]):
    """Seed-averaged ``(ucb, rand)`` regret curves."""
    ucb, rand = bandit_regret(means, horizon, seeds)
    return ucb.mean(axis=0), rand.mean(axis=0)
