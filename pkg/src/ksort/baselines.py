"""Reference systems: ELO ratings, random matchmaking, nearest-skill matchmaking."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import numpy as np

from .errors import MatchmakingError

WIN = "win"
LOSS = "loss"
TIE = "tie"
_SCORE = {WIN: 1.0, LOSS: 0.0, TIE: 0.5}


@dataclass(frozen=True)
class EloRating:
    value: float = 1500.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError("ELO rating must be finite")


@dataclass(frozen=True)
class BaselineConfig:
    k_factor: float = 32.0
    initial_rating: float = 1500.0
    logistic_scale: float = 400.0

    def __post_init__(self) -> None:
        if not self.k_factor > 0 or not self.logistic_scale > 0:
            raise ValueError("k_factor and logistic_scale must be positive")


DEFAULT_ELO = BaselineConfig()


def elo_expected(r_i: EloRating, r_q: EloRating, cfg: BaselineConfig = DEFAULT_ELO) -> float:
    return 1.0 / (1.0 + 10.0 ** ((r_q.value - r_i.value) / cfg.logistic_scale))


def elo_update(r_i: EloRating, r_q: EloRating, outcome: str,
               cfg: BaselineConfig = DEFAULT_ELO) -> tuple[EloRating, EloRating]:
    """Outcome is from r_i's point of view; the exchange is exactly zero-sum."""
    try:
        score = _SCORE[outcome]
    except KeyError:
        raise ValueError(f"outcome must be one of {sorted(_SCORE)}, got {outcome!r}") from None
    delta = cfg.k_factor * (score - elo_expected(r_i, r_q, cfg))
    return EloRating(r_i.value + delta), EloRating(r_q.value - delta)


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_matchmaking(pool: Iterable[Hashable], k: int, rng) -> list:
    """K distinct members drawn uniformly without replacement.

    ``rng`` is a seed or a ``numpy.random.Generator`` (advanced in place).
    """
    members = sorted(pool)
    if len(members) < k:
        raise MatchmakingError(f"pool of {len(members)} is smaller than k={k}")
    picks = _generator(rng).choice(len(members), size=k, replace=False)
    return [members[int(j)] for j in picks]


def skill_matchmaking(scores: Mapping[Hashable, float], pivot: Hashable,
                      pool: Iterable[Hashable], k: int) -> list:
    """The K-1 pool members closest to the pivot in score, ties by id."""
    cands = sorted(m for m in set(pool) if m != pivot)
    if len(cands) < k - 1:
        raise MatchmakingError(f"pool of {len(cands)} cannot supply {k - 1} opponents")
    s0 = scores[pivot]
    cands.sort(key=lambda m: abs(scores[m] - s0))
    return cands[: k - 1]
