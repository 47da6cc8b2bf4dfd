"""Gaussian skill beliefs and their closed-form Bayesian updates.

A model's skill is believed to be N(mu, sigma^2); its judged performance in a
single battle is that skill plus N(0, beta^2) noise.  Observing "i beat q"
moves each participant by a truncated-Gaussian moment match.  A K-wise battle
is decomposed into pairwise relations whose contributions are summed from the
pre-battle state and applied simultaneously.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from . import kernels
from .errors import RelationError, UnknownModelError

MU0 = 25.0
SIGMA0 = 25.0 / 3.0
# beta and the sigma floor were tuned on the 50-model synthetic arena; see README
BETA0 = SIGMA0 / 3.5
ETA = 3.0
SIGMA_MIN = 0.6

ModelId = Hashable


@dataclass(frozen=True)
class Rating:
    mu: float = MU0
    sigma: float = SIGMA0
    beta: float = BETA0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma) and math.isfinite(self.beta)):
            raise ValueError(f"non-finite rating {self!r}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")


@dataclass(frozen=True)
class UpdateConfig:
    eta: float = ETA
    sigma_min: float = SIGMA_MIN

    def __post_init__(self) -> None:
        if not self.eta >= 0:
            raise ValueError("eta must be >= 0")
        if not self.sigma_min > 0:
            raise ValueError("sigma_min must be > 0")


DEFAULT_UPDATE = UpdateConfig()


@dataclass(frozen=True)
class RelationSet:
    """Pairwise outcomes of one battle: ``wins`` holds (winner, loser) pairs."""

    wins: tuple[tuple[ModelId, ModelId], ...] = ()
    ties: tuple[tuple[ModelId, ModelId], ...] = ()
    _seen: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        wins = tuple(tuple(p) for p in self.wins)
        ties = tuple(tuple(p) for p in self.ties)
        object.__setattr__(self, "wins", wins)
        object.__setattr__(self, "ties", ties)
        seen = set()
        for pair in wins + ties:
            if len(pair) != 2:
                raise RelationError(f"relation {pair!r} is not a pair")
            a, b = pair
            if a == b:
                raise RelationError(f"self-pair {pair!r}")
            key = frozenset(pair)
            if key in seen:
                raise RelationError(f"pair {pair!r} appears more than once")
            seen.add(key)
        object.__setattr__(self, "_seen", frozenset(seen))

    def ids(self) -> set:
        out = set()
        for a, b in self.wins + self.ties:
            out.add(a)
            out.add(b)
        return out

    def __len__(self) -> int:
        return len(self.wins) + len(self.ties)


def conservative_score(r: Rating, eta: float = ETA) -> float:
    return r.mu - eta * r.sigma


def pair_scale(a: Rating, b: Rating) -> float:
    return math.sqrt(a.beta * a.beta + b.beta * b.beta + a.sigma * a.sigma + b.sigma * b.sigma)


def pairwise_update(winner: Rating, loser: Rating,
                    config: UpdateConfig = DEFAULT_UPDATE) -> tuple[Rating, Rating]:
    """Posterior beliefs of both players after ``winner`` beat ``loser``."""
    sw2 = winner.sigma * winner.sigma
    sl2 = loser.sigma * loser.sigma
    c2 = winner.beta * winner.beta + loser.beta * loser.beta + sw2 + sl2
    c = math.sqrt(c2)
    v, w = kernels.vw((winner.mu - loser.mu) / c)
    shift = v / c
    floor2 = config.sigma_min * config.sigma_min
    var_w = max(sw2 * (1.0 - sw2 * w / c2), floor2)
    var_l = max(sl2 * (1.0 - sl2 * w / c2), floor2)
    return (
        Rating(winner.mu + sw2 * shift, math.sqrt(var_w), winner.beta),
        Rating(loser.mu + sl2 * -shift, math.sqrt(var_l), loser.beta),
    )


def _canonical(pairs: Iterable[tuple]) -> list[tuple]:
    try:
        return sorted(pairs)
    except TypeError:
        return sorted(pairs, key=repr)


def kwise_update(ratings: Mapping[ModelId, Rating], relations: RelationSet,
                 config: UpdateConfig = DEFAULT_UPDATE) -> dict[ModelId, Rating]:
    """Apply every win/loss relation of one battle at once.

    Ties contribute nothing; models outside the relation set are returned
    unchanged.  Relations are accumulated in sorted order, so the result does
    not depend on how the set was enumerated.
    """
    if not isinstance(relations, RelationSet):
        raise RelationError("relations must be a RelationSet")
    for ident in relations.ids():
        if ident not in ratings:
            raise UnknownModelError(f"no rating for model {ident!r}")
    out = dict(ratings)
    if not relations.wins:
        return out
    involved = _canonical({i for pair in relations.wins for i in pair})
    local = {ident: j for j, ident in enumerate(involved)}
    wins = _canonical(relations.wins)
    cur = [ratings[i] for i in involved]
    new_mu, new_sigma = kernels.kwise_apply(
        [r.mu for r in cur], [r.sigma for r in cur], [r.beta for r in cur],
        [local[w] for w, _ in wins], [local[l] for _, l in wins], config.sigma_min,
    )
    for j, ident in enumerate(involved):
        out[ident] = Rating(new_mu[j], new_sigma[j], cur[j].beta)
    return out
