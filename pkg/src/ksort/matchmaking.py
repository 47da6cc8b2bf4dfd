"""Exploration-exploitation battle construction.

Every unordered pair of models is a bandit arm.  A candidate opponent q of the
pivot i is valued by

    U(i, q) = -|S_i - S_q| + alpha * sqrt(ln n / n_iq)

(the gap enters with a plus sign in ``literal-gap`` mode).  A pair that has
never been compared has an infinite exploration bonus.  The pivot is the model
with the fewest comparisons so far and its K-1 opponents are picked greedily.

Opponents with equal value go to the model with fewer total comparisons; any
remaining tie, and every pivot tie, is broken by a hash of (tiebreak_seed,
ledger round, model index).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import MatchmakingError, UnknownModelError

SIMILAR_SKILL = "similar-skill"
LITERAL_GAP = "literal-gap"
EXPLOITATION_MODES = (SIMILAR_SKILL, LITERAL_GAP)

ModelId = Hashable


@dataclass(frozen=True)
class MatchConfig:
    alpha: float = 1.0
    k: int = 4
    exploitation_mode: str = SIMILAR_SKILL
    tiebreak_seed: int = 0

    def __post_init__(self) -> None:
        if not self.alpha >= 0:
            raise MatchmakingError("alpha must be >= 0")
        if int(self.k) != self.k or self.k < 2:
            raise MatchmakingError("k must be an integer >= 2")
        if self.exploitation_mode not in EXPLOITATION_MODES:
            raise MatchmakingError(f"unknown exploitation mode {self.exploitation_mode!r}")


class ComparisonLedger:
    """Symmetric pair-count matrix plus the global round counter.

    The counter starts at 1 so that ln(n_total) is always defined.
    """

    def __init__(self, ids: Iterable[ModelId] = (), n_pair=None, n_total: int = 1):
        self.ids: list[ModelId] = list(ids)
        self.index: dict[ModelId, int] = {ident: j for j, ident in enumerate(self.ids)}
        if len(self.index) != len(self.ids):
            raise MatchmakingError("duplicate ids in ledger")
        n = len(self.ids)
        if n_pair is None:
            self.n_pair = np.zeros((n, n), dtype=np.int64)
        else:
            self.n_pair = np.array(n_pair, dtype=np.int64).reshape(n, n)
            if (self.n_pair != self.n_pair.T).any() or self.n_pair.diagonal().any():
                raise MatchmakingError("ledger matrix must be symmetric with zero diagonal")
            if (self.n_pair < 0).any():
                raise MatchmakingError("ledger counts must be nonnegative")
        if n_total < 1:
            raise MatchmakingError("n_total starts at 1")
        self.n_total = int(n_total)

    def copy(self) -> "ComparisonLedger":
        return ComparisonLedger(self.ids, self.n_pair.copy(), self.n_total)

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComparisonLedger):
            return NotImplemented
        return (self.ids == other.ids and self.n_total == other.n_total
                and np.array_equal(self.n_pair, other.n_pair))

    def pos(self, ident: ModelId) -> int:
        try:
            return self.index[ident]
        except KeyError:
            raise UnknownModelError(f"model {ident!r} is not in the ledger") from None

    def count(self, i: ModelId, q: ModelId) -> int:
        return int(self.n_pair[self.pos(i), self.pos(q)])

    def row_sum(self, ident: ModelId) -> int:
        return int(self.n_pair[self.pos(ident)].sum())

    def add(self, ident: ModelId) -> None:
        if ident in self.index:
            raise MatchmakingError(f"model {ident!r} already in ledger")
        n = len(self.ids)
        grown = np.zeros((n + 1, n + 1), dtype=np.int64)
        grown[:n, :n] = self.n_pair
        self.n_pair = grown
        self.index[ident] = n
        self.ids.append(ident)

    def record(self, participants: Sequence[ModelId]) -> None:
        """In-place version of :func:`record_battle`."""
        idx = [self.pos(p) for p in participants]
        if len(set(idx)) != len(idx):
            raise MatchmakingError(f"duplicate participants {list(participants)!r}")
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                self.n_pair[idx[a], idx[b]] += 1
                self.n_pair[idx[b], idx[a]] += 1
        self.n_total += 1


def record_battle(ledger: ComparisonLedger, participants: Sequence[ModelId]) -> ComparisonLedger:
    out = ledger.copy()
    out.record(participants)
    return out


def _similar(cfg: MatchConfig) -> bool:
    return cfg.exploitation_mode == SIMILAR_SKILL


def ucb_score(scores: Mapping[ModelId, float], ledger: ComparisonLedger,
              i: ModelId, q: ModelId, cfg: MatchConfig) -> float:
    if i == q:
        raise MatchmakingError("ucb_score needs two distinct models")
    (val,) = kernels.ucb_values(float(scores[i]), [float(scores[q])], [ledger.count(i, q)],
                                ledger.n_total, float(cfg.alpha), _similar(cfg))
    return val


def _keys(ledger: ComparisonLedger, members: Sequence[ModelId], cfg: MatchConfig, stream: int):
    salt = 2 * ledger.n_total + stream
    return [kernels.tiebreak_key(cfg.tiebreak_seed, salt, ledger.pos(m)) for m in members]


def _balanced_keys(ledger: ComparisonLedger, members: Sequence[ModelId], cfg: MatchConfig,
                   stream: int):
    # fewer total comparisons first, then the seeded hash
    sums = ledger.n_pair.sum(axis=1)
    hashes = _keys(ledger, members, cfg, stream)
    return [(min(int(sums[ledger.pos(m)]), _SUM_CAP) << 40) | (h >> 24)
            for m, h in zip(members, hashes)]


_SUM_CAP = (1 << 24) - 1


def _ordered(ledger: ComparisonLedger, pool: Iterable[ModelId]) -> list[ModelId]:
    return sorted(set(pool), key=ledger.pos)


def select_opponents(pivot: ModelId, pool: Iterable[ModelId], scores: Mapping[ModelId, float],
                     ledger: ComparisonLedger, cfg: MatchConfig) -> list[ModelId]:
    """Greedy UCB choice of the pivot's K-1 opponents, best first."""
    cands = [m for m in _ordered(ledger, pool) if m != pivot]
    need = cfg.k - 1
    if len(cands) < need:
        raise MatchmakingError(f"pool has {len(cands)} candidates, need {need}")
    row = ledger.n_pair[ledger.pos(pivot)]
    picks = kernels.ucb_greedy(
        float(scores[pivot]), [float(scores[m]) for m in cands],
        [int(row[ledger.pos(m)]) for m in cands], _balanced_keys(ledger, cands, cfg, 1),
        ledger.n_total, float(cfg.alpha), _similar(cfg), need,
    )
    return [cands[j] for j in picks]


def select_pivot(ledger: ComparisonLedger, pool: Iterable[ModelId], cfg: MatchConfig) -> ModelId:
    """Model with the fewest total comparisons; ties by seeded hash."""
    members = _ordered(ledger, pool)
    if not members:
        raise MatchmakingError("pivot pool is empty")
    sums = ledger.n_pair.sum(axis=1)
    values = [int(sums[ledger.pos(m)]) for m in members]
    return members[kernels.argmin_keyed(values, _keys(ledger, members, cfg, 0))]

