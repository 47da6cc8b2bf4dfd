"""Battle lifecycle: propose, convert votes, update ratings, rank.

``ArenaState`` is a single-writer state machine.  The module-level functions
(:func:`apply_vote`, :func:`add_model`) are functional and return a new state;
the ``ArenaState`` methods of the same purpose mutate in place and are what the
simulation loop uses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import KSortError, MatchmakingError, StaleBattleError, UnknownModelError, VoteError
from .matchmaking import (
    ComparisonLedger,
    MatchConfig,
    SIMILAR_SKILL,
    select_opponents,
    select_pivot,
)
from .rating import (
    BETA0,
    ETA,
    MU0,
    SIGMA0,
    SIGMA_MIN,
    Rating,
    RelationSet,
    UpdateConfig,
    conservative_score,
    kwise_update,
)

BEST = "best"
RANK = "rank"
TIE = "tie"


@dataclass(frozen=True)
class ArenaConfig:
    mu0: float = MU0
    sigma0: float = SIGMA0
    beta: float = BETA0
    eta: float = ETA
    sigma_min: float = SIGMA_MIN
    alpha: float = 1.0
    k: int = 4
    exploitation_mode: str = SIMILAR_SKILL
    tiebreak_seed: int = 0

    def __post_init__(self) -> None:
        # validate through the component configs
        self.update
        self.match
        Rating(self.mu0, self.sigma0, self.beta)

    @property
    def update(self) -> UpdateConfig:
        return UpdateConfig(eta=self.eta, sigma_min=self.sigma_min)

    @property
    def match(self) -> MatchConfig:
        return MatchConfig(alpha=self.alpha, k=self.k,
                           exploitation_mode=self.exploitation_mode,
                           tiebreak_seed=self.tiebreak_seed)

    def prior(self) -> Rating:
        return Rating(self.mu0, self.sigma0, self.beta)


@dataclass(frozen=True)
class Battle:
    battle_id: str
    participants: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "participants", tuple(self.participants))
        if len(set(self.participants)) != len(self.participants):
            raise VoteError(f"battle {self.battle_id!r} has duplicate participants")
        if len(self.participants) < 2:
            raise VoteError("a battle needs at least two participants")

    @property
    def pivot(self) -> int:
        return self.participants[0]


@dataclass(frozen=True)
class Vote:
    """``best`` payload: winner id or ``"tie"``; ``rank`` payload: id -> rank (1 = best)."""

    mode: str
    payload: object


@dataclass(frozen=True)
class LeaderboardEntry:
    id: int
    name: str
    mu: float
    sigma: float
    score: float
    comparisons: int


@dataclass
class ArenaState:
    cfg: ArenaConfig = field(default_factory=ArenaConfig)
    models: dict[int, str] = field(default_factory=dict)
    ratings: dict[int, Rating] = field(default_factory=dict)
    ledger: ComparisonLedger = field(default_factory=ComparisonLedger)
    applied: list[str] = field(default_factory=list)
    next_id: int = 0

    @classmethod
    def with_models(cls, names: Sequence[str], cfg: ArenaConfig | None = None) -> "ArenaState":
        state = cls(cfg=cfg or ArenaConfig())
        for name in names:
            state.register(name)
        return state

    def copy(self) -> "ArenaState":
        return ArenaState(self.cfg, dict(self.models), dict(self.ratings),
                          self.ledger.copy(), list(self.applied), self.next_id)

    # -- registry -------------------------------------------------------
    def register(self, name: str, rating: Rating | None = None) -> int:
        if not isinstance(name, str) or not name:
            raise KSortError("model name must be a nonempty string")
        if name in self.models.values():
            raise KSortError(f"model name {name!r} is already registered")
        ident = self.next_id
        self.next_id += 1
        self.models[ident] = name
        self.ratings[ident] = rating if rating is not None else self.cfg.prior()
        self.ledger.add(ident)
        return ident

    def id_of(self, name: str) -> int:
        for ident, n in self.models.items():
            if n == name:
                return ident
        raise UnknownModelError(f"no model named {name!r}")

    # -- scoring --------------------------------------------------------
    def scores(self) -> dict[int, float]:
        eta = self.cfg.eta
        return {i: conservative_score(r, eta) for i, r in self.ratings.items()}

    # -- mutation -------------------------------------------------------
    def apply_relations(self, participants: Sequence[int], relations: RelationSet,
                        battle_id: str | None = None) -> None:
        for p in participants:
            if p not in self.ratings:
                raise UnknownModelError(f"unknown participant {p!r}")
        outside = relations.ids() - set(participants)
        if outside:
            raise VoteError(f"relations mention non-participants {sorted(outside)!r}")
        if battle_id is not None and battle_id in self.applied:
            raise StaleBattleError(f"battle {battle_id!r} was already applied")
        self.ratings = kwise_update(self.ratings, relations, self.cfg.update)
        self.ledger.record(participants)
        if battle_id is not None:
            self.applied.append(battle_id)

    def apply(self, battle: Battle, vote: Vote) -> None:
        self.apply_relations(battle.participants, vote_to_relations(battle, vote), battle.battle_id)


def propose_battle(state: ArenaState, pivot_pool: Sequence[int] | None = None) -> Battle:
    """Pivot with fewest comparisons plus its K-1 greedy UCB opponents."""
    cfg = state.cfg.match
    if len(state.ratings) < cfg.k:
        raise MatchmakingError(f"need at least {cfg.k} models, have {len(state.ratings)}")
    pool = list(state.ratings)
    pivot = select_pivot(state.ledger, pivot_pool if pivot_pool is not None else pool, cfg)
    opponents = select_opponents(pivot, pool, state.scores(), state.ledger, cfg)
    return Battle(f"battle-{state.ledger.n_total}", (pivot, *opponents))


def vote_to_relations(battle: Battle, vote: Vote) -> RelationSet:
    parts = battle.participants
    members = set(parts)
    pairs = [(parts[a], parts[b]) for a in range(len(parts)) for b in range(a + 1, len(parts))]
    if vote.mode == BEST:
        winner = vote.payload
        if winner == TIE:
            return RelationSet(ties=pairs)
        if winner not in members:
            raise VoteError(f"winner {winner!r} is not a participant of {battle.battle_id!r}")
        return RelationSet(wins=[(winner, p) for p in parts if p != winner])
    if vote.mode == RANK:
        ranks = vote.payload
        if not isinstance(ranks, Mapping):
            raise VoteError("rank payload must map participants to ranks")
        extra = set(ranks) - members
        if extra:
            raise VoteError(f"rank payload names non-participants {sorted(extra, key=repr)!r}")
        missing = members - set(ranks)
        if missing:
            raise VoteError(f"rank payload misses participants {sorted(missing, key=repr)!r}")
        for p, r in ranks.items():
            if isinstance(r, bool) or not isinstance(r, int) or r < 1:
                raise VoteError(f"rank of {p!r} must be a positive integer, got {r!r}")
        wins, ties = [], []
        for a, b in pairs:
            if ranks[a] < ranks[b]:
                wins.append((a, b))
            elif ranks[b] < ranks[a]:
                wins.append((b, a))
            else:
                ties.append((a, b))
        return RelationSet(wins=wins, ties=ties)
    raise VoteError(f"unknown vote mode {vote.mode!r}")


def apply_vote(state: ArenaState, battle: Battle, vote: Vote) -> ArenaState:
    out = state.copy()
    out.apply(battle, vote)
    return out


def leaderboard(state: ArenaState) -> list[LeaderboardEntry]:
    sums = state.ledger.n_pair.sum(axis=1)
    eta = state.cfg.eta
    entries = [
        LeaderboardEntry(i, state.models[i], r.mu, r.sigma, conservative_score(r, eta),
                         int(sums[state.ledger.pos(i)]))
        for i, r in state.ratings.items()
    ]
    entries.sort(key=lambda e: (-e.score, e.sigma, e.id))
    return entries


def add_model(state: ArenaState, name: str) -> ArenaState:
    out = state.copy()
    out.register(name)
    return out


__all__ = [
    "ArenaConfig", "ArenaState", "Battle", "Vote", "LeaderboardEntry", "BEST", "RANK", "TIE",
    "propose_battle", "vote_to_relations", "apply_vote", "leaderboard", "add_model",
]
