"""Synthetic ranking experiments.

Every model gets a hidden label (1 = strongest).  Simulated voters decide each
pairwise outcome by label order, flipped independently with probability
``noise_p``.  After each battle the system's ranking is compared with the labels
by mean squared position error; convergence means that error stays exactly
zero for ``convergence_window`` consecutive battles.

The labels are held by :class:`GroundTruth` and only read by
:func:`simulate_vote` and :func:`rank_mse`.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .. import kernels
from ..arena import ArenaConfig, ArenaState, propose_battle
from ..baselines import DEFAULT_ELO, BaselineConfig, EloRating, elo_update, random_matchmaking, skill_matchmaking
from ..errors import ConfigError
from ..matchmaking import SIMILAR_SKILL, ComparisonLedger, MatchConfig, select_opponents, select_pivot
from ..rating import BETA0, ETA, MU0, SIGMA0, SIGMA_MIN, RelationSet

SYSTEMS = ("ksort", "elo")
MATCHMAKING = ("ucb", "random", "skill")
MODELING = ("probabilistic", "numerical")
SCENARIOS = ("from-scratch", "add-new-model")
PIVOTS = ("balanced", "random")
VOTERS = ("rank", "best")

_SYSTEM_MODELING = {"ksort": "probabilistic", "elo": "numerical"}


@dataclass(frozen=True)
class GroundTruth:
    labels: Mapping[int, int]

    def __post_init__(self) -> None:
        vals = sorted(self.labels.values())
        if vals != list(range(1, len(vals) + 1)):
            raise ConfigError("labels must be a permutation of 1..N")


@dataclass(frozen=True)
class SimConfig:
    n_models: int = 50
    k: int = 4
    noise_p: float = 0.0
    max_battles: int = 15000
    convergence_window: int = 50
    seed: int = 0
    system: str = "ksort"
    matchmaking: str = "ucb"
    modeling: str | None = None
    scenario: str = "from-scratch"
    new_model_true_rank: int = 31
    pivot: str = "balanced"
    voter: str = "rank"
    alpha: float = 1.0
    eta: float = ETA
    mu0: float = MU0
    sigma0: float = SIGMA0
    beta: float = BETA0
    sigma_min: float = SIGMA_MIN
    exploitation_mode: str = SIMILAR_SKILL
    stop_on_convergence: bool = True
    base_max_battles: int = 15000

    def __post_init__(self) -> None:
        if self.modeling is None:
            object.__setattr__(self, "modeling", _SYSTEM_MODELING.get(self.system))
        for name, allowed in (("system", SYSTEMS), ("matchmaking", MATCHMAKING),
                              ("modeling", MODELING), ("scenario", SCENARIOS),
                              ("pivot", PIVOTS), ("voter", VOTERS)):
            if getattr(self, name) not in allowed:
                raise ConfigError(f"{name} must be one of {allowed}, got {getattr(self, name)!r}")
        if self.modeling != _SYSTEM_MODELING[self.system]:
            raise ConfigError(f"system {self.system!r} uses {_SYSTEM_MODELING[self.system]} modeling")
        if not 2 <= self.k <= self.n_models:
            raise ConfigError("need 2 <= k <= n_models")
        if not 0.0 <= self.noise_p <= 1.0:
            raise ConfigError("noise_p must lie in [0, 1]")
        if self.modeling == "numerical" and self.k != 2:
            raise ConfigError("numerical (ELO) modeling is defined only for k = 2")
        if self.max_battles < 1 or self.convergence_window < 1:
            raise ConfigError("max_battles and convergence_window must be >= 1")
        if self.scenario == "add-new-model":
            if self.system != "ksort":
                raise ConfigError("the add-new-model scenario runs on the ksort system")
            if not 1 <= self.new_model_true_rank <= self.n_models + 1:
                raise ConfigError("new_model_true_rank must lie in 1..n_models+1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentCurve:
    mse_per_battle: list[float]
    converged_at: int | None
    battles_run: int
    # scenario add-new-model: the inserted model's position after each battle
    tracked_position: list[int] = field(default_factory=list)
    pairwise_equivalent: int = 1
    base_battles: int | None = None
    wall_time: float = 0.0

    @property
    def battles_to_converge(self) -> int | None:
        return None if self.converged_at is None else self.converged_at + 1


def generate_ground_truth(n: int, seed) -> GroundTruth:
    if n < 2:
        raise ConfigError("need at least two models")
    perm = np.random.default_rng(seed).permutation(n) + 1
    return GroundTruth({i: int(perm[i]) for i in range(n)})


def simulate_vote(participants: Sequence[int], truth: GroundTruth, noise_p: float,
                  rng: np.random.Generator) -> RelationSet:
    """One noisy relation per unordered pair; the smaller label wins unless flipped."""
    labels = truth.labels
    parts = list(participants)
    n = len(parts)
    flips = rng.random(n * (n - 1) // 2)
    wins = []
    j = 0
    for a in range(n):
        for b in range(a + 1, n):
            x, y = parts[a], parts[b]
            if labels[y] < labels[x]:
                x, y = y, x
            if flips[j] < noise_p:
                x, y = y, x
            wins.append((x, y))
            j += 1
    return RelationSet(wins=wins)


def best_mode_vote(participants: Sequence[int], truth: GroundTruth, noise_p: float,
                   rng: np.random.Generator) -> RelationSet:
    """Best-mode voter: the noisy Copeland winner beats everyone else."""
    rel = simulate_vote(participants, truth, noise_p, rng)
    tally = {p: 0 for p in participants}
    for w, _ in rel.wins:
        tally[w] += 1
    top = max(tally.values())
    winner = next(p for p in participants if tally[p] == top)
    return RelationSet(wins=[(winner, p) for p in participants if p != winner])


def rank_mse(scores: Mapping[int, float], truth: GroundTruth) -> float:
    """Mean squared difference between score-induced positions and labels."""
    ids = sorted(scores)
    if set(ids) != set(truth.labels):
        raise ConfigError("scores and labels cover different models")
    return kernels.rank_mse([float(scores[i]) for i in ids], [truth.labels[i] for i in ids])


def detect_convergence(curve: Sequence[float], window: int) -> int | None:
    """Smallest t with curve[t:t+window] all exactly zero."""
    if window < 1:
        raise ConfigError("window must be >= 1")
    run = 0
    for t, v in enumerate(curve):
        run = run + 1 if v == 0 else 0
        if run == window:
            return t - window + 1
    return None


class EloSystem:
    """ELO ratings with the minimal interface the experiment loop needs."""

    def __init__(self, n: int, match: MatchConfig, cfg: BaselineConfig = DEFAULT_ELO):
        self.cfg = cfg
        self.match = match
        self.ratings = {i: EloRating(cfg.initial_rating) for i in range(n)}
        self.ledger = ComparisonLedger(range(n))

    def scores(self) -> dict[int, float]:
        return {i: r.value for i, r in self.ratings.items()}

    def apply_relations(self, participants: Sequence[int], relations: RelationSet) -> None:
        ((w, l),) = relations.wins
        self.ratings[w], self.ratings[l] = elo_update(self.ratings[w], self.ratings[l], "win", self.cfg)
        self.ledger.record(participants)


def _arena(cfg: SimConfig, n: int) -> ArenaState:
    acfg = ArenaConfig(mu0=cfg.mu0, sigma0=cfg.sigma0, beta=cfg.beta, eta=cfg.eta,
                       sigma_min=cfg.sigma_min, alpha=cfg.alpha, k=cfg.k,
                       exploitation_mode=cfg.exploitation_mode, tiebreak_seed=cfg.seed)
    return ArenaState.with_models([f"model-{i:03d}" for i in range(n)], acfg)


def _participants(system, cfg: SimConfig, matchmaking: str, pivot_rule: str,
                  rng: np.random.Generator) -> list[int]:
    pool = list(system.ratings)
    if matchmaking == "random":
        return random_matchmaking(pool, cfg.k, rng)
    match = system.match if isinstance(system, EloSystem) else system.cfg.match
    if pivot_rule == "balanced":
        pivot = select_pivot(system.ledger, pool, match)
    else:
        pivot = pool[int(rng.integers(len(pool)))]
    scores = system.scores()
    if matchmaking == "ucb":
        return [pivot, *select_opponents(pivot, pool, scores, system.ledger, match)]
    return [pivot, *skill_matchmaking(scores, pivot, pool, cfg.k)]


def _run_loop(system, cfg: SimConfig, truth: GroundTruth, battles: int, matchmaking: str,
              pivot_rule: str, vote_rng, match_rng, tracked: int | None = None):
    voter = simulate_vote if cfg.voter == "rank" else best_mode_vote
    ids = sorted(truth.labels)
    labels = [truth.labels[i] for i in ids]
    target = truth.labels[tracked] if tracked is not None else None
    tracked_at = ids.index(tracked) if tracked is not None else None
    mse, positions = [], []
    converged_at = None
    run = 0
    for t in range(battles):
        parts = _participants(system, cfg, matchmaking, pivot_rule, match_rng)
        system.apply_relations(parts, voter(parts, truth, cfg.noise_p, vote_rng))
        scores = system.scores()
        vals = [scores[i] for i in ids]
        mse.append(kernels.rank_mse(vals, labels))
        if tracked is None:
            ok = mse[-1] == 0
        else:
            positions.append(kernels.rank_positions(vals)[tracked_at])
            ok = positions[-1] == target
        run = run + 1 if ok else 0
        if run == cfg.convergence_window and converged_at is None:
            converged_at = t - cfg.convergence_window + 1
            if cfg.stop_on_convergence:
                break
    return mse, positions, converged_at


def run_experiment(cfg: SimConfig) -> ExperimentCurve:
    """Run one seeded experiment; identical configs give identical curves."""
    start = time.perf_counter()
    truth = generate_ground_truth(cfg.n_models, [cfg.seed, 0])
    vote_rng = np.random.default_rng([cfg.seed, 1])
    match_rng = np.random.default_rng([cfg.seed, 2])
    pairs = cfg.k * (cfg.k - 1) // 2

    if cfg.system == "elo":
        system = EloSystem(cfg.n_models, MatchConfig(alpha=cfg.alpha, k=cfg.k,
                                                     exploitation_mode=cfg.exploitation_mode,
                                                     tiebreak_seed=cfg.seed))
    else:
        system = _arena(cfg, cfg.n_models)

    if cfg.scenario == "from-scratch":
        mse, _, conv = _run_loop(system, cfg, truth, cfg.max_battles, cfg.matchmaking,
                                 cfg.pivot, vote_rng, match_rng)
        return ExperimentCurve(mse, conv, len(mse), pairwise_equivalent=pairs,
                               wall_time=time.perf_counter() - start)

    # add-new-model: converge the existing arena with the default strategy first
    base_cfg = SimConfig(**{**cfg.to_dict(), "scenario": "from-scratch", "matchmaking": "ucb",
                            "pivot": "balanced", "stop_on_convergence": True,
                            "max_battles": cfg.base_max_battles})
    _, _, base_conv = _run_loop(system, base_cfg, truth, base_cfg.max_battles, "ucb",
                                "balanced", vote_rng, match_rng)
    base_run = system.ledger.n_total - 1
    rank = cfg.new_model_true_rank
    labels = {i: (lab + 1 if lab >= rank else lab) for i, lab in truth.labels.items()}
    new_id = system.register(f"model-{cfg.n_models:03d}")
    labels[new_id] = rank
    truth = GroundTruth(labels)
    mse, positions, conv = _run_loop(
        system, cfg, truth, cfg.max_battles, cfg.matchmaking, cfg.pivot,
        np.random.default_rng([cfg.seed, 3]), np.random.default_rng([cfg.seed, 4]), tracked=new_id,
    )
    return ExperimentCurve(mse, conv, len(mse), positions, pairs,
                           base_battles=base_run if base_conv is not None else None,
                           wall_time=time.perf_counter() - start)
