"""K-wise Bayesian rating with UCB matchmaking for model arenas."""
from .arena import (ArenaConfig, ArenaState, Battle, LeaderboardEntry, Vote, add_model,
                    apply_vote, leaderboard, propose_battle, vote_to_relations)
from .errors import KSortError
from .kernels import BACKEND
from .matchmaking import ComparisonLedger, MatchConfig, record_battle, select_opponents, select_pivot
from .rating import (Rating, RelationSet, UpdateConfig, conservative_score, kwise_update,
                     pairwise_update)

__version__ = "0.1.0"

__all__ = [
    "ArenaConfig", "ArenaState", "Battle", "LeaderboardEntry", "Vote", "add_model", "apply_vote",
    "leaderboard", "propose_battle", "vote_to_relations", "KSortError", "BACKEND",
    "ComparisonLedger", "MatchConfig", "record_battle", "select_opponents", "select_pivot",
    "Rating", "RelationSet", "UpdateConfig", "conservative_score", "kwise_update",
    "pairwise_update", "__version__",
]
