"""Synthetic convergence experiments and the bandit regret study."""
from .harness import (ExperimentCurve, GroundTruth, SimConfig, detect_convergence,
                      generate_ground_truth, rank_mse, run_experiment, simulate_vote)
from .regret import bandit_regret, mean_regret, regret_experiment

__all__ = [
    "ExperimentCurve", "GroundTruth", "SimConfig", "detect_convergence", "generate_ground_truth",
    "rank_mse", "run_experiment", "simulate_vote", "bandit_regret", "mean_regret",
    "regret_experiment",
]
