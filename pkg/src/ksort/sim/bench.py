"""The experiment matrix: ELO comparison, modeling, K, matchmaking, new model, regret."""
from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .harness import ExperimentCurve, SimConfig, run_experiment
from .regret import mean_regret

# variant name -> SimConfig overrides
SUITES: dict[str, dict[str, dict]] = {
    "table1": {
        "ksort_k4_ucb": dict(system="ksort", k=4, matchmaking="ucb"),
        "elo_k2_random": dict(system="elo", k=2, matchmaking="random"),
    },
    "fig3": {
        "probabilistic_noise0": dict(system="ksort", k=2, max_battles=4000),
        "probabilistic_noise5": dict(system="ksort", k=2, noise_p=0.05, max_battles=4000),
        "numerical_noise0": dict(system="elo", k=2, max_battles=3000),
        "numerical_noise5": dict(system="elo", k=2, noise_p=0.05, max_battles=3000),
    },
    "fig4": {
        "k2": dict(k=2, max_battles=4000),
        "k4": dict(k=4, max_battles=4000),
        "k6": dict(k=6, max_battles=4000),
    },
    "fig5": {
        "ucb": dict(k=4, matchmaking="ucb", max_battles=3000),
        "random": dict(k=4, matchmaking="random", max_battles=3000),
        "skill": dict(k=4, matchmaking="skill", max_battles=3000),
    },
    "fig6": {
        "balanced_pivot_ucb": dict(scenario="add-new-model", pivot="balanced", matchmaking="ucb"),
        "random_pivot_ucb": dict(scenario="add-new-model", pivot="random", matchmaking="ucb"),
        "random_random": dict(scenario="add-new-model", matchmaking="random"),
    },
}
FIG6_DEFAULTS = dict(k=4, convergence_window=20, max_battles=1000, new_model_true_rank=31)

REGRET_MEANS = (0.9, 0.5)
REGRET_HORIZON = 10_000
ALL_SUITES = (*SUITES, "regret")


def suite_configs(name: str, seeds: Sequence[int], **overrides) -> dict[str, list[SimConfig]]:
    out = {}
    for variant, kw in SUITES[name].items():
        base = dict(FIG6_DEFAULTS) if name == "fig6" else {}
        base.update(kw)
        base.update(overrides)
        out[variant] = [SimConfig(seed=s, **base) for s in seeds]
    return out


def _run_all(cfgs: list[SimConfig], jobs: int) -> list[ExperimentCurve]:
    if jobs <= 1:
        return [run_experiment(c) for c in cfgs]
    with ProcessPoolExecutor(jobs) as ex:
        return list(ex.map(run_experiment, cfgs))


def run_suite(name: str, seeds: Sequence[int] = range(10), jobs: int = 1,
              **overrides) -> dict[str, list[ExperimentCurve]]:
    configs = suite_configs(name, seeds, **overrides)
    return {variant: _run_all(cfgs, jobs) for variant, cfgs in configs.items()}


def median_battles(curves: Sequence[ExperimentCurve]) -> float:
    """Median battles-to-converge; a run that never converged counts as infinite."""
    return statistics.median(
        float("inf") if c.battles_to_converge is None else c.battles_to_converge for c in curves)


def write_suite(name: str, results: dict[str, list[ExperimentCurve]], seeds: Sequence[int],
                out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {}
    for variant, curves in results.items():
        stem = f"{name}_{variant}"
        with open(out_dir / f"{stem}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed", "converged_at", "battles_to_converge", "battles_run",
                        "pairwise_equivalent"])
            for seed, c in zip(seeds, curves):
                w.writerow([seed, "" if c.converged_at is None else c.converged_at,
                            "" if c.battles_to_converge is None else c.battles_to_converge,
                            c.battles_run, c.pairwise_equivalent])
        with open(out_dir / f"{stem}_curves.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["battle_index", *(f"mse_seed{s}" for s in seeds)])
            longest = max(len(c.mse_per_battle) for c in curves)
            for t in range(longest):
                w.writerow([t, *(repr(c.mse_per_battle[t]) if t < len(c.mse_per_battle) else ""
                                 for c in curves)])
        med = median_battles(curves)
        summary[variant] = {
            "converged_at": [c.converged_at for c in curves],
            "converged_runs": sum(c.converged_at is not None for c in curves),
            "median_battles_to_converge": None if med == float("inf") else med,
        }
    return summary


def write_regret(out_dir: Path, seeds: Sequence[int]) -> dict:
    ucb, rand = mean_regret(REGRET_MEANS, REGRET_HORIZON, list(seeds))
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "regret.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "ucb_regret", "random_regret"])
        for t in range(REGRET_HORIZON):
            w.writerow([t + 1, repr(float(ucb[t])), repr(float(rand[t]))])
    n = REGRET_HORIZON
    return {"ucb_regret_at_n": float(ucb[-1]), "random_regret_at_n": float(rand[-1]),
            "random_closed_form": n * (max(REGRET_MEANS) - sum(REGRET_MEANS) / len(REGRET_MEANS)),
            "n": n, "seeds": len(seeds)}


def bench(suites: Sequence[str], out_dir: Path, seeds: Sequence[int] = range(10),
          regret_seeds: Sequence[int] = range(100), jobs: int = 1) -> dict:
    seeds = list(seeds)
    report = {}
    for name in suites:
        if name == "regret":
            report[name] = write_regret(out_dir, regret_seeds)
        else:
            report[name] = write_suite(name, run_suite(name, seeds, jobs), seeds, out_dir)
    with open(out_dir / "bench_summary.json", "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return report
