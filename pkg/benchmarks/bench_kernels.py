"""Time the compiled kernels against the pure-Python twin.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best-of-N time for each backend and the
speedup.  Both backends are loaded directly, so no environment variable is needed.
"""
from __future__ import annotations

import argparse
import random
import timeit

from ksort import _kernels_py as py

try:
    from ksort import _kernels as cy
except ImportError:  # pragma: no cover
    cy = None


def workloads(mod):
    rnd = random.Random(0)
    xs = [rnd.uniform(-30, 10) for _ in range(20_000)]
    k = 6
    mu = [rnd.uniform(0, 50) for _ in range(k)]
    sigma = [rnd.uniform(0.5, 8) for _ in range(k)]
    beta = [2.0] * k
    winners = [i for i in range(k) for j in range(i + 1, k)]
    losers = [j for i in range(k) for j in range(i + 1, k)]
    n = 50
    scores = [rnd.uniform(-20, 40) for _ in range(n)]
    counts = [rnd.randrange(0, 5) for _ in range(n)]
    keys = [mod.tiebreak_key(0, 1, i) for i in range(n)]
    labels = list(range(1, n + 1))
    rnd.shuffle(labels)

    return {
        "vw x20000": lambda: [mod.vw(x) for x in xs],
        "kwise_apply K=6 x1000": lambda: [mod.kwise_apply(mu, sigma, beta, winners, losers, 0.5)
                                          for _ in range(1000)],
        "ucb_greedy N=50 x1000": lambda: [mod.ucb_greedy(scores[0], scores, counts, keys, 200,
                                                         1.0, True, 3) for _ in range(1000)],
        "rank_mse N=50 x1000": lambda: [mod.rank_mse(scores, labels) for _ in range(1000)],
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if cy is None:
        raise SystemExit("compiled extension not built; run pip install --no-build-isolation -e .")
    wp, wc = workloads(py), workloads(cy)
    print(f"{'kernel':26s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name in wp:
        tp = min(timeit.repeat(wp[name], number=1, repeat=args.repeat))
        tc = min(timeit.repeat(wc[name], number=1, repeat=args.repeat))
        print(f"{name:26s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
