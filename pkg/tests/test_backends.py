import os
import random
import subprocess
import sys

import pytest

from ksort import _kernels_py as py
from ksort import kernels

cy = pytest.importorskip("ksort._kernels", reason="compiled extension not built")


def test_scalar_kernels_bit_identical():
    rnd = random.Random(1)
    xs = [rnd.uniform(-45, 45) for _ in range(50_000)] + [-25.0, -5.0, 0.0, 37.5, 40.0]
    for x in xs:
        assert cy.std_pdf(x) == py.std_pdf(x)
        assert cy.std_cdf(x) == py.std_cdf(x)
        assert cy.vw(x) == py.vw(x)


def test_kwise_apply_bit_identical():
    rnd = random.Random(2)
    for _ in range(3000):
        k = rnd.randint(2, 7)
        mu = [rnd.uniform(-50, 80) for _ in range(k)]
        sigma = [rnd.uniform(0.05, 15) for _ in range(k)]
        beta = [rnd.uniform(0, 10) for _ in range(k)]
        pairs = [(i, j) if rnd.random() < 0.5 else (j, i)
                 for i in range(k) for j in range(i + 1, k) if rnd.random() < 0.8]
        w = [a for a, _ in pairs]
        l = [b for _, b in pairs]
        floor = rnd.choice([1e-6, 0.6, 2.0])
        assert list(map(list, cy.kwise_apply(mu, sigma, beta, w, l, floor))) == \
            list(map(list, py.kwise_apply(mu, sigma, beta, w, l, floor)))


def test_matchmaking_kernels_bit_identical():
    rnd = random.Random(3)
    for _ in range(2000):
        n = rnd.randint(2, 30)
        scores = [rnd.choice([rnd.uniform(-20, 40), 0.0, 1.0]) for _ in range(n)]
        counts = [rnd.choice([0, 1, 2, 5, 17]) for _ in range(n)]
        seed, salt = rnd.getrandbits(64), rnd.getrandbits(40)
        keys = [py.tiebreak_key(seed, salt, i) for i in range(n)]
        assert keys == [cy.tiebreak_key(seed, salt, i) for i in range(n)]
        n_total = rnd.randint(1, 5000)
        alpha = rnd.choice([0.0, 0.5, 1.0, 3.0])
        similar = rnd.random() < 0.5
        assert cy.ucb_values(scores[0], scores, counts, n_total, alpha, similar) == \
            py.ucb_values(scores[0], scores, counts, n_total, alpha, similar)
        pick = rnd.randint(1, n)
        assert list(cy.ucb_greedy(scores[0], scores, counts, keys, n_total, alpha, similar, pick)) == \
            py.ucb_greedy(scores[0], scores, counts, keys, n_total, alpha, similar, pick)
        assert cy.argmin_keyed(counts, keys) == py.argmin_keyed(counts, keys)
        labels = list(range(1, n + 1))
        rnd.shuffle(labels)
        assert list(cy.rank_positions(scores)) == list(py.rank_positions(scores))
        assert cy.rank_mse(scores, labels) == py.rank_mse(scores, labels)


def test_default_backend_is_compiled():
    assert kernels.compiled_available()
    assert kernels.BACKEND == "cython"


def test_env_var_forces_python_backend():
    env = dict(os.environ, KSORT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ksort.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_simulation_identical_across_backends():
    code = ("from ksort.sim.harness import SimConfig, run_experiment;"
            "c = run_experiment(SimConfig(seed=4, max_battles=300));"
            "print(c.mse_per_battle)")
    res = []
    for flag in ("", "1"):
        env = dict(os.environ, KSORT_PURE_PYTHON=flag)
        res.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                  text=True, check=True).stdout)
    assert res[0] == res[1]
