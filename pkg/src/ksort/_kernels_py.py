"""Pure-Python implementations of the hot kernels.

This module mirrors ``_kernels.pyx`` function for function and is used when
the compiled extension is unavailable (or ``KSORT_PURE_PYTHON=1``).  Both
backends evaluate the same expressions in the same order, so results agree
bit for bit on IEEE-754 hardware.
"""
from __future__ import annotations

from math import erfc, exp, inf, log, sqrt

INV_SQRT_2PI = 0.3989422804014327
LOG_SQRT_2PI = 0.9189385332046728
SQRT1_2 = 0.7071067811865476

# v_fn switches from direct division to the log-domain path below this point,
# and to the continued fraction below _CF_SWITCH (erfc underflows near -37).
_LOG_SWITCH = -5.0
_CF_SWITCH = -25.0
_CF_TERMS = 40

_MASK = 0xFFFFFFFFFFFFFFFF


def std_pdf(x: float) -> float:
    return INV_SQRT_2PI * exp(-0.5 * x * x)


def std_cdf(x: float) -> float:
    return 0.5 * erfc(-x * SQRT1_2)


def _mills_tail(t: float) -> tuple[float, float]:
    # Backward evaluation of the continued fraction
    #   Phi(-t)/phi(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...))))
    # Returns (outer, inner) denominators; v = outer and v - t = 1/inner.
    f = t
    k = _CF_TERMS
    while k > 1:
        f = t + k / f
        k -= 1
    return t + 1.0 / f, f


def v_fn(x: float) -> float:
    if x >= _LOG_SWITCH:
        return std_pdf(x) / std_cdf(x)
    if x >= _CF_SWITCH:
        return exp(-0.5 * x * x - LOG_SQRT_2PI - log(0.5 * erfc(-x * SQRT1_2)))
    return _mills_tail(-x)[0]


def vw(x: float) -> tuple[float, float]:
    """Return ``(v_fn(x), w_fn(x))`` sharing one evaluation."""
    if x >= _CF_SWITCH:
        v = v_fn(x)
        return v, v * (v + x)
    outer, inner = _mills_tail(-x)
    return outer, outer * (1.0 / inner)


def w_fn(x: float) -> float:
    return vw(x)[1]


def kwise_apply(mu, sigma, beta, winners, losers, sigma_min: float):
    """Simultaneous K-wise update over local indices.

    ``winners[r]`` beat ``losers[r]``; relations must already be in canonical
    order.  Returns new ``(mu, sigma)`` lists.
    """
    n = len(mu)
    mu_acc = [0.0] * n
    var_acc = [0.0] * n
    s2 = [s * s for s in sigma]
    b2 = [b * b for b in beta]
    for r in range(len(winners)):
        i = winners[r]
        q = losers[r]
        c2 = b2[i] + b2[q] + s2[i] + s2[q]
        c = sqrt(c2)
        v, w = vw((mu[i] - mu[q]) / c)
        shift = v / c
        mu_acc[i] += shift
        mu_acc[q] -= shift
        var_acc[i] += s2[i] * w / c2
        var_acc[q] += s2[q] * w / c2
    floor2 = sigma_min * sigma_min
    new_mu = [0.0] * n
    new_sigma = [0.0] * n
    for i in range(n):
        new_mu[i] = mu[i] + s2[i] * mu_acc[i]
        var = s2[i] * (1.0 - var_acc[i])
        if var < floor2:
            var = floor2
        new_sigma[i] = sqrt(var)
    return new_mu, new_sigma


def _mix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def tiebreak_key(seed: int, salt: int, ident: int) -> int:
    return _mix64((_mix64((_mix64(seed & _MASK) ^ (salt & _MASK))) ^ (ident & _MASK)))


def ucb_values(pivot_score: float, scores, counts, n_total: int, alpha: float, similar: bool):
    """UCB value of every candidate against the pivot."""
    log_n = log(n_total) if n_total > 1 else 0.0
    out = [0.0] * len(scores)
    for j in range(len(scores)):
        gap = abs(pivot_score - scores[j])
        if alpha == 0.0:
            explore = 0.0
        elif counts[j] == 0:
            explore = inf
        else:
            explore = alpha * sqrt(log_n / counts[j])
        out[j] = explore - gap if similar else explore + gap
    return out


def ucb_greedy(pivot_score: float, scores, counts, keys, n_total: int, alpha: float,
               similar: bool, n_pick: int):
    """Greedy sequential argmax; returns candidate positions in pick order.

    Ties on the UCB value go to the smaller tie-break key.
    """
    values = ucb_values(pivot_score, scores, counts, n_total, alpha, similar)
    taken = [False] * len(values)
    picks = []
    for _ in range(n_pick):
        best = -1
        for j in range(len(values)):
            if taken[j]:
                continue
            if (best < 0 or values[j] > values[best]
                    or (values[j] == values[best] and keys[j] < keys[best])):
                best = j
        taken[best] = True
        picks.append(best)
    return picks


def argmin_keyed(values, keys) -> int:
    best = 0
    for j in range(1, len(values)):
        if values[j] < values[best] or (values[j] == values[best] and keys[j] < keys[best]):
            best = j
    return best


def rank_positions(scores):
    """1-based positions by descending score, ties by index."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    pos = [0] * len(scores)
    for p, i in enumerate(order):
        pos[i] = p + 1
    return pos


def rank_mse(scores, labels) -> float:
    pos = rank_positions(scores)
    total = 0
    for i in range(len(pos)):
        d = pos[i] - labels[i]
        total += d * d
    return total / len(pos)
