"""Quadrature reference for the pairwise update (test support).

Integrates the marginal posterior of the winner's skill directly, without any
of the closed-form kernels, so it can serve as an independent check.
"""
from __future__ import annotations

import math
import warnings

from scipy import integrate, optimize, special

from .errors import QuadratureError
from .rating import Rating

_HALF_WIDTH = 14.0
_EPSREL = 1e-12
_EPSABS = 1e-14


def posterior_oracle(a: Rating, b: Rating) -> tuple[float, float]:
    """Posterior mean and standard deviation of a's skill given "a beat b".

    The unnormalized density is phi((t - mu_a)/sigma_a) * Phi((t - mu_b)/s)
    with s^2 = beta_a^2 + beta_b^2 + sigma_b^2.  It is integrated in the
    standardized variable z = (t - mu_a)/sigma_a around its mode; the density
    is log-concave with curvature at least one, so +-14 captures everything
    above exp(-98) of the peak.
    """
    s = math.sqrt(a.beta * a.beta + b.beta * b.beta + b.sigma * b.sigma)
    ratio = a.sigma / s
    u0 = (a.mu - b.mu) / s

    def log_f(z: float) -> float:
        return -0.5 * z * z + float(special.log_ndtr(u0 + ratio * z))

    def slope(z: float) -> float:
        u = u0 + ratio * z
        return -z + ratio * math.exp(-0.5 * u * u - 0.5 * math.log(2 * math.pi) - special.log_ndtr(u))

    upper = ratio * ((1.0 - u0) if u0 < 0 else 1.0) + 1.0
    mode = optimize.brentq(slope, 0.0, upper, xtol=1e-14, rtol=1e-15, maxiter=500)
    peak = log_f(mode)

    def moment(power: int, epsabs: float) -> float:
        def integrand(z: float) -> float:
            d = z - mode
            return (d ** power) * math.exp(log_f(z) - peak)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                integrand, mode - _HALF_WIDTH, mode + _HALF_WIDTH, points=[mode],
                epsabs=epsabs, epsrel=_EPSREL, limit=400,
            )
        if not math.isfinite(val) or err > max(epsabs, _EPSREL * abs(val)) * 10:
            raise QuadratureError(
                f"moment {power} did not converge: estimate {val!r}, abs error {err:.3e}")
        return val

    m0 = moment(0, 0.0)
    m1 = moment(1, _EPSABS * m0) / m0
    m2 = moment(2, _EPSABS * m0) / m0
    mean = a.mu + a.sigma * (mode + m1)
    var = a.sigma * a.sigma * (m2 - m1 * m1)
    if var <= 0:
        raise QuadratureError(f"non-positive posterior variance {var!r}")
    return mean, math.sqrt(var)


def pair_posterior_oracle(winner: Rating, loser: Rating) -> tuple[tuple[float, float], tuple[float, float]]:
    """(mean, sd) for both players; the loser's case is the winner's with skills negated."""
    w = posterior_oracle(winner, loser)
    m, s = posterior_oracle(Rating(-loser.mu, loser.sigma, loser.beta),
                            Rating(-winner.mu, winner.sigma, winner.beta))
    return w, (-m, s)
