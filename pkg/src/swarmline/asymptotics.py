"""Threshold estimates and Poisson approximations of the coverage properties.

The slack indicator variables are negatively associated, so their sums
Poissonize.  For the all-slacks-good events (monitoring, connectivity, full
sensing) the useful approximation at design scale is the void probability of
the *deficiency* count: with W = number of violating slacks,

    P(event) = P(W = 0) ~ exp(-E W),

which for monitoring reads exp(lambda_mon - (n+1)) since E W = (n+1) - lambda_mon.
The rates carried by :class:`PoissonRates` are the means of the good-slack
counts themselves.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .scenario import CoverageScenario, ScenarioError, clamp_probability

__all__ = [
    "PoissonRates",
    "DegreeRegime",
    "lambert_w_m1",
    "monitoring_guess_n",
    "sharp_threshold_n",
    "poisson_rates",
    "p_mon_poisson",
    "p_con_poisson",
    "p_sen_poisson",
    "void_probability",
    "degree_regime",
    "tv_bound",
]

_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class PoissonRates:
    """Poisson means for the counts of connected / sensed slacks and components."""

    lambda_mon: float
    lambda_con: float
    lambda_sen: float
    lambda_cmp: float

    def __post_init__(self):
        for name in ("lambda_mon", "lambda_con", "lambda_sen", "lambda_cmp"):
            if getattr(self, name) < 0:
                raise ScenarioError(f"{name} must be nonnegative")


class DegreeRegime(enum.Enum):
    THERMODYNAMIC = "thermodynamic"
    CONNECTIVITY = "connectivity"
    SUPERCONNECTIVITY = "superconnectivity"
    SUBCONNECTIVITY = "subconnectivity"


def lambert_w_m1(x: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    """Secondary real branch W_-1 of w e^w = x, for x in (-1/e, 0).

    Halley iteration from the asymptotic seed w0 = L1 - L2 + L2/L1 with
    L1 = log(-x), L2 = log(-L1); converges to relative tolerance tol.
    """
    if not (-_INV_E < x < 0):
        raise ValueError(f"W_-1 requires x in (-1/e, 0), got {x}")
    l1 = math.log(-x)
    l2 = math.log(-l1) if l1 < 0 else 0.0
    w = l1 - l2 + (l2 / l1 if l1 != 0 else 0.0)
    if w > -1.0:
        w = -1.0 - 1e-6
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0))
        step = f / denom
        w -= step
        if abs(step) <= tol * max(1.0, abs(w)):
            return w
    raise RuntimeError(f"Lambert W_-1 Halley iteration did not converge for x={x}")


def monitoring_guess_n(s: float, d: float) -> float:
    """Swarm size n with log(n+1)/(n+1) = d/s, the scale at which the
    expected longest slack just stays connected.

    Solved on the W_-1 branch: n = exp(-W_-1(-d/s)) - 1.  Requires
    0 < d/s < 1/e for a real solution with n+1 > e.
    """
    if not (0 < d < s):
        raise ValueError(f"need 0 < d < s, got d={d}, s={s}")
    ratio = d / s
    if ratio >= _INV_E:
        raise ValueError(f"d/s = {ratio} >= 1/e: no solution with n+1 > e")
    return math.exp(-lambert_w_m1(-ratio)) - 1.0


def sharp_threshold_n(s: float, d: float) -> float:
    """Sharp monitoring threshold n d = s log s, i.e. n = s log(s) / d."""
    if not (s > 1 and d > 0):
        raise ValueError(f"need s > 1 and d > 0, got s={s}, d={d}")
    return s * math.log(s) / d


def _q1(scn: CoverageScenario) -> float:
    """P(one slack > d) = (1 - d/s)^n."""
    return math.exp(scn.n * math.log1p(-scn.d / scn.s)) if scn.d < scn.s else 0.0


def _q2(scn: CoverageScenario) -> float:
    """P(one slack > 2d) = max(1 - 2d/s, 0)^n."""
    base = 1.0 - 2.0 * scn.d / scn.s
    return math.exp(scn.n * math.log(base)) if base > 0 else 0.0


def poisson_rates(scn: CoverageScenario) -> PoissonRates:
    """Poisson means for the slack counts of a uniform-parent scenario.

    With p1 = P(slack <= d) and p2 = P(slack <= 2d):
    lambda_mon = (n+1) p1, lambda_con = (n-1) p1,
    lambda_sen = (n-1) p2 + 2 p1 (n-1 interior + 2 end indicators), and
    lambda_cmp = 1 + (n-1)(1-p1) = E(cmp).
    """
    scn.require_positive_n()
    n = scn.n
    q1, q2 = _q1(scn), _q2(scn)
    return PoissonRates(
        lambda_mon=(n + 1) * (1.0 - q1),
        lambda_con=(n - 1) * (1.0 - q1),
        lambda_sen=(n - 1) * (1.0 - q2) + 2.0 * (1.0 - q1),
        lambda_cmp=1.0 + (n - 1) * q1,
    )


def void_probability(expected_violations: float) -> float:
    """P(Poisson(lambda) = 0) = exp(-lambda) for the violation count."""
    if expected_violations < 0:
        raise ScenarioError("expected violation count must be nonnegative")
    return clamp_probability(math.exp(-expected_violations))


def p_mon_poisson(scn: CoverageScenario) -> float:
    """Poisson estimate of p_mon: exp(lambda_mon - (n+1)), the probability
    that the count of disconnected slacks (mean (n+1)(1-d/s)^n) is zero."""
    scn.require_positive_n()
    return void_probability((scn.n + 1) * _q1(scn))


def p_con_poisson(scn: CoverageScenario) -> float:
    """Poisson estimate of p_con: zero disconnected interior slacks."""
    scn.require_positive_n()
    return void_probability((scn.n - 1) * _q1(scn))


def p_sen_poisson(scn: CoverageScenario) -> float:
    """Poisson estimate of p_sen: zero sensing violations, the interior
    counted against 2d and the two end slacks against d."""
    scn.require_positive_n()
    return void_probability((scn.n - 1) * _q2(scn) + 2.0 * _q1(scn))


def degree_regime(
    n: float, d_over_s: float, c_low: float = 0.5, c_high: float = 2.0
) -> DegreeRegime:
    """Classify the (n, d/s) growth regime of the expected vertex degree.

    n * d/s within [c_low, c_high] is the thermodynamic limit (bounded mean
    degree); n * d/s / log(n) within the band is the connectivity regime;
    above it superconnectivity, below it subconnectivity.
    """
    if n < 2:
        raise ValueError("regime classification needs n >= 2")
    if d_over_s <= 0:
        raise ValueError("d_over_s must be positive")
    nd = n * d_over_s
    if c_low <= nd <= c_high:
        return DegreeRegime.THERMODYNAMIC
    ratio = nd / math.log(n)
    if c_low <= ratio <= c_high:
        return DegreeRegime.CONNECTIVITY
    if ratio > c_high:
        return DegreeRegime.SUPERCONNECTIVITY
    return DegreeRegime.SUBCONNECTIVITY


def tv_bound(lam: float, variance: float) -> float:
    """Total-variation bound (1 - e^-lambda)(1 - Var/lambda) for the Poisson
    approximation of a sum of negatively associated indicators."""
    if lam < 0 or variance < 0:
        raise ValueError("lambda and variance must be nonnegative")
    if variance > lam:
        raise ValueError(f"variance {variance} exceeds lambda {lam}")
    if lam == 0:
        return 0.0
    return (1.0 - math.exp(-lam)) * (1.0 - variance / lam)
