"""Closed-form coverage properties for i.i.d. uniform positions, robots may overlap.

With n positions uniform on [0, s], the n+1 slacks (gaps between consecutive
robots, padded with virtual robots at 0 and s) are exchangeable and jointly
uniform on the simplex {slacks >= 0, sum = s}.  Every probability below is a
ratio of polytope volumes and comes out as an alternating binomial sum in
(1 - k d / s)^n; those sums are evaluated through the adaptive-precision
machinery in :mod:`swarmline.volumes` because their terms can dwarf the
result by many orders of magnitude.

Swarm sizes may be fractional (binomials generalize through the Gamma
function); the component-count pmf requires an integer n.
"""
from __future__ import annotations

import math

from mpmath import mp

from .scenario import CoverageScenario, ScenarioError, clamp_probability
from .volumes import (
    DEFAULT_POLICY,
    HypercuboidSpec,
    PrecisionPolicy,
    SimplexSpec,
    displaced_band_volume,
    symmetric_pie_volume,
)

__all__ = [
    "p_mon",
    "p_mon_via_volumes",
    "p_con",
    "p_sen",
    "cmp_pmf",
    "cmp_support_max",
    "expected_cmp",
    "expected_slen",
    "expected_deg",
    "position_marginal_pdf",
    "slack_marginal_pdf",
]


def p_mon(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Probability that every slack is at most d (boundary fully monitored).

    p_mon = sum_{k=0}^{n_min} (-1)^k C(n+1, k) max(1 - k d/s, 0)^n.
    """
    scn.require_positive_n()
    s, d, n = scn.s, scn.d, scn.n
    val = symmetric_pie_volume(
        scn.n_min,
        lambda k: mp.binomial(mp.mpf(n) + 1, k),
        lambda k: 1 - mp.mpf(k) * mp.mpf(d) / mp.mpf(s),
        n,
        policy,
    )
    return clamp_probability(val)


def p_mon_via_volumes(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """p_mon computed through the volume kernels instead of the binomial sum.

    In full-dimensional slack coordinates (dropping the last slack),
    monitoring is {slacks in [0,d]^n} with the implicit last slack also <= d:

        Vol = Vol(T(1, s) ∩ [0,d]^n) - Vol(T(1, s-d) ∩ [0,d]^n)

    normalized by the simplex volume s^n / n!.  The two kernel evaluations
    share one adaptive pass so their difference cannot cancel in double
    precision.  Requires integer n; serves as an independent code path for
    cross-checking p_mon.
    """
    n = scn.int_n()
    if n < 1:
        raise ScenarioError("p_mon_via_volumes requires n >= 1")
    s, d = scn.s, scn.d
    box = HypercuboidSpec((0.0,) * n, (d,) * n)
    vol = displaced_band_volume(SimplexSpec((1.0,) * n, s), box, s - d, policy)
    with mp.workprec(max(policy.initial_bits, 64)):
        val = mp.mpf(vol) * mp.factorial(n) / mp.mpf(s) ** n
    return clamp_probability(float(val))


def p_con(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Probability that all interior slacks are at most d (network connected).

    p_con = sum_{i=0}^{n_min} (-1)^i C(n-1, i) max(1 - i d/s, 0)^n.
    """
    scn.require_positive_n()
    s, d, n = scn.s, scn.d, scn.n
    val = symmetric_pie_volume(
        scn.n_min,
        lambda i: mp.binomial(mp.mpf(n) - 1, i),
        lambda i: 1 - mp.mpf(i) * mp.mpf(d) / mp.mpf(s),
        n,
        policy,
    )
    return clamp_probability(val)


def p_sen(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Probability that the boundary is fully sensed.

    Full sensing requires both end slacks <= d and every interior slack
    <= 2d.  Inclusion-exclusion over the violating slack subsets groups by
    the count of bad ends (0, 1 or 2), giving three binomial families at
    level i with length deficits 2i*d, (2i-1)*d and (2i-2)*d:

        p_sen = sum_{i >= 0} (-1)^i [ C(n-1, i)   max(1 - 2i d/s, 0)^n
                                    + 2 C(n-1, i-1) max(1 - (2i-1) d/s, 0)^n
                                    + C(n-1, i-2)  max(1 - (2i-2) d/s, 0)^n ]

    with C(n-1, j) = 0 for j < 0.  The i = 0 term is 1.
    """
    scn.require_positive_n()
    s, d, n = scn.s, scn.d, scn.n
    n_terms = scn.n_min

    def family(shift, deficit_offset):
        # family with binomial index i - shift and deficit (2i + offset) d
        return symmetric_pie_volume(
            n_terms,
            lambda i: mp.binomial(mp.mpf(n) - 1, i - shift) if i >= shift else mp.mpf(0),
            lambda i: 1 - mp.mpf(2 * i + deficit_offset) * mp.mpf(d) / mp.mpf(s),
            n,
            policy,
        )

    interior_only = family(0, 0)
    one_end = 2 * family(1, -1)
    both_ends = family(2, -2)
    return clamp_probability(interior_only + one_end + both_ends)


def cmp_support_max(scn: CoverageScenario) -> int:
    """Largest component count with positive probability: 1 + the largest
    number of interior slacks that can simultaneously exceed d."""
    n = scn.int_n()
    jmax = min(n - 1, scn.n_min)
    # at an exact integer ratio the j = n_min arrangement has zero volume
    if jmax * scn.d >= scn.s:
        jmax -= 1
    return 1 + max(jmax, 0)


def cmp_pmf(scn: CoverageScenario, k: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """P(number of connected components = k) for integer n.

    P(cmp = k) = sum_{j=k-1}^{min(n-1, n_min)} (-1)^{j-k+1}
                 C(n-1, j) C(j, k-1) max(1 - j d/s, 0)^n.

    The sum self-truncates through the max: arrangements needing j
    disconnected interior slacks vanish once j d >= s.  Support runs from
    k = 1 (connected, equal to p_con) up to cmp_support_max(scn).
    """
    n = scn.int_n()
    if n < 1:
        raise ScenarioError("cmp_pmf requires n >= 1")
    if not (1 <= k <= n):
        raise ScenarioError(f"component count k must lie in [1, n], got k={k}")
    s, d = scn.s, scn.d
    jmax = min(n - 1, scn.n_min)
    if k - 1 > jmax:
        return 0.0

    def count(t):
        j = t + k - 1
        return mp.binomial(n - 1, j) * mp.binomial(j, k - 1)

    val = symmetric_pie_volume(
        jmax - (k - 1),
        count,
        lambda t: 1 - mp.mpf(t + k - 1) * mp.mpf(d) / mp.mpf(s),
        n,
        policy,
    )
    return clamp_probability(val)


def expected_cmp(scn: CoverageScenario) -> float:
    """E(number of connected components) = 1 + (n-1)(1 - d/s)^n."""
    scn.require_positive_n()
    q = (1.0 - scn.d / scn.s) ** scn.n
    return 1.0 + (scn.n - 1.0) * q


def expected_slen(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Expected sensed length, defined as s * p_sen."""
    return scn.s * p_sen(scn, policy)


def expected_deg(scn: CoverageScenario) -> float:
    """Expected vertex degree: (n-1) (2 d s - d^2) / s^2."""
    scn.require_positive_n()
    return (scn.n - 1.0) * (2.0 * scn.d * scn.s - scn.d**2) / scn.s**2


def position_marginal_pdf(scn: CoverageScenario, i: int, x: float) -> float:
    """Density of the i-th ordered position: Beta(i, n-i+1) scaled to [0, s]."""
    n = scn.int_n()
    if not (1 <= i <= n):
        raise ScenarioError(f"order-statistic index i must lie in [1, n], got {i}")
    if not (0 <= x <= scn.s):
        raise ScenarioError(f"position x must lie in [0, s], got {x}")
    u = x / scn.s
    log_norm = math.lgamma(n + 1) - math.lgamma(i) - math.lgamma(n - i + 1)
    if u == 0.0:
        core = 1.0 if i == 1 else 0.0
        return math.exp(log_norm) * core / scn.s
    if u == 1.0:
        core = 1.0 if i == n else 0.0
        return math.exp(log_norm) * core / scn.s
    return math.exp(log_norm + (i - 1) * math.log(u) + (n - i) * math.log1p(-u)) / scn.s


def slack_marginal_pdf(scn: CoverageScenario, x: float) -> float:
    """Common density of any single slack: (n/s)(1 - x/s)^(n-1)."""
    n = scn.int_n()
    if n < 1:
        raise ScenarioError("slack_marginal_pdf requires n >= 1")
    if not (0 <= x <= scn.s):
        raise ScenarioError(f"slack x must lie in [0, s], got {x}")
    return (n / scn.s) * (1.0 - x / scn.s) ** (n - 1)
