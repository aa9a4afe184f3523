"""Conflict-free coverage (robot bodies may not overlap), uniform parent.

Two routes are provided:

* Exact values, integer n only.  The conflict-free constraint spends D of
  every slack, so the slack vector lives on the simplex {slacks >= D,
  sum = s}; the coverage events intersect it with displaced hypercuboids
  and the volume ratios come from the corner inclusion-exclusion kernels.
  The implicit last slack is handled by restricting the simplex bound to a
  band (its allowed interval), evaluated in one cancellation-safe pass.

* The free slack approximation (FSA): substitute the total free slack
  s~ = s - (n+1) D and reduced range d~ = d - D into the overlap-tolerant
  closed forms.  Continuous in n, which is what the design solver needs.
  For the component count the substitution is in fact exact, not an
  approximation: both the conflict constraint (slack >= D) and the
  disconnection events (slack > d) are half-space conditions that translate
  verbatim into free-slack coordinates.

The expected sensed length under FSA is s * p_sen(s~, d~, n): sensing is
measured on the full boundary even though the slack bookkeeping happens in
free-slack coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp

from . import uniform_ct
from .scenario import CoverageScenario, PropertyEstimate, ScenarioError, clamp_probability
from .volumes import (
    DEFAULT_POLICY,
    HypercuboidSpec,
    PrecisionPolicy,
    SimplexSpec,
    displaced_band_volume,
)

__all__ = [
    "FreeSlackView",
    "free_slack_view",
    "fsa_scenario",
    "fsa_property",
    "p_mon_exact_cf",
    "p_con_exact_cf",
    "p_sen_exact_cf",
    "cmp_pmf_exact_cf",
    "expected_cmp_exact_cf",
    "FSA_KINDS",
]


@dataclass(frozen=True)
class FreeSlackView:
    """Total free slack s~ = s - (n+1) D and reduced range d~ = d - D."""

    s_tilde: float
    d_tilde: float

    def __post_init__(self):
        if self.s_tilde <= 0:
            raise ScenarioError(f"total free slack must be positive, got {self.s_tilde}")
        if self.d_tilde <= 0:
            raise ScenarioError(f"reduced range must be positive, got {self.d_tilde}")


def free_slack_view(scn: CoverageScenario) -> FreeSlackView:
    """Free-slack parameters of a conflict-free scenario."""
    scn.require_cf()
    return FreeSlackView(scn.s - (scn.n + 1) * scn.D, scn.d - scn.D)


def fsa_scenario(scn: CoverageScenario) -> CoverageScenario:
    """The substituted scenario (s~, d~, D=0, n) used by the approximation."""
    view = free_slack_view(scn)
    if view.d_tilde > view.s_tilde:
        raise ScenarioError(
            f"free slack approximation needs d-D <= s-(n+1)D, "
            f"got d~={view.d_tilde}, s~={view.s_tilde}"
        )
    return CoverageScenario(view.s_tilde, view.d_tilde, 0.0, scn.n)


FSA_KINDS = (
    "p_mon",
    "p_con",
    "p_sen",
    "expected_cmp",
    "expected_slen",
    "expected_deg",
    "cmp_pmf",
)


def fsa_property(
    scn: CoverageScenario,
    kind: str,
    k: int = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> PropertyEstimate:
    """Free slack approximation of one coverage property.

    kind selects among p_mon, p_con, p_sen, expected_cmp, expected_slen,
    expected_deg and cmp_pmf (the latter takes the component count k).
    """
    if kind not in FSA_KINDS:
        raise ScenarioError(f"unknown property kind {kind!r}; expected one of {FSA_KINDS}")
    sub = fsa_scenario(scn)
    if kind == "p_mon":
        value = uniform_ct.p_mon(sub, policy)
    elif kind == "p_con":
        value = uniform_ct.p_con(sub, policy)
    elif kind == "p_sen":
        value = uniform_ct.p_sen(sub, policy)
    elif kind == "expected_cmp":
        value = uniform_ct.expected_cmp(sub)
    elif kind == "expected_slen":
        # sensing is measured on the full boundary
        value = scn.s * uniform_ct.p_sen(sub, policy)
    elif kind == "expected_deg":
        value = uniform_ct.expected_deg(sub)
    else:
        if k is None:
            raise ScenarioError("cmp_pmf needs the component count k")
        value = uniform_ct.cmp_pmf(sub, k, policy)
    return PropertyEstimate(value=value, method="fsa")


def _cf_simplex_and_norm(scn: CoverageScenario, policy: PrecisionPolicy):
    n = scn.int_n()
    if n < 1:
        raise ScenarioError("exact conflict-free computations require n >= 1")
    scn.require_cf()
    return n


def _cf_ratio(scn, vol: float, policy: PrecisionPolicy) -> float:
    """Normalize a favorable volume by Vol(S_CF) = s~^n / n!."""
    n = scn.int_n()
    s_tilde = scn.s - (scn.n + 1) * scn.D
    with mp.workprec(max(policy.initial_bits, 64)):
        val = mp.mpf(vol) * mp.factorial(n) / mp.mpf(s_tilde) ** n
    return clamp_probability(float(val))


def _cf_event_probability(
    scn: CoverageScenario,
    v_f_first: float,
    v_f_rest: float,
    last_low: float,
    last_high: float,
    policy: PrecisionPolicy,
) -> float:
    """P(slacks_1..n in [D, v_f_i], last slack in [last_low, last_high] | CF).

    In full-dimensional coordinates the event is T(1, s - last_low) minus
    T(1, s - last_high) intersected with the box [D, v_f_1] x [D, v_f_rest]^(n-1),
    normalized by the conflict-free simplex volume.  last_high = inf drops
    the second term.
    """
    n = _cf_simplex_and_norm(scn, policy)
    s, D = scn.s, scn.D
    v_f = (min(v_f_first, s),) + (min(v_f_rest, s),) * (n - 1)
    v_c = (D,) * n
    b_hi = s - last_low
    b_lo = None if math.isinf(last_high) else s - last_high
    if b_hi <= 0:
        return 0.0
    simplex = SimplexSpec((1.0,) * n, b_hi)
    vol = displaced_band_volume(simplex, HypercuboidSpec(v_c, v_f), b_lo, policy)
    return _cf_ratio(scn, vol, policy)


def p_mon_exact_cf(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Exact conflict-free monitoring probability.

    Every slack, the implicit last one included, must lie in [D, d].
    """
    return _cf_event_probability(scn, scn.d, scn.d, scn.D, scn.d, policy)


def p_con_exact_cf(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Exact conflict-free connectivity probability.

    Interior slacks in [D, d]; end slacks only conflict-free (>= D).
    """
    return _cf_event_probability(scn, scn.s, scn.d, scn.D, math.inf, policy)


def p_sen_exact_cf(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Exact conflict-free full-sensing probability.

    End slacks in [D, d], interior slacks in [D, 2d].
    """
    return _cf_event_probability(scn, scn.d, 2 * scn.d, scn.D, scn.d, policy)


def cmp_pmf_exact_cf(scn: CoverageScenario, k: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Exact conflict-free component-count pmf.

    The disconnection events depend only on free slacks, so the exact value
    is the overlap-tolerant pmf evaluated at (s~, d~): the inclusion-
    exclusion loop, restricted to bit vectors with a zero first bit and
    between k-1 and n_min-1 ones, collapses by face congruence to that
    binomial sum.
    """
    return uniform_ct.cmp_pmf(fsa_scenario(scn), k, policy)


def expected_cmp_exact_cf(scn: CoverageScenario, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Exact conflict-free expected component count, via the exact pmf."""
    sub = fsa_scenario(scn)
    return uniform_ct.expected_cmp(sub)
