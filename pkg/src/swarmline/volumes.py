"""Cancellation-safe volumes of simplex / axis-aligned hypercuboid intersections.

Everything here reduces to alternating inclusion-exclusion sums of the shape

    sum_k (+/-) C(k) * max(base(k), 0)^p

whose individual terms can exceed the final value by tens of orders of
magnitude (binomial coefficients vs geometrically shrinking bases).  Plain
double precision silently loses the answer in that regime, so every sum is
evaluated with mpmath at an adaptively chosen mantissa width: start at
``PrecisionPolicy.initial_bits``, double until two consecutive evaluations
agree to ``rel_accuracy``, and certify exact zeros by comparing the residual
against the round-off floor of the largest term.

The two geometric kernels:

* ``simplex_hypercuboid_volume``  -- Vol(T(a,b) ∩ prod [0, e_i]) where
  T(a,b) = {x >= 0, a.x <= b}.  After rescaling x_i -> a_i x_i this is the
  classic corner inclusion-exclusion over the box vertices, divided by the
  Jacobian prod(a_i).
* ``displaced_intersection_volume`` -- Vol(T(a,b) ∩ H(v_c, v_f)) for a box
  displaced away from the origin.  Subtracting the exterior slabs
  {x_i <= v_c,i} of H(0, v_f) via inclusion-exclusion telescopes into a
  single signed sum over the 2^n corners of H(v_c, v_f): a corner taking
  v_f in j coordinates carries sign (-1)^j.

Coordinates sharing the same (a_i, v_c_i, v_f_i) data are exchangeable, so
the 2^n corner sums are grouped into products of binomial coefficients;
boxes with one or two distinct face lengths (the common case here) cost
O(n) or O(n^2) terms instead of 2^n.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from mpmath import mp

__all__ = [
    "PrecisionPolicy",
    "SimplexSpec",
    "HypercuboidSpec",
    "DimensionMismatchError",
    "PrecisionExhaustedError",
    "GuardExceededError",
    "DEFAULT_POLICY",
    "EXPONENTIAL_GUARD_DIM",
    "generalized_binomial",
    "symmetric_pie_volume",
    "simplex_hypercuboid_volume",
    "displaced_intersection_volume",
    "displaced_band_volume",
]


class DimensionMismatchError(ValueError):
    pass


class PrecisionExhaustedError(RuntimeError):
    """Raised when max_bits is reached without two agreeing evaluations."""


class GuardExceededError(RuntimeError):
    """Raised when an inclusion-exclusion loop would exceed the term budget."""


# Dimension past which an ungrouped 2^n loop is refused.
EXPONENTIAL_GUARD_DIM = 26
_GUARD_TERMS = 2**EXPONENTIAL_GUARD_DIM


@dataclass(frozen=True)
class PrecisionPolicy:
    """Adaptive-precision settings for the alternating-sum evaluator."""

    rel_accuracy: float = 1e-12
    initial_bits: int = 128
    max_bits: int = 16384

    def __post_init__(self):
        if not (0 < self.rel_accuracy < 1):
            raise ValueError("rel_accuracy must lie in (0, 1)")
        if not (0 < self.initial_bits <= self.max_bits):
            raise ValueError("need 0 < initial_bits <= max_bits")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class SimplexSpec:
    """The corner simplex T(a, b) = {x >= 0 : a.x <= b}, a > 0, b > 0."""

    a: tuple
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        if any(v <= 0 for v in self.a):
            raise ValueError("all simplex coefficients a_i must be positive")
        if not self.b > 0:
            raise ValueError("simplex bound b must be positive")

    @property
    def dim(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class HypercuboidSpec:
    """Axis-aligned box {x : v_c <= x <= v_f} given by its near/far vertices."""

    v_c: tuple
    v_f: tuple

    def __post_init__(self):
        object.__setattr__(self, "v_c", tuple(float(v) for v in self.v_c))
        object.__setattr__(self, "v_f", tuple(float(v) for v in self.v_f))
        if len(self.v_c) != len(self.v_f):
            raise DimensionMismatchError("v_c and v_f must have equal length")
        if any(c < 0 for c in self.v_c):
            raise ValueError("near vertex must be componentwise nonnegative")
        if any(f < c for c, f in zip(self.v_c, self.v_f)):
            raise ValueError("need v_c <= v_f componentwise")

    @property
    def dim(self) -> int:
        return len(self.v_c)


def generalized_binomial(x: float, k: int, *, with_pole_flag: bool = False):
    """Binomial coefficient C(x, k) = Gamma(x+1) / (Gamma(k+1) Gamma(x-k+1)).

    Defined for real x and integer k >= 0 via log-Gamma with sign tracking.
    When x-k+1 sits on a pole of the denominator (x a nonnegative integer
    below k, in particular) the coefficient is 0; with_pole_flag=True returns
    the pair (value, hit_pole) instead of the bare value.
    """
    if k != int(k) or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    k = int(k)
    x = float(x)
    if abs(x - round(x)) < 1e-12 and x >= 0:
        xi = int(round(x))
        if xi < k:
            return (0.0, True) if with_pole_flag else 0.0
        val = float(math.comb(xi, k))
        return (val, False) if with_pole_flag else val

    def signed_lgamma(t: float):
        # Gamma(t) alternates sign on the intervals (-m-1, -m), m = 0, 1, ...
        if t > 0:
            return 1.0, math.lgamma(t)
        if t == int(t):
            return 0.0, math.inf  # pole
        sign = -1.0 if (int(math.floor(-t)) % 2 == 0) else 1.0
        return sign, math.lgamma(t)

    s_num, l_num = signed_lgamma(x + 1.0)
    if s_num == 0.0:
        return (0.0, True) if with_pole_flag else 0.0
    s_d1, l_d1 = signed_lgamma(float(k + 1))
    s_d2, l_d2 = signed_lgamma(x - k + 1.0)
    if s_d2 == 0.0:
        return (0.0, True) if with_pole_flag else 0.0
    val = s_num * s_d1 * s_d2 * math.exp(l_num - l_d1 - l_d2)
    return (val, False) if with_pole_flag else val


def _adaptive(evaluate: Callable[[], tuple], policy: PrecisionPolicy) -> float:
    """Run evaluate() -> (total, scale) at doubling precision until stable.

    scale is the largest absolute term encountered.  Consecutive evaluations
    agreeing to rel_accuracy are accepted; totals that stay below the
    round-off floor of the coarser evaluation are certified as exact zeros.
    """
    bits = policy.initial_bits
    with mp.workprec(bits):
        prev, _ = evaluate()
    while True:
        next_bits = bits * 2
        if next_bits > policy.max_bits:
            raise PrecisionExhaustedError(
                f"no convergence to {policy.rel_accuracy} within {policy.max_bits} mantissa bits"
            )
        with mp.workprec(next_bits):
            cur, scale = evaluate()
            if scale == 0:
                return 0.0
            if cur == prev or abs(cur - prev) <= mp.mpf(policy.rel_accuracy) * abs(cur):
                return float(cur)
            floor = scale * mp.mpf(2) ** (40 - bits)
            if abs(cur) <= floor and abs(prev) <= floor:
                return 0.0
        prev = cur
        bits = next_bits


def symmetric_pie_volume(
    n_terms: int,
    term_count: Callable[[int], object],
    term_base: Callable[[int], object],
    exponent: float,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> float:
    """Evaluate sum_{k=0}^{n_terms} (-1)^k * count(k) * max(base(k), 0)^exponent.

    The callbacks run inside the working-precision context: build them from
    mpmath operations (mp.binomial, mp.mpf ratios) so intermediate values
    track the ambient precision.  Python ints and floats are exact inputs.
    The convention 0^0 = 1 applies after the max.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")

    def evaluate():
        total = mp.mpf(0)
        scale = mp.mpf(0)
        p = mp.mpf(exponent)
        for k in range(n_terms + 1):
            count = mp.mpf(term_count(k))
            base = mp.mpf(term_base(k))
            if base <= 0:
                term = count if p == 0 else mp.mpf(0)
            else:
                term = count * base**p
            scale = max(scale, abs(term))
            total += term if k % 2 == 0 else -term
        return total, scale

    return _adaptive(evaluate, policy)


def _group_dims(v_c, v_f, a):
    """Group coordinates sharing the (a_i, v_c_i, v_f_i) data.

    Returns [(multiplicity, a_i, low_i, high_i), ...].  Corner weights are
    formed from the raw triples inside the working-precision context, so no
    double-rounded products enter the sum.
    """
    buckets = {}
    for ai, c, f in zip(a, v_c, v_f):
        key = (ai, c, f)
        buckets[key] = buckets.get(key, 0) + 1
    return [(m, ai, c, f) for (ai, c, f), m in sorted(buckets.items())]


def _corner_term_count(groups) -> int:
    count = 1
    for m, _, _, _ in groups:
        count *= m + 1
    return count


def _check_guard(n: int, groups):
    terms = _corner_term_count(groups)
    if terms > _GUARD_TERMS:
        raise GuardExceededError(
            f"inclusion-exclusion would need {terms} terms "
            f"(> 2^{EXPONENTIAL_GUARD_DIM}); no face symmetry to exploit"
        )
    if n > EXPONENTIAL_GUARD_DIM and terms > 2**20:
        warnings.warn(
            f"{terms}-term inclusion-exclusion in dimension {n}; this will be slow",
            RuntimeWarning,
            stacklevel=3,
        )


def _band_volume_grouped(
    groups,
    n: int,
    a: Sequence[float],
    b_hi: float,
    b_lo: Optional[float],
    policy: PrecisionPolicy,
) -> float:
    """Corner inclusion-exclusion for Vol(T(a, b_hi) ∩ box) minus, when
    b_lo is given, Vol(T(a, b_lo) ∩ box).

    Both bounds are evaluated inside one adaptive pass so their difference
    cannot cancel in double precision.
    """
    _check_guard(n, groups)
    ranges = [range(m + 1) for m, _, _, _ in groups]

    def evaluate():
        total = mp.mpf(0)
        scale = mp.mpf(0)
        nn = mp.mpf(n)
        bh = mp.mpf(b_hi)
        bl = None if b_lo is None else mp.mpf(b_lo)
        weights = [(mp.mpf(ai) * mp.mpf(c), mp.mpf(ai) * mp.mpf(f)) for _, ai, c, f in groups]
        for ks in itertools.product(*ranges):
            coef = 1
            ones = 0
            w = mp.mpf(0)
            for (m, _, _, _), (w_lo, w_hi), k in zip(groups, weights, ks):
                coef *= math.comb(m, k)
                ones += k
                w += k * w_hi + (m - k) * w_lo
            base_hi = bh - w
            term = base_hi**nn if base_hi > 0 else mp.mpf(0)
            if bl is not None:
                base_lo = bl - w
                if base_lo > 0:
                    term -= base_lo**nn
            term *= coef
            scale = max(scale, abs(term))
            total += term if ones % 2 == 0 else -term
        total /= mp.factorial(n)
        for ai in a:
            total /= mp.mpf(ai)
        return total, scale

    return _adaptive(evaluate, policy)


def simplex_hypercuboid_volume(
    simplex: SimplexSpec,
    edges: Sequence[float],
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> float:
    """Vol(T(a,b) ∩ prod_i [0, edge_i]).

    Equals (n! prod a_i)^-1 * sum over box corners v of
    (-1)^{|v|} max(b - a.(edges*v), 0)^n.  Degenerate boxes (an edge of
    length 0) have measure zero and return 0 immediately.
    """
    edges = [float(e) for e in edges]
    if len(edges) != simplex.dim:
        raise DimensionMismatchError(
            f"simplex dimension {simplex.dim} != edge count {len(edges)}"
        )
    if any(e < 0 for e in edges):
        raise ValueError("edge lengths must be nonnegative")
    if any(e == 0 for e in edges):
        return 0.0
    n = simplex.dim
    groups = _group_dims((0.0,) * n, tuple(edges), simplex.a)
    return _band_volume_grouped(groups, n, simplex.a, simplex.b, None, policy)


def displaced_band_volume(
    simplex: SimplexSpec,
    box: HypercuboidSpec,
    b_lower: Optional[float],
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> float:
    """Vol(T(a, b) ∩ H(v_c, v_f)) minus Vol(T(a, b_lower) ∩ H(v_c, v_f)).

    With b_lower = None (or <= 0) only the first volume is returned.  The
    conflict-free probabilities need such differences (the implicit last
    slack restricted to a band), and evaluating both bounds in one adaptive
    pass keeps the subtraction cancellation-safe.
    """
    if box.dim != simplex.dim:
        raise DimensionMismatchError(
            f"simplex dimension {simplex.dim} != box dimension {box.dim}"
        )
    if any(f == c for c, f in zip(box.v_c, box.v_f)):
        return 0.0
    if b_lower is not None and b_lower <= 0:
        b_lower = None
    groups = _group_dims(box.v_c, box.v_f, simplex.a)
    return _band_volume_grouped(groups, simplex.dim, simplex.a, simplex.b, b_lower, policy)


def displaced_intersection_volume(
    simplex: SimplexSpec,
    box: HypercuboidSpec,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> float:
    """Vol(T(a,b) ∩ H(v_c, v_f)) for a displaced axis-aligned box.

    Computed as the overestimate on H(0, v_f) minus the inclusion-exclusion
    over the exterior slabs {x_i <= v_c,i}, which telescopes to one signed
    sum over the corners of H(v_c, v_f): corners taking v_f in j coordinates
    carry sign (-1)^j.  Reduces to simplex_hypercuboid_volume when v_c = 0.
    """
    return displaced_band_volume(simplex, box, None, policy)
