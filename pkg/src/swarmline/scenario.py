"""Scenario and result types shared across the library.

A coverage scenario is the tuple (s, d, D, n): a boundary of length ``s``,
robots with communication/sensing range ``d`` and body diameter ``D``, and a
swarm size ``n``.  ``n`` may be fractional (the design solver treats it as
continuous); simulation and the exact conflict-free computations require an
integer count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class ScenarioError(ValueError):
    """Raised when a scenario or argument violates a model invariant."""


@dataclass(frozen=True)
class CoverageScenario:
    """Boundary length s, range d, robot diameter D and swarm size n.

    Invariants enforced at construction: s > 0, 0 < d <= s, 0 <= D <= d,
    n >= 0.  Conflict-free computations additionally need positive total
    free slack, checked by :meth:`require_cf`.
    """

    s: float
    d: float
    D: float = 0.0
    n: float = 0.0

    def __post_init__(self):
        if not (self.s > 0):
            raise ScenarioError(f"boundary length s must be positive, got {self.s}")
        if not (0 < self.d <= self.s):
            raise ScenarioError(f"range d must satisfy 0 < d <= s, got d={self.d}, s={self.s}")
        if not (0 <= self.D <= self.d):
            raise ScenarioError(f"diameter D must satisfy 0 <= D <= d, got D={self.D}, d={self.d}")
        if not (self.n >= 0) or math.isnan(self.n):
            raise ScenarioError(f"swarm size n must be nonnegative, got {self.n}")

    @property
    def n_min(self) -> int:
        """Minimum swarm size able to monitor the boundary: floor(s/d)."""
        return int(math.floor(self.s / self.d))

    def require_positive_n(self):
        if self.n < 1:
            raise ScenarioError(f"operation requires n >= 1, got n={self.n}")

    def int_n(self) -> int:
        """Return n as an int, insisting that it is one."""
        if abs(self.n - round(self.n)) > 1e-9:
            raise ScenarioError(f"operation requires integer n, got n={self.n}")
        return int(round(self.n))

    def require_cf(self):
        """Check the conflict-free preconditions (n+1)D < s and D < d."""
        if self.D >= self.d:
            raise ScenarioError(f"conflict-free model requires D < d, got D={self.D}, d={self.d}")
        if (self.n + 1) * self.D >= self.s:
            raise ScenarioError(
                f"nonpositive total free slack: (n+1)*D = {(self.n + 1) * self.D} >= s = {self.s}"
            )

    def with_n(self, n: float) -> "CoverageScenario":
        return CoverageScenario(self.s, self.d, self.D, n)


@dataclass(frozen=True)
class PropertyEstimate:
    """A property value with its provenance tag.

    method is one of "exact", "fsa", "poisson", "mc"; stderr is nonzero
    only for MC estimates.
    """

    value: float
    method: str
    stderr: float = 0.0

    def __post_init__(self):
        if self.method not in ("exact", "fsa", "poisson", "mc"):
            raise ScenarioError(f"unknown method tag {self.method!r}")
        if self.stderr < 0:
            raise ScenarioError("stderr must be nonnegative")


def clamp_probability(p: float) -> float:
    """Snap tiny numerical excursions outside [0,1] back onto the interval."""
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p
