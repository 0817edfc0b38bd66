"""Closed-form radial profiles ``f(r)`` for the five metric families.

Each family is written in terms of ``F = f**2`` because the scalar-curvature
equation is linear in ``F``; ``f`` and its derivatives are derived from
``F, F', F''`` by the chain rule.

    classic-EH    F = 1 - B/r^4
    zero-scalar   F = 1 - 2A/r^2 - B/r^4
    type-I        F = 1 + C/r^2 + A/r^4 + B r^2
    type-II       F = 1 + (sqrt(1 + B r^2) C + A)/r^4
    hyperbolic    F = 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, VerificationError

CLASSIC_EH = "classic-EH"
ZERO_SCALAR = "zero-scalar"
TYPE_I = "type-I"
TYPE_II = "type-II"
HYPERBOLIC = "hyperbolic"

FAMILIES = (CLASSIC_EH, ZERO_SCALAR, TYPE_I, TYPE_II, HYPERBOLIC)

# families whose radial leg is dr / (sqrt(1 + B r^2) f) rather than dr / f
HYPERBOLIC_CHART = (TYPE_II, HYPERBOLIC)


@dataclass(frozen=True)
class RadialProfile:
    family: str
    B: float
    A: float = 0.0
    C: float = 0.0
    r_min: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def _check_radius(self, r: float) -> None:
        if r <= 0.0:
            raise DomainError(f"F is singular at r={r!r}", code="singular-radius")

    def fsq_minus_one(self, r: float) -> float:
        """``F(r) - 1`` evaluated without forming ``F`` (no cancellation)."""
        self._check_radius(r)
        B, A, C = self.B, self.A, self.C
        if self.family == CLASSIC_EH:
            return -B / r**4
        if self.family == ZERO_SCALAR:
            return -2.0 * A / r**2 - B / r**4
        if self.family == TYPE_I:
            return C / r**2 + A / r**4 + B * r * r
        if self.family == TYPE_II:
            return (math.sqrt(1.0 + B * r * r) * C + A) / r**4
        return 0.0

    def fsq(self, r: float, derivative: int = 0) -> float:
        """``F = f**2`` or one of its first two radial derivatives.

        Defined wherever ``r > 0``, including where ``F < 0``.
        """
        self._check_radius(r)
        B, A, C = self.B, self.A, self.C
        fam = self.family
        if derivative == 0:
            return 1.0 + self.fsq_minus_one(r)
        if derivative not in (1, 2):
            raise ValueError("derivative must be 0, 1 or 2")
        d1 = derivative == 1
        if fam == CLASSIC_EH:
            return 4.0 * B / r**5 if d1 else -20.0 * B / r**6
        if fam == ZERO_SCALAR:
            if d1:
                return 4.0 * A / r**3 + 4.0 * B / r**5
            return -12.0 * A / r**4 - 20.0 * B / r**6
        if fam == TYPE_I:
            if d1:
                return -2.0 * C / r**3 - 4.0 * A / r**5 + 2.0 * B * r
            return 6.0 * C / r**4 + 20.0 * A / r**6 + 2.0 * B
        if fam == TYPE_II:
            s = math.sqrt(1.0 + B * r * r)
            s1 = B * r / s
            x = s * C + A
            if d1:
                return s1 * C / r**4 - 4.0 * x / r**5
            s2 = B / s**3
            return s2 * C / r**4 - 8.0 * s1 * C / r**5 + 20.0 * x / r**6
        return 0.0

    def f(self, r: float, derivative: int = 0) -> float:
        """The nonnegative root ``f`` or its derivatives, for ``r >= r_min``.

        Derivatives are refused at ``r_min`` itself, where ``f'`` diverges.
        """
        if r < self.r_min or (derivative > 0 and r <= self.r_min):
            raise DomainError(f"r={r!r} is outside the domain r > {self.r_min!r}")
        F = self.fsq(r)
        if F < 0.0:
            if F > -1e-12:
                F = 0.0
            else:
                raise VerificationError(f"f^2 = {F!r} < 0 at r={r!r}", code="negative-square")
        f = math.sqrt(F)
        if derivative == 0:
            return f
        f1 = self.fsq(r, 1) / (2.0 * f)
        if derivative == 1:
            return f1
        if derivative != 2:
            raise ValueError("derivative must be 0, 1 or 2")
        return (0.5 * self.fsq(r, 2) - f1 * f1) / f

    def lapse_factor(self, r: float, derivative: int = 0) -> float:
        """``u/f``: 1 for the Euclidean-chart families, sqrt(1 + B r^2) otherwise."""
        if self.family not in HYPERBOLIC_CHART:
            return 1.0 if derivative == 0 else 0.0
        B = self.B
        s = math.sqrt(1.0 + B * r * r)
        return (s, B * r / s, B / s**3)[derivative]


def classic_eh(B: float) -> RadialProfile:
    return RadialProfile(CLASSIC_EH, B, r_min=B**0.25)


def hyperbolic(B: float) -> RadialProfile:
    return RadialProfile(HYPERBOLIC, B)
