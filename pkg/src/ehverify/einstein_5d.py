"""Static 5D extensions ``-v^2 dt^2 + g`` and the vacuum equations ``Ric = (2/3) Lambda g``.

The two obstruction results reduce to a pair of radial constraints obtained
from ``R~11 = R~44`` and ``R~22 = R~44``. The reports below evaluate those
constraints twice, once from the curvature engine and once from the
closed forms, over the general solution of the first constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .families import FamilySpec, type1_construct, type2_construct
from .frame_geometry import BiaxialMetric, Jet, JetFn, biaxial_from_profile, curvature_5d, hyperbolic_metric
from .radial_profiles import HYPERBOLIC

AFFINE_R2 = "affine-in-r2"
HYPERBOLIC_LAPSE = "hyperbolic-lapse"
CUSTOM = "custom"

N_RADII = 64


@dataclass(frozen=True)
class Lapse:
    """``v(r)``: ``(c1/2) r^2 + c2``, ``c1 sqrt(1 + B r^2) + c2``, or a user jet."""

    kind: str
    c1: float = 0.0
    c2: float = 0.0
    B: float = 1.0
    jet: JetFn | None = None

    def __call__(self, r: float) -> Jet:
        if self.kind == AFFINE_R2:
            return (0.5 * self.c1 * r * r + self.c2, self.c1 * r, self.c1)
        if self.kind == HYPERBOLIC_LAPSE:
            s = math.sqrt(1.0 + self.B * r * r)
            return (self.c1 * s + self.c2, self.c1 * self.B * r / s, self.c1 * self.B / s**3)
        if self.kind == CUSTOM and self.jet is not None:
            return self.jet(r)
        raise ValueError(f"unusable lapse kind {self.kind!r}")

    def scaled(self, lam: float) -> "Lapse":
        if self.kind == CUSTOM:
            jet = self.jet
            return Lapse(CUSTOM, jet=lambda r: tuple(lam * x for x in jet(r)))  # type: ignore[misc]
        return Lapse(self.kind, lam * self.c1, lam * self.c2, self.B)


@dataclass(frozen=True)
class StaticExtension:
    base: FamilySpec
    lapse: Lapse
    Lambda: float | None = None

    @property
    def cosmological_constant(self) -> float:
        return -6.0 * self.base.B if self.Lambda is None else self.Lambda

    @property
    def metric(self) -> BiaxialMetric:
        if self.base.family == HYPERBOLIC:
            return hyperbolic_metric(self.base.B)
        return biaxial_from_profile(self.base.profile)


def default_radii(spec: FamilySpec, n: int = N_RADII) -> np.ndarray:
    """``n`` log-spaced radii on ``[1.05 r0, 100 r0]`` (``[0.05, 100]/sqrt(B)`` without a bolt)."""
    r0 = spec.r0 if spec.r0 > 0.0 else 1.0 / math.sqrt(spec.B)
    lo = 1.05 * r0 if spec.r0 > 0.0 else 0.05 * r0
    return np.geomspace(lo, 100.0 * r0, n)


def einstein_components(ext: StaticExtension, r: float) -> np.ndarray:
    """``(R~00 + (2/3)L, R~ii - (2/3)L)`` in the orthonormal frame."""
    ric = curvature_5d(ext.metric, ext.lapse, r)
    target = 2.0 / 3.0 * ext.cosmological_constant
    out = ric - target
    out[0] = ric[0] + target
    return out


def einstein_residual(ext: StaticExtension, radii=None) -> float:
    """Max-norm defect of the vacuum equations over ``radii``."""
    if radii is None:
        radii = default_radii(ext.base)
    return float(max(np.max(np.abs(einstein_components(ext, float(r)))) for r in radii))


# ---------------------------------------------------------------------------
# type I: no static potential


@dataclass(frozen=True)
class Type1ObstructionReport:
    spec: FamilySpec
    c1: float
    c2: float
    radii: np.ndarray
    first: np.ndarray  # (R~11 - R~44) v from the engine
    second: np.ndarray  # (R~22 - R~44) v from the engine
    first_closed: np.ndarray  # F v'' - (F/r) v'
    second_closed: np.ndarray  # (-C/r^3 - 2A/r^5 + B r) v' - 4C v / r^4
    r00: np.ndarray
    einstein: float
    tol: float = 1e-9
    notes: list[str] = field(default_factory=list)

    @property
    def constraints_hold(self) -> bool:
        return bool(np.max(np.abs(self.first)) <= self.tol and np.max(np.abs(self.second)) <= self.tol)


def type1_obstruction_report(
    B: float, n: int, C: float, c1: float, c2: float, radii=None, tol: float = 1e-9
) -> Type1ObstructionReport:
    """Evaluate both constraints for ``v = (c1/2) r^2 + c2`` on a type-I base.

    ``v`` of this form solves ``R~11 = R~44`` for every ``(c1, c2)``. The second
    constraint then needs ``c1 = 0`` (its ``B r v'`` term cannot be cancelled)
    and ``C c2 = 0``; with ``c1 = 0`` the lapse is constant and ``R~00 = 0``,
    which cannot equal ``-(2/3) Lambda = 4B``.
    """
    spec = type1_construct(B, n, C)
    lapse = Lapse(AFFINE_R2, c1, c2, B)
    ext = StaticExtension(spec, lapse)
    metric = ext.metric
    radii = default_radii(spec) if radii is None else np.asarray(radii, dtype=float)
    A = spec.A
    first, second, first_c, second_c, r00 = [], [], [], [], []
    for r in radii:
        r = float(r)
        ric = curvature_5d(metric, lapse, r)
        v0, v1, v2 = lapse(r)
        F = spec.profile.fsq(r)
        first.append((ric[1] - ric[4]) * v0)
        second.append((ric[2] - ric[4]) * v0)
        first_c.append(F * v2 - F / r * v1)
        second_c.append((-C / r**3 - 2.0 * A / r**5 + B * r) * v1 - 4.0 * C / r**4 * v0)
        r00.append(ric[0])
    report = Type1ObstructionReport(
        spec, c1, c2, radii, np.array(first), np.array(second), np.array(first_c), np.array(second_c),
        np.array(r00), einstein_residual(ext, radii), tol,
    )
    if report.constraints_hold:
        report.notes.append(
            f"both constraints hold; lapse is constant and max |R~00| = {np.max(np.abs(report.r00)):.3e} "
            f"while the vacuum equations need R~00 = {4.0 * B!r}"
        )
    else:
        report.notes.append("second constraint fails for this lapse")
    return report


# ---------------------------------------------------------------------------
# type II: uniqueness of the Clarkson-Mann extension


@dataclass(frozen=True)
class Type2UniquenessReport:
    spec: FamilySpec
    c1: float
    c2: float
    radii: np.ndarray
    v2_residual: np.ndarray  # h^2 v'' - (h^2/r + f' h^2/f - h' h) v'
    constraint: np.ndarray  # C (4 + 3 B r^2) c1 - 4 A c2
    constraint_engine: np.ndarray  # -(R~22 - R~44) v 2 r^4 / B from the engine
    r00: np.ndarray
    einstein: float
    branch: str


def type2_lapse_constraint(spec: FamilySpec, c1: float, c2: float, r: float) -> float:
    return spec.C * (4.0 + 3.0 * spec.B * r * r) * c1 - 4.0 * spec.A * c2


def type2_uniqueness_report(B: float, n: int, C: float, c1: float, c2: float, radii=None) -> Type2UniquenessReport:
    """Evaluate the constraints for ``v = c1 sqrt(1 + B r^2) + c2`` on a type-II base.

    The algebraic constraint is ``a + b r^2`` with ``a = 4 C c1 - 4 A c2`` and
    ``b = 3 B C c1``; it vanishes identically iff ``C c1 = 0`` and ``A c2 = 0``.
    """
    spec = type2_construct(B, n, C)
    lapse = Lapse(HYPERBOLIC_LAPSE, c1, c2, B)
    ext = StaticExtension(spec, lapse)
    metric = ext.metric
    prof = spec.profile
    radii = default_radii(spec) if radii is None else np.asarray(radii, dtype=float)
    v2res, cons, cons_eng, r00 = [], [], [], []
    for r in radii:
        r = float(r)
        v0, v1, v2 = lapse(r)
        f, f1 = prof.f(r), prof.f(r, 1)
        s = math.sqrt(1.0 + B * r * r)
        h = s * f
        h1 = B * r / s * f + s * f1
        v2res.append(h * h * v2 - (h * h / r + f1 * h * h / f - h1 * h) * v1)
        cons.append(type2_lapse_constraint(spec, c1, c2, r))
        ric = curvature_5d(metric, lapse, r)
        cons_eng.append(-(ric[2] - ric[4]) * v0 * 2.0 * r**4 / B)
        r00.append(ric[0])
    if C == 0.0 and c2 == 0.0:
        branch = "C=0, c2=0: v = c1 sqrt(1 + B r^2)"
    elif c1 == 0.0 and spec.A == 0.0:
        branch = "A=0, c1=0: constant lapse, R~00 = 0"
    elif C * c1 == 0.0 and spec.A * c2 == 0.0:
        branch = "degenerate"
    else:
        branch = "constraint violated"
    return Type2UniquenessReport(
        spec, c1, c2, radii, np.array(v2res), np.array(cons), np.array(cons_eng), np.array(r00),
        einstein_residual(ext, radii), branch,
    )


def constraint_vanishes_identically(C: float, A: float, c1: float, c2: float) -> bool:
    """``C (4 + 3 B r^2) c1 - 4 A c2 == 0`` for all ``r``."""
    return C * c1 == 0.0 and A * c2 == 0.0


def clarkson_mann_extension(B: float, n: int) -> StaticExtension:
    """The ``C = 0`` type-II base with lapse ``sqrt(1 + B r^2)``."""
    return StaticExtension(type2_construct(B, n, 0.0), Lapse(HYPERBOLIC_LAPSE, 1.0, 0.0, B))

