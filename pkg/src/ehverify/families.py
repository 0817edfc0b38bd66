"""Parameter admissibility and closed-form bolt data for each family.

A family spec pins the bolt radius ``r0`` (largest root of ``f``) and the
constant ``A`` so that the metric closes smoothly at ``r0`` when the fibre
angle has period ``4 pi / n``. Smoothness is the cone condition
``h(r0) = n`` where ``h = (u/f) * (F + r F'/2)`` is the rate at which the
collapsing circle grows in proper distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numeric_kernel as nk
from .errors import ConstructionError, InadmissibleError, NoRootError
from .radial_profiles import (
    CLASSIC_EH,
    HYPERBOLIC,
    TYPE_I,
    TYPE_II,
    ZERO_SCALAR,
    RadialProfile,
)

CASE_CARDANO = "case-cardano"
CASE_TRIG = "case-trig"
CLOSED_FORM = "closed-form"
INADMISSIBLE = "inadmissible"

# post-construction tolerances
ROOT_TOL = 1e-10
SMOOTHNESS_TOL = 1e-9


@dataclass(frozen=True)
class FamilySpec:
    family: str
    B: float
    n: int
    C: float
    A: float
    r0: float
    admissibility: str
    residuals: dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def psi_period(self) -> float:
        return 4.0 * math.pi / self.n

    @property
    def profile(self) -> RadialProfile:
        return RadialProfile(self.family, self.B, A=self.A, C=self.C, r_min=self.r0)

    def h(self, r: float) -> float:
        return smoothness_function(self.family, self.B, self.A, self.C, r)


@dataclass(frozen=True)
class TypeIIConstants:
    """Discriminant landmarks for the type-II bolt cubic at fixed (B, n).

    ``C1 < C2`` are the nonzero roots of the discriminant in ``C``; ``C3 < C4``
    are the roots of ``q(C)``. ``C3_printed``/``C4_printed`` carry the
    ``(n**4 - 4)`` factor as typeset in the source, kept for comparison.
    """

    B: float
    n: int
    C1: float
    C2: float
    C3: float
    C4: float
    C3_printed: float
    C4_printed: float


def smoothness_function(family: str, B: float, A: float, C: float, r: float) -> float:
    if family == TYPE_I:
        return 1.0 - A / r**4 + 2.0 * B * r * r
    if family == TYPE_II:
        s = math.sqrt(1.0 + B * r * r)
        return s * (1.0 - A / r**4) - C / r**4 - B * C / (2.0 * r * r)
    if family == ZERO_SCALAR:
        return 1.0 + B / r**4
    if family == CLASSIC_EH:
        return 1.0 + B / r**4
    raise ValueError(f"family {family!r} has no bolt")


def smoothness_residual(spec: FamilySpec) -> float:
    """``h(r0) - n``: zero iff the bolt is smooth for fibre period ``4 pi / n``."""
    return spec.h(spec.r0) - spec.n


def _far_radius(B: float) -> float:
    return 1e3 * max(1.0, B**-0.5)


def assert_largest_root(profile: RadialProfile, r0: float, n_grid: int = 2000) -> None:
    """Grid scan of ``F`` on ``(r0, 1e3 max(1, B^-1/2)]``; any nonpositive value is fatal."""
    hi = _far_radius(profile.B)
    if hi <= r0:
        hi = 10.0 * r0
    grid = np.geomspace(r0 * (1.0 + 1e-7), hi, n_grid)
    vals = np.array([profile.fsq(float(x)) for x in grid])
    bad = np.nonzero(vals <= 0.0)[0]
    if bad.size:
        raise ConstructionError(
            f"f^2 <= 0 at r={grid[bad[-1]]!r} beyond the claimed largest root {r0!r}", code="not-largest-root"
        )


def _check(spec: FamilySpec, name: str, value: float, tol: float, code: str = "construction-check-failed") -> None:
    if not abs(value) <= tol:
        raise ConstructionError(
            f"{spec.family} (B={spec.B}, n={spec.n}, C={spec.C}): {name} = {value:.3e} exceeds {tol}", code=code
        )


def _finish(spec: FamilySpec, check: bool = True) -> FamilySpec:
    prof = spec.profile
    # F(r0) is compared relative to the size of its terms
    scale = 1.0 + _term_scale(prof, spec.r0)
    spec.residuals["f_at_r0"] = prof.fsq(spec.r0) / scale
    spec.residuals["smoothness"] = smoothness_residual(spec)
    if check:
        _check(spec, "f^2(r0)", spec.residuals["f_at_r0"], ROOT_TOL)
        _check(spec, "h(r0) - n", spec.residuals["smoothness"], SMOOTHNESS_TOL, code="cone-condition-failed")
        assert_largest_root(prof, spec.r0)
    return spec


def _term_scale(profile: RadialProfile, r: float) -> float:
    B, A, C = profile.B, profile.A, profile.C
    if profile.family == TYPE_I:
        return abs(C) / r**2 + abs(A) / r**4 + B * r * r
    if profile.family == TYPE_II:
        return (math.sqrt(1.0 + B * r * r) * abs(C) + abs(A)) / r**4
    if profile.family == ZERO_SCALAR:
        return 2.0 * abs(A) / r**2 + B / r**4
    return B / r**4


# ---------------------------------------------------------------------------
# reference families


def classic_construct(B: float) -> FamilySpec:
    if not B > 0.0:
        raise InadmissibleError("B must be positive", code="inadmissible-B")
    return _finish(FamilySpec(CLASSIC_EH, B, 2, 0.0, 0.0, B**0.25, CLOSED_FORM, {}))


def zero_scalar_construct(B: float, n: int) -> FamilySpec:
    """``A = -(n - 2)/2 sqrt(B/(n - 1))``, ``r0 = (B/(n - 1))**(1/4)``; ``n >= 2``."""
    if not B > 0.0:
        raise InadmissibleError("B must be positive", code="inadmissible-B")
    if n < 2:
        raise InadmissibleError(f"zero-scalar family needs n >= 2, got {n}", code="inadmissible-n")
    A = -(n - 2) / 2.0 * math.sqrt(B / (n - 1))
    r0 = (B / (n - 1)) ** 0.25
    return _finish(FamilySpec(ZERO_SCALAR, B, n, 0.0, A, r0, CLOSED_FORM, {}))


def hyperbolic_spec(B: float) -> FamilySpec:
    """Hyperbolic space dressed as a type-II member with ``A = C = 0`` (no bolt)."""
    return FamilySpec(HYPERBOLIC, B, 1, 0.0, 0.0, 0.0, CLOSED_FORM, {})


# ---------------------------------------------------------------------------
# type I


def type1_bound(B: float, n: int) -> float:
    return (n - 2) ** 2 / (12.0 * B)


def type1_construct(B: float, n: int, C: float) -> FamilySpec:
    """Bolt data for ``F = 1 + C/r^2 + A/r^4 + B r^2``.

    ``r0**2 = (n - 2 + sqrt(D)) / (6B)`` and ``A = (1 - 2n + sqrt(D)) r0**4 / 3``
    with ``D = (n - 2)**2 - 12 B C``, which must be nonnegative.
    """
    _check_common(B, n)
    D = (n - 2) ** 2 - 12.0 * B * C
    if D < 0.0:
        raise InadmissibleError(
            f"C={C!r} exceeds (n-2)^2/(12B) = {type1_bound(B, n)!r}", code="inadmissible-C"
        )
    sd = math.sqrt(D)
    x0 = (n - 2 + sd) / (6.0 * B)
    r0 = math.sqrt(x0)
    A = (1 - 2 * n + sd) / 3.0 * x0 * x0
    return _finish(FamilySpec(TYPE_I, B, n, C, A, r0, CLOSED_FORM, {}))


def _check_common(B: float, n: int) -> None:
    if not B > 0.0:
        raise InadmissibleError("B must be positive", code="inadmissible-B")
    if n < 3 or int(n) != n:
        raise InadmissibleError(f"n must be an integer >= 3, got {n!r}", code="inadmissible-n")


# ---------------------------------------------------------------------------
# type II


def type2_pq(B: float, n: int, C: float) -> tuple[float, float]:
    """Depressed-cubic coefficients of the bolt equation in ``x = r0**2``.

    The bolt equation ``x^3 + (4 - n^2)/(4B) x^2 + nC/4 x - B C^2/16 = 0``
    becomes ``t^3 + p t + q = 0`` under ``x = t + (n^2 - 4)/(12B)``.
    """
    m = n * n - 4
    p = (-(m**2) + 12.0 * n * B * B * C) / (48.0 * B * B)
    q = (-(m**3) + 18.0 * n * m * B * B * C - 54.0 * B**4 * C * C) / (864.0 * B**3)
    return p, q


def type2_discriminant(B: float, n: int, C: float) -> float:
    """Closed form of ``p^3/27 + q^2/4`` as a quartic in ``C``."""
    return (27.0 * B**4 * C**4 - 2.0 * B * B * C**3 * n * (n * n - 36) - 4.0 * (n * n - 4) ** 2 * C * C) / (
        27648.0 * B * B
    )


def type2_cubic(B: float, n: int, x: float, C: float) -> tuple[float, float]:
    """Bolt cubic at ``x`` and the sum of |terms| (for relative residuals)."""
    terms = (x**3, (4 - n * n) / (4.0 * B) * x * x, n * C / 4.0 * x, -B * C * C / 16.0)
    return sum(terms), sum(abs(t) for t in terms)


def type2_constants(B: float, n: int) -> TypeIIConstants:
    _check_common(B, n)
    rt = math.sqrt(n * n + 12)
    C1 = (n**3 - 36 * n - (n * n + 12) * rt) / (27.0 * B * B)
    C2 = (n**3 - 36 * n + (n * n + 12) * rt) / (27.0 * B * B)
    s = math.sqrt(3 * n * n + 24)
    m = n * n - 4
    C3 = m * (3 * n - s) / (18.0 * B * B)
    C4 = m * (3 * n + s) / (18.0 * B * B)
    mp = n**4 - 4
    return TypeIIConstants(B, n, C1, C2, C3, C4, mp * (3 * n - s) / (18.0 * B * B), mp * (3 * n + s) / (18.0 * B * B))


def type2_case(consts: TypeIIConstants, C: float) -> str:
    """Branch for ``C``: Cardano below ``C1`` or above ``C4``, trigonometric on ``[C1, C2]``."""
    if C < consts.C1 or C > consts.C4:
        return CASE_CARDANO
    if C <= consts.C2:
        return CASE_TRIG
    return INADMISSIBLE


def type2_construct(B: float, n: int, C: float, check: bool = True) -> FamilySpec:
    """Bolt data for ``F = 1 + (sqrt(1 + B r^2) C + A)/r^4``.

    Admissible ``C``: ``C <= C2`` or ``C > C4``. The largest root ``t`` of the
    depressed cubic gives ``r0**2 = t + (n^2 - 4)/(12B)`` and
    ``A = -r0**4 - sqrt(1 + B r0**2) C``.

    The bolt cubic is obtained by squaring ``2 sqrt(1 + B x) = n - BC/(2x)``,
    so its root can be spurious. For ``C > C4`` it always is: there
    ``h(r0) = BC/r0**2 - n`` and the cone check raises ``ConstructionError``
    with code ``"cone-condition-failed"``. ``check=False`` skips the
    post-checks and returns the candidate with its residuals recorded.
    """
    consts = type2_constants(B, n)
    case = type2_case(consts, C)
    if case == INADMISSIBLE:
        raise InadmissibleError(
            f"C={C!r} lies in the gap (C2, C4] = ({consts.C2!r}, {consts.C4!r}]", code="inadmissible-C"
        )
    p, q = type2_pq(B, n, C)
    if case == CASE_CARDANO:
        t = nk.cardano_real_root(p, q)
    else:
        t = nk.trigonometric_roots(min(p, 0.0), q)[0]
    shift = (n * n - 4) / (12.0 * B)
    x0 = t + shift
    if not x0 > 0.0:
        raise NoRootError(f"bolt cubic root r0^2 = {x0!r} is not positive", code="no-positive-root")
    # one Newton step on the undepressed cubic tightens x0 near double roots
    val, _ = type2_cubic(B, n, x0, C)
    slope = 3 * x0 * x0 + 2 * (4 - n * n) / (4.0 * B) * x0 + n * C / 4.0
    if slope != 0.0:
        x1 = x0 - val / slope
        if x1 > 0.0 and abs(type2_cubic(B, n, x1, C)[0]) < abs(val):
            x0 = x1
    r0 = math.sqrt(x0)
    A = -x0 * x0 - math.sqrt(1.0 + B * x0) * C
    spec = FamilySpec(TYPE_II, B, n, C, A, r0, case, {})
    val, scale = type2_cubic(B, n, x0, C)
    spec.residuals["bolt_cubic"] = val / scale
    if check:
        _check(spec, "bolt cubic residual", spec.residuals["bolt_cubic"], ROOT_TOL)
    return _finish(spec, check)


def construct(family: str, B: float, n: int | None = None, C: float = 0.0, check: bool = True) -> FamilySpec:
    """Dispatch on family name (CLI spellings ``type1``/``type2`` accepted)."""
    fam = FAMILY_ALIASES.get(family, family)
    if fam == TYPE_I:
        return type1_construct(B, _need_n(n), C)
    if fam == TYPE_II:
        return type2_construct(B, _need_n(n), C, check)
    if fam == ZERO_SCALAR:
        return zero_scalar_construct(B, _need_n(n))
    if fam == CLASSIC_EH:
        return classic_construct(B)
    if fam == HYPERBOLIC:
        return hyperbolic_spec(B)
    raise ValueError(f"unknown family {family!r}")


def _need_n(n: int | None) -> int:
    if n is None:
        raise InadmissibleError("n is required for this family", code="inadmissible-n")
    return int(n)


FAMILY_ALIASES = {
    "type1": TYPE_I,
    "type-1": TYPE_I,
    "type2": TYPE_II,
    "type-2": TYPE_II,
    "zero-scalar": ZERO_SCALAR,
    "zero": ZERO_SCALAR,
    "classic": CLASSIC_EH,
    "eh": CLASSIC_EH,
    "hyperbolic": HYPERBOLIC,
}
