"""Total energy of the asymptotically hyperbolic (type-II) metrics.

The reference metric is hyperbolic space ``dr^2/(1 + B r^2) + r^2 (s1^2 + s2^2 + s3^2)``
with frame ``e1 = dr/sqrt(1 + B r^2)``, ``e_k = r s_k``. In that frame the
type-II metric is diagonal, ``g11 = f^-2, g22 = g33 = 1, g44 = f^2``, and
the mass aspect paired with the static Killing field is

    E U0 = (div g - d tr g - sqrt(B) (a11 - g11 tr a)) * sqrt(1 + B r^2)/sqrt(B)

with ``a = g - 1``. Every term is evaluated in closed form at finite ``r``
through ``eps = f^2 - 1`` so that nothing cancels catastrophically at large
radius. The energy is then the ``r -> inf`` limit of the normalised slice
integral, obtained by extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotConvergedError, VerificationError
from .families import FamilySpec
from .numeric_kernel import ExtrapolationResult, extrapolate_limit, fd_derivative
from .radial_profiles import HYPERBOLIC, TYPE_II, RadialProfile

SCHEME_POWERS = (1, 2)


@dataclass(frozen=True)
class MassAspect:
    r: float
    div_term: float
    trace_term: float
    algebraic_term: float
    integrand: float


@dataclass(frozen=True)
class EnergyReport:
    spec: FamilySpec
    samples: tuple[MassAspect, ...]
    volume_factor: float
    raw_limit: float
    error_estimate: float
    closed_form: float

    @property
    def kappa(self) -> float:
        if self.closed_form == 0.0:
            return math.nan
        return self.raw_limit / self.closed_form


def _alh_profile(obj) -> RadialProfile:
    prof = obj.profile if isinstance(obj, FamilySpec) else obj
    if prof.family not in (TYPE_II, HYPERBOLIC):
        raise VerificationError(f"{prof.family} metrics are not asymptotically hyperbolic", code="not-ALH")
    return prof


def mass_aspect(spec: FamilySpec | RadialProfile, r: float) -> MassAspect:
    prof = _alh_profile(spec)
    if r <= prof.r_min:
        raise DomainError(f"r={r!r} is not beyond the bolt r0={prof.r_min!r}")
    B = prof.B
    eps = prof.fsq_minus_one(r)
    F = 1.0 + eps
    F1 = prof.fsq(r, 1)
    y = -eps / F  # f^-2 - 1
    d_inv = -F1 / (F * F)  # (f^-2)'
    s = math.sqrt(1.0 + B * r * r)
    div = s * (d_inv + (3.0 * y - eps) / r)
    trace = s * (d_inv + F1)
    # a11 - g11 tr a = (f^-2 - 1) - (f^-2 - 1)^2
    alg = math.sqrt(B) * (y - y * y)
    integrand = (div - trace - alg) * s / math.sqrt(B)
    return MassAspect(r, div, trace, alg, integrand)


def asymptotic_integrand(spec: FamilySpec | RadialProfile, r: float) -> tuple[float, float]:
    """Leading ``A`` and ``C`` terms of the mass aspect at large ``r``."""
    prof = _alh_profile(spec)
    B, A, C = prof.B, prof.A, prof.C
    s2 = 1.0 + B * r * r
    a_term = A * math.sqrt(s2) / r**4
    c_term = B * C / (r * r * (s2 + math.sqrt(s2 * B * r * r)))
    return a_term, c_term


def volume_s3_quotient(n: int) -> float:
    """Volume of ``S^3/Z_n`` in the measure ``s1 ^ s2 ^ s3`` (unit round sphere for ``n = 1``)."""
    if n < 1:
        raise VerificationError(f"n must be >= 1, got {n}", code="inadmissible-n")
    return 2.0 * math.pi**2 / n


def sigma_matrix(theta: float, phi: float, psi: float) -> np.ndarray:
    """Rows: coefficients of ``s1, s2, s3`` on ``(d theta, d phi, d psi)``."""
    return 0.5 * np.array(
        [
            [math.sin(psi), -math.sin(theta) * math.cos(psi), 0.0],
            [-math.cos(psi), -math.sin(theta) * math.sin(psi), 0.0],
            [0.0, math.cos(theta), 1.0],
        ]
    )


def volume_by_quadrature(n: int) -> float:
    """``int |s1 ^ s2 ^ s3|`` over ``theta in [0, pi], phi in [0, 2 pi], psi in [0, 4 pi / n]``."""
    from scipy import integrate

    def density(psi: float, phi: float, theta: float) -> float:
        return abs(np.linalg.det(sigma_matrix(theta, phi, psi)))

    val, _ = integrate.tplquad(density, 0.0, math.pi, 0.0, 2.0 * math.pi, 0.0, 4.0 * math.pi / n, epsabs=1e-13, epsrel=1e-13)
    return val


def normalised_slice_integral(spec: FamilySpec | RadialProfile, r: float, n: int) -> float:
    """``(1/(4 Vol)) * int_{S^3(r)/Z_n} E U0 r^3 s1^s2^s3``; the mass aspect is constant on the slice."""
    vol = volume_s3_quotient(n)
    return mass_aspect(spec, r).integrand * r**3 * vol / (4.0 * vol)


def default_r_max(spec: FamilySpec) -> float:
    return 1e4 * max(spec.r0, 1.0 / math.sqrt(spec.B))


def total_energy(spec: FamilySpec, r_max: float | None = None, tol: float = 1e-6) -> EnergyReport:
    """Energy from the slice integrals at ``r_max/4, r_max/2, r_max``.

    The slice integral behaves like ``L + c1/r + c2/r^2 + ...`` (the odd term
    comes from the ``C`` part of the mass aspect), so the extrapolation fits
    ``{1, 1/r, 1/r^2}``. ``closed_form`` is ``A sqrt(B)``. ``tol`` bounds the
    extrapolation error relative to ``max(1, |limit|)``.
    """
    prof = _alh_profile(spec)
    if r_max is None:
        r_max = default_r_max(spec)
    if spec.r0 > 0.0 and r_max < 1e2 * spec.r0:
        raise DomainError(f"r_max={r_max!r} must be at least 100 r0")
    radii = (r_max / 4.0, r_max / 2.0, r_max)
    n = max(spec.n, 1)
    samples = tuple(mass_aspect(prof, r) for r in radii)
    vol = volume_s3_quotient(n)
    values = [(m.r, m.integrand * m.r**3 * vol / (4.0 * vol)) for m in samples]
    ext: ExtrapolationResult = extrapolate_limit(values, powers=SCHEME_POWERS)
    if ext.error_estimate > tol * max(1.0, abs(ext.limit)):
        raise NotConvergedError(f"extrapolation error {ext.error_estimate:.3e} exceeds tol={tol} (relative)")
    return EnergyReport(
        spec=spec,
        samples=samples,
        volume_factor=vol,
        raw_limit=ext.limit,
        error_estimate=ext.error_estimate,
        closed_form=prof.A * math.sqrt(prof.B),
    )


def hawking_mass_cm(B: float, n: int) -> float:
    """Hawking mass at infinity of the ``C = 0`` type-II extensions: ``-(5/6)(n^2 - 4)^2/(16B)``."""
    return -5.0 / 6.0 * (n * n - 4) ** 2 / (16.0 * B)


# ---------------------------------------------------------------------------
# AdS embedding spot check


def ads_embedding(B: float, x: np.ndarray) -> np.ndarray:
    """Point of the hyperboloid in ``R^{4,2}`` for coordinates ``(t, r, theta, phi, psi)``."""
    t, r, th, ph, ps = x
    sb = math.sqrt(B)
    s = math.sqrt(1.0 + B * r * r)
    return np.array(
        [
            math.cos(sb * t) / sb * s,
            r * math.cos(th / 2) * math.cos((ps + ph) / 2),
            r * math.cos(th / 2) * math.sin((ps + ph) / 2),
            r * math.sin(th / 2) * math.cos((ps - ph) / 2),
            r * math.sin(th / 2) * math.sin((ps - ph) / 2),
            math.sin(sb * t) / sb * s,
        ]
    )


ETA42 = np.diag([-1.0, 1.0, 1.0, 1.0, 1.0, -1.0])


def ads5_metric(B: float, x: np.ndarray) -> np.ndarray:
    """``-(1 + B r^2) dt^2 + dr^2/(1 + B r^2) + r^2 (s1^2 + s2^2 + s3^2)`` in coordinates."""
    t, r, th, ph, ps = x
    g = np.zeros((5, 5))
    g[0, 0] = -(1.0 + B * r * r)
    g[1, 1] = 1.0 / (1.0 + B * r * r)
    S = sigma_matrix(th, ph, ps)
    g[2:, 2:] = r * r * S.T @ S
    return g


def ads_embedding_check(B: float, x) -> dict[str, float]:
    """Residuals of the hyperboloid constraint, the pulled-back metric and ``d/dt = sqrt(B) U_50``."""
    x = np.asarray(x, dtype=float)
    y = ads_embedding(B, x)
    jac = np.empty((6, 5))
    for k in range(5):
        def comp(val: float, k: int = k) -> np.ndarray:
            xx = x.copy()
            xx[k] = val
            return ads_embedding(B, xx)

        for a in range(6):
            jac[a, k] = fd_derivative(lambda v, a=a: comp(v)[a], float(x[k]), 1)
    pulled = jac.T @ ETA42 @ jac
    y_low = ETA42 @ y
    u50 = np.zeros(6)
    u50[0] = y_low[5]  # y_5 d/dy^0 - y_0 d/dy^5
    u50[5] = -y_low[0]
    return {
        "hyperboloid": float(abs(y @ ETA42 @ y + 1.0 / B)),
        "metric": float(np.max(np.abs(pulled - ads5_metric(B, x)))),
        "killing": float(np.max(np.abs(jac[:, 0] - math.sqrt(B) * u50))),
    }
