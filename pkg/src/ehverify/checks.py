"""Per-spec verification suites shared by the command line and the test suite.

Each check is a named residual compared against a tolerance. Expected
curvature tables are written out here as fixtures, independently of the
general biaxial engine that produces the computed values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import frame_geometry as fg
from .einstein_5d import default_radii
from .families import ROOT_TOL, SMOOTHNESS_TOL, FamilySpec
from .radial_profiles import CLASSIC_EH, HYPERBOLIC, TYPE_I, TYPE_II, ZERO_SCALAR

IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.residual) <= self.tol)

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "tol": self.tol, "passed": self.passed}


def expected_scalar(spec: FamilySpec) -> float:
    if spec.family == TYPE_I:
        return -24.0 * spec.B
    if spec.family in (TYPE_II, HYPERBOLIC):
        return -12.0 * spec.B
    return 0.0


def expected_ricci(spec: FamilySpec, r: float) -> np.ndarray:
    """Ricci diagonal ``(R11, R22, R33, R44)`` for each family."""
    B = spec.B
    if spec.family == TYPE_I:
        d = 2.0 * spec.C / r**4
        return np.array([-6.0 * B + d, -6.0 * B - d, -6.0 * B - d, -6.0 * B + d])
    if spec.family == TYPE_II:
        d = spec.A * B / r**4
        return np.array([-3.0 * B - d, -3.0 * B + d, -3.0 * B + d, -3.0 * B - d])
    if spec.family == HYPERBOLIC:
        return np.full(4, -3.0 * B)
    if spec.family == CLASSIC_EH:
        return np.zeros(4)
    raise ValueError(f"no Ricci table for {spec.family!r}")


def metric_for(spec: FamilySpec, method: str = "analytic") -> fg.BiaxialMetric:
    if spec.family == HYPERBOLIC:
        return fg.hyperbolic_metric(spec.B)
    return fg.biaxial_from_profile(spec.profile, method)


def _scale(spec: FamilySpec) -> float:
    # curvature magnitudes are set by B (and by r0 for the Euclidean-chart families)
    return max(abs(expected_scalar(spec)), spec.B, 1.0 / spec.r0**2 if spec.r0 > 0.0 else 0.0)


def construction_checks(spec: FamilySpec) -> list[Check]:
    out = []
    if "f_at_r0" in spec.residuals:
        out.append(Check("f_squared_at_r0", spec.residuals["f_at_r0"], ROOT_TOL))
    if "smoothness" in spec.residuals:
        out.append(Check("smoothness_h_minus_n", spec.residuals["smoothness"], SMOOTHNESS_TOL))
    if "bolt_cubic" in spec.residuals:
        out.append(Check("bolt_cubic", spec.residuals["bolt_cubic"], ROOT_TOL))
    return out


def curvature_checks(
    spec: FamilySpec, radii=None, tol_residual: float = 1e-9, tol_derivative: float = 1e-6
) -> list[Check]:
    """Scalar, Ricci table, identities, finite-difference agreement and duality."""
    radii = default_radii(spec) if radii is None else np.asarray(radii, dtype=float)
    metric = metric_for(spec)
    fd_metric = metric_for(spec, "fd") if spec.family != HYPERBOLIC else None
    scale = _scale(spec)
    target = expected_scalar(spec)
    scalar_err = ricci_err = bianchi = pair = trace = fd_err = ode = asd = 0.0
    for r in radii:
        r = float(r)
        frame = fg.curvature(metric, r)
        scalar_err = max(scalar_err, abs(frame.scalar - target) / scale)
        if spec.family != ZERO_SCALAR:
            ricci_err = max(ricci_err, float(np.max(np.abs(frame.ricci_diag - expected_ricci(spec, r)))) / scale)
        bianchi = max(bianchi, fg.bianchi_residual(frame) / scale)
        pair = max(pair, fg.pair_symmetry_residual(frame) / scale)
        trace = max(trace, abs(frame.scalar - float(np.sum(frame.ricci_diag))) / scale)
        if fd_metric is not None:
            fd_frame = fg.curvature(fd_metric, r)
            denom = max(float(np.max(np.abs(frame.riemann))), scale)
            fd_err = max(fd_err, float(np.max(np.abs(fd_frame.riemann - frame.riemann))) / denom)
        if spec.family in (TYPE_I, TYPE_II):
            ode = max(ode, abs(fg.scalar_ode_residual(spec.profile, r)) / scale)
        if spec.family == CLASSIC_EH:
            asd = max(asd, fg.weyl_asd_residual(metric, r) / scale)
    checks = [
        Check("scalar_curvature", scalar_err, tol_residual),
        Check("bianchi_identity", bianchi, IDENTITY_TOL),
        Check("pair_symmetry", pair, IDENTITY_TOL),
        Check("scalar_is_ricci_trace", trace, IDENTITY_TOL),
    ]
    if spec.family != ZERO_SCALAR:
        checks.append(Check("ricci_table", ricci_err, tol_residual))
    if fd_metric is not None:
        checks.append(Check("fd_curvature_agreement", fd_err, tol_derivative))
    if spec.family in (TYPE_I, TYPE_II):
        checks.append(Check("scalar_ode", ode, tol_residual))
    if spec.family == CLASSIC_EH:
        checks.append(Check("weyl_self_dual_norm", asd, tol_residual))
    return checks


def verify_spec(spec: FamilySpec, radii=None, tol_residual: float = 1e-9, tol_derivative: float = 1e-6) -> list[Check]:
    return construction_checks(spec) + curvature_checks(spec, radii, tol_residual, tol_derivative)


def all_passed(checks: list[Check]) -> bool:
    return all(c.passed for c in checks)


def max_residual(checks: list[Check], name: str) -> float:
    for c in checks:
        if c.name == name:
            return c.residual
    return math.nan
