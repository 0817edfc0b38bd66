"""Cartan structure equations for the biaxial Bianchi IX ansatz.

    g = u^-2 dr^2 + b^2 (s1^2 + s2^2) + c^2 s3^2,   d s1 = 2 s2 ^ s3 (cyclic)

with orthonormal coframe e1 = dr/u, e2 = b s1, e3 = b s2, e4 = c s3.

Forms are stored by their orthonormal-frame components: a connection 1-form
``w^i_j = G[i, j, k] e^k`` and a 2-form ``F = 1/2 F[k, l] e^k ^ e^l``. All
coefficients depend on ``r`` only, so ``d(a(r)) = a'(r) u e^1``. That is the
only fact the generic engine (:func:`cartan_curvature`) needs besides the
exterior derivatives of the coframe, which makes it reusable for the static
5D extension (see :mod:`ehverify.einstein_5d`).

Index convention: ``R^i_j = 1/2 R[i, j, k, l] e^k ^ e^l``, Ricci
``R_jl = R[i, j, i, l]`` summed on ``i``, sectional ``K_ij = R[i, j, i, j]``.
Array indices are 0-based, so ``e^1`` is index 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .numeric_kernel import fd_derivative
from .radial_profiles import HYPERBOLIC_CHART, TYPE_I, TYPE_II, RadialProfile

Jet = tuple[float, float, float]
JetFn = Callable[[float], Jet]

CONNECTION_KEYS = ("w21", "w31", "w41", "w34", "w42", "w23")
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class BiaxialMetric:
    """Radial functions of the ansatz, each returning ``(value, d/dr, d2/dr2)``."""

    u: JetFn
    b: JetFn
    c: JetFn
    domain_start: float = 0.0
    label: str = ""

    def check(self, r: float) -> None:
        if not r > self.domain_start:
            raise DomainError(f"r={r!r} is not inside (domain_start={self.domain_start!r}, inf)")


@dataclass(frozen=True)
class CurvatureFrame:
    r: float
    connection: dict[str, float]
    riemann: np.ndarray  # R[i, j, k, l], shape (4, 4, 4, 4)
    ricci: np.ndarray  # full 4x4 Ricci matrix
    scalar: float

    @property
    def ricci_diag(self) -> np.ndarray:
        return np.diag(self.ricci).copy()

    @property
    def sectional(self) -> dict[str, float]:
        return {f"K{i + 1}{j + 1}": float(self.riemann[i, j, i, j]) for i, j in PAIRS}


# ---------------------------------------------------------------------------
# metric builders


def _radius_jet(r: float) -> Jet:
    return (r, 1.0, 0.0)


def profile_jet(profile: RadialProfile, method: str = "analytic") -> JetFn:
    """Jet of ``f``; ``method="fd"`` swaps the closed-form derivatives for finite differences."""
    if method == "analytic":
        return lambda r: (profile.f(r), profile.f(r, 1), profile.f(r, 2))
    if method == "fd":
        dom = (profile.r_min, math.inf)
        return lambda r: (
            profile.f(r),
            fd_derivative(profile.f, r, 1, dom),
            fd_derivative(profile.f, r, 2, dom),
        )
    raise ValueError(f"unknown derivative method {method!r}")


def _product(a: Jet, b: Jet) -> Jet:
    return (a[0] * b[0], a[1] * b[0] + a[0] * b[1], a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2])


def biaxial_from_profile(profile: RadialProfile, method: str = "analytic") -> BiaxialMetric:
    """``u = f`` (or ``sqrt(1 + B r^2) f``), ``b = r``, ``c = r f``."""
    fjet = profile_jet(profile, method)
    if profile.family in HYPERBOLIC_CHART:
        def u(r: float) -> Jet:
            s = (profile.lapse_factor(r), profile.lapse_factor(r, 1), profile.lapse_factor(r, 2))
            return _product(s, fjet(r))
    else:
        u = fjet

    def c(r: float) -> Jet:
        return _product(_radius_jet(r), fjet(r))

    return BiaxialMetric(u=u, b=_radius_jet, c=c, domain_start=profile.r_min, label=profile.family)


def hyperbolic_metric(B: float) -> BiaxialMetric:
    """Hyperbolic 4-space of sectional curvature ``-B``: ``u = sqrt(1 + B r^2)``, ``b = c = r``."""

    def u(r: float) -> Jet:
        s = math.sqrt(1.0 + B * r * r)
        return (s, B * r / s, B / s**3)

    return BiaxialMetric(u=u, b=_radius_jet, c=_radius_jet, domain_start=0.0, label="hyperbolic")


# ---------------------------------------------------------------------------
# generic engine


def wedge11(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Components of ``alpha ^ beta`` for 1-forms given by frame components."""
    return np.outer(a, b) - np.outer(b, a)


def exterior_d1(coef: np.ndarray, dcoef: np.ndarray, u: float, dcoframe: np.ndarray) -> np.ndarray:
    """``d(a_m(r) e^m)`` as a 2-form; ``dcoef`` are the radial derivatives of ``coef``."""
    radial = np.zeros_like(coef)
    radial[_radial_index(len(coef))] = u
    return wedge11(radial, dcoef) + np.einsum("m,mkl->kl", coef, dcoframe)


def _radial_index(dim: int) -> int:
    # 4D frames carry e^1 at index 0; the 5D frame prepends e^0
    return 0 if dim == 4 else 1


def torsion(gamma: np.ndarray, dcoframe: np.ndarray) -> np.ndarray:
    """``de^i + w^i_j ^ e^j``; vanishes for the Levi-Civita connection."""
    # (w^i_j ^ e^j)_{kl} = G[i, l, k] - G[i, k, l]
    return dcoframe + np.swapaxes(gamma, 1, 2) - gamma


def cartan_curvature(gamma: np.ndarray, dgamma: np.ndarray, u: float, dcoframe: np.ndarray) -> np.ndarray:
    """``R^i_j = d w^i_j + w^i_k ^ w^k_j`` from connection components and their r-derivatives."""
    dim = gamma.shape[0]
    riem = np.zeros((dim,) * 4)
    for i in range(dim):
        for j in range(dim):
            two = exterior_d1(gamma[i, j], dgamma[i, j], u, dcoframe)
            for k in range(dim):
                two += wedge11(gamma[i, k], gamma[k, j])
            riem[i, j] = two
    return riem


def ricci_from_riemann(riem: np.ndarray) -> np.ndarray:
    return np.einsum("ijil->jl", riem)


# ---------------------------------------------------------------------------
# biaxial specialisation


def _biaxial_data(metric: BiaxialMetric, r: float):
    metric.check(r)
    u, u1, u2 = metric.u(r)
    b, b1, b2 = metric.b(r)
    c, c1, c2 = metric.c(r)
    if not (u > 0.0 and b > 0.0 and c > 0.0):
        raise DomainError(f"degenerate frame at r={r!r}: u={u}, b={b}, c={c}")

    w21 = u * b1 / b
    w41 = u * c1 / c
    w34 = c / b**2
    w23 = 2.0 / c - c / b**2
    d_w21 = u1 * b1 / b + u * b2 / b - u * b1 * b1 / b**2
    d_w41 = u1 * c1 / c + u * c2 / c - u * c1 * c1 / c**2
    d_w34 = c1 / b**2 - 2.0 * c * b1 / b**3
    d_w23 = -2.0 * c1 / c**2 - d_w34

    values = {"w21": w21, "w31": w21, "w41": w41, "w34": w34, "w42": w34, "w23": w23}
    derivs = {"w21": d_w21, "w31": d_w21, "w41": d_w41, "w34": d_w34, "w42": d_w34, "w23": d_w23}

    # de^2 = (u b'/b) e1^e2 + (2/c) e3^e4 and cyclic; de^4 = (u c'/c) e1^e4 + (2c/b^2) e2^e3
    dco = np.zeros((4, 4, 4))
    for i, coeff in ((1, w21), (2, w21), (3, w41)):
        dco[i, 0, i], dco[i, i, 0] = coeff, -coeff
    for i, (k, l), coeff in ((1, (2, 3), 2.0 / c), (2, (3, 1), 2.0 / c), (3, (1, 2), 2.0 * c / b**2)):
        dco[i, k, l], dco[i, l, k] = coeff, -coeff
    return u, values, derivs, dco


# (i, j, k): w^i_j has component along e^k; indices 0-based
_CONNECTION_SLOTS = {
    "w21": (1, 0, 1),
    "w31": (2, 0, 2),
    "w41": (3, 0, 3),
    "w34": (2, 3, 1),
    "w42": (3, 1, 2),
    "w23": (1, 2, 3),
}


def connection_tensor(coeffs: dict[str, float]) -> np.ndarray:
    gamma = np.zeros((4, 4, 4))
    for key, (i, j, k) in _CONNECTION_SLOTS.items():
        gamma[i, j, k] = coeffs[key]
        gamma[j, i, k] = -coeffs[key]
    return gamma


def connection(metric: BiaxialMetric, r: float) -> dict[str, float]:
    """Coefficients of the six independent connection 1-forms on their frame legs.

    ``w21 = w31 = u b'/b``, ``w41 = u c'/c``, ``w34 = w42 = c/b^2``,
    ``w23 = 2/c - c/b^2``.
    """
    return dict(_biaxial_data(metric, r)[1])


def torsion_residual(metric: BiaxialMetric, r: float) -> float:
    """Max-norm of ``de^i + w^i_j ^ e^j`` with ``de^i`` taken from the coframe itself."""
    _, values, _, dco = _biaxial_data(metric, r)
    return float(np.max(np.abs(torsion(connection_tensor(values), dco))))


def curvature(metric: BiaxialMetric, r: float) -> CurvatureFrame:
    u, values, derivs, dco = _biaxial_data(metric, r)
    gamma = connection_tensor(values)
    dgamma = connection_tensor(derivs)
    riem = cartan_curvature(gamma, dgamma, u, dco)
    ric = ricci_from_riemann(riem)
    return CurvatureFrame(r=r, connection=values, riemann=riem, ricci=ric, scalar=float(np.trace(ric)))


def bianchi_residual(frame: CurvatureFrame) -> float:
    """Max of the first Bianchi cyclic sum ``R[i,j,k,l] + R[i,k,l,j] + R[i,l,j,k]``."""
    R = frame.riemann
    return float(np.max(np.abs(R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2)))))


def pair_symmetry_residual(frame: CurvatureFrame) -> float:
    R = frame.riemann
    return float(np.max(np.abs(R - np.transpose(R, (2, 3, 0, 1)))))


# ---------------------------------------------------------------------------
# scalar-curvature ODE and Weyl duality


def scalar_ode_residual(profile: RadialProfile, r: float) -> float:
    """Left side of the constant-scalar-curvature ODE minus its constant.

    type-I:  -F'' - 7F'/r - 8(F - 1)/r^2 = -24B
    type-II: -((1 + B r^2) F'' + (7/r + 8Br) F' + (8/r^2 + 12B) F - 8/r^2) = -12B
    """
    B = profile.B
    F0, F1, F2 = profile.fsq(r), profile.fsq(r, 1), profile.fsq(r, 2)
    if profile.family == TYPE_I:
        lhs = -F2 - 7.0 * F1 / r - 8.0 * profile.fsq_minus_one(r) / r**2
        return lhs + 24.0 * B
    if profile.family == TYPE_II:
        eps = profile.fsq_minus_one(r)
        # (8/r^2 + 12B) F - 8/r^2 regrouped as 8 eps / r^2 + 12 B F
        lhs = -((1.0 + B * r * r) * F2 + (7.0 / r + 8.0 * B * r) * F1 + 8.0 * eps / r**2 + 12.0 * B * F0)
        return lhs + 12.0 * B
    raise ValueError(f"no scalar ODE for family {profile.family!r}")


def weyl_tensor(frame: CurvatureFrame) -> np.ndarray:
    R, ric, s = frame.riemann, frame.ricci, frame.scalar
    g = np.eye(4)
    gg = np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g)
    ric_part = (
        np.einsum("ik,jl->ijkl", g, ric)
        - np.einsum("il,jk->ijkl", g, ric)
        - np.einsum("jk,il->ijkl", g, ric)
        + np.einsum("jl,ik->ijkl", g, ric)
    )
    return R - 0.5 * ric_part + s / 6.0 * gg


def _levi_civita4() -> np.ndarray:
    eps = np.zeros((4,) * 4)
    for perm in itertools.permutations(range(4)):
        sign = np.linalg.det(np.eye(4)[list(perm)])
        eps[perm] = round(sign)
    return eps


_EPS4 = _levi_civita4()


def _hodge_on_pairs(orientation: int) -> np.ndarray:
    # *(e^a ^ e^b) = 1/2 eps_abcd e^c ^ e^d, written on the basis PAIRS
    star = np.zeros((6, 6))
    for A, (a, b) in enumerate(PAIRS):
        for Bx, (c, d) in enumerate(PAIRS):
            star[Bx, A] = orientation * _EPS4[a, b, c, d]
    return star


def weyl_dual_parts(metric: BiaxialMetric, r: float, orientation: int = 1) -> tuple[float, float]:
    """Frobenius norms ``(|W+|, |W-|)`` of the Weyl operator on 2-forms.

    ``orientation=+1`` means ``e1 ^ e2 ^ e3 ^ e4`` is positive; ``-1`` swaps
    the roles of the two parts.
    """
    W = weyl_tensor(curvature(metric, r))
    op = np.array([[W[a, b, c, d] for (c, d) in PAIRS] for (a, b) in PAIRS])
    star = _hodge_on_pairs(orientation)
    plus = 0.5 * (np.eye(6) + star)
    minus = 0.5 * (np.eye(6) - star)
    return float(np.linalg.norm(plus @ op @ plus)), float(np.linalg.norm(minus @ op @ minus))


def weyl_asd_residual(metric: BiaxialMetric, r: float, orientation: int = 1) -> float:
    """Norm of the self-dual Weyl part; zero means the metric is anti-self-dual."""
    return weyl_dual_parts(metric, r, orientation)[0]


# ---------------------------------------------------------------------------
# static 5D extension  -v^2 dt^2 + g,  e0 = v dt


def _lapse_hessian(metric: BiaxialMetric, v: JetFn, r: float) -> tuple[float, np.ndarray]:
    """``(v, R~^0_{i0i})`` for i = 1..4, i.e. minus the base Hessian of ``v`` over ``v``."""
    u, u1, _ = metric.u(r)
    b, b1, _ = metric.b(r)
    c, c1, _ = metric.c(r)
    v0, v1, v2 = v(r)
    if not v0 > 0.0:
        raise DomainError(f"lapse v={v0!r} is not positive at r={r!r}", code="degenerate-lapse")
    hess = np.array([u * u * v2 + u * u1 * v1, u * u * b1 * v1 / b, u * u * b1 * v1 / b, u * u * c1 * v1 / c])
    return v0, -hess / v0


def curvature_5d(metric: BiaxialMetric, v: JetFn, r: float) -> np.ndarray:
    """Orthonormal Ricci diagonal ``(R~00, R~11, R~22, R~33, R~44)`` of ``-v^2 dt^2 + g``.

    ``R~00 = -sum_i R~^0_{i0i}`` and ``R~ii = Ric(g)_ii + R~^0_{i0i}``.
    """
    base = curvature(metric, r)
    _, mixed = _lapse_hessian(metric, v, r)
    return np.concatenate(([-mixed.sum()], base.ricci_diag + mixed))


def curvature_5d_cartan(metric: BiaxialMetric, v: JetFn, r: float) -> np.ndarray:
    """Full 5x5 Ricci matrix of the static extension from the generic structure equations.

    Independent of :func:`curvature_5d`: the lapse enters only through
    ``w^0_1 = w^1_0 = (u v'/v) e^0`` and ``de^0 = (u v'/v) e^1 ^ e^0``.
    """
    u, values, derivs, dco4 = _biaxial_data(metric, r)
    u_, u1, _ = metric.u(r)
    v0, v1, v2 = v(r)
    if not v0 > 0.0:
        raise DomainError(f"lapse v={v0!r} is not positive at r={r!r}", code="degenerate-lapse")
    a = u * v1 / v0
    da = u1 * v1 / v0 + u * v2 / v0 - u * v1 * v1 / v0**2
    gamma = np.zeros((5, 5, 5))
    dgamma = np.zeros((5, 5, 5))
    gamma[1:, 1:, 1:] = connection_tensor(values)
    dgamma[1:, 1:, 1:] = connection_tensor(derivs)
    gamma[0, 1, 0] = gamma[1, 0, 0] = a
    dgamma[0, 1, 0] = dgamma[1, 0, 0] = da
    dco = np.zeros((5, 5, 5))
    dco[1:, 1:, 1:] = dco4
    dco[0, 1, 0], dco[0, 0, 1] = a, -a
    riem = cartan_curvature(gamma, dgamma, u, dco)
    return ricci_from_riemann(riem)
