"""Numerical primitives: depressed cubics, bracketing, differentiation, limits.

Everything here is a pure function of plain floats. The cubic solver is
the workhorse of the type-II construction; the other routines exist so
closed-form answers can be checked against something that does not share
their derivation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InsufficientSamplesError, NoRootError

__all__ = [
    "CubicBranch",
    "ExtrapolationResult",
    "cardano_real_root",
    "trigonometric_roots",
    "solve_depressed_cubic",
    "cubic_residual",
    "bisect_largest_root",
    "fd_derivative",
    "extrapolate_limit",
]

EPS = np.finfo(float).eps

CARDANO = "cardano-real"
TRIGONOMETRIC = "trigonometric"
# relative width of the discriminant band treated as zero
DOUBLE_ROOT_RTOL = 1e-12
SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CubicBranch:
    """Real roots of ``t**3 + p*t + q = 0`` with the branch that produced them."""

    p: float
    q: float
    discriminant: float
    branch: str
    roots: tuple[float, ...]

    @property
    def largest(self) -> float:
        return self.roots[0]


@dataclass(frozen=True)
class ExtrapolationResult:
    limit: float
    error_estimate: float
    samples_used: int


def cubic_residual(p: float, q: float, t: float) -> float:
    return t**3 + p * t + q


def _polish(p: float, q: float, t: float) -> float:
    # one Newton step, kept only if it helps
    dfdt = 3.0 * t * t + p
    if dfdt == 0.0:
        return t
    t_new = t - cubic_residual(p, q, t) / dfdt
    if abs(cubic_residual(p, q, t_new)) < abs(cubic_residual(p, q, t)):
        return t_new
    return t


def cardano_real_root(p: float, q: float) -> float:
    """Single real root for a positive discriminant.

    Uses ``u - p/(3u)`` with ``u`` the larger-magnitude cube root, which is
    the same number as ``cbrt(-q/2 + sqrt(D)) + cbrt(-q/2 - sqrt(D))``
    without the cancellation between the two cube roots.
    """
    disc = p**3 / 27.0 + q * q / 4.0
    if disc < 0.0 and not _single_real_root(p, q):
        raise ValueError(f"Cardano branch needs a nonnegative discriminant, got {disc!r}")
    s = math.sqrt(max(disc, 0.0))
    w = -0.5 * q - math.copysign(s, q) if q != 0.0 else s
    u = float(np.cbrt(w))
    if u == 0.0:
        return 0.0
    return u - p / (3.0 * u)


def trigonometric_roots(p: float, q: float) -> tuple[float, float, float]:
    """Three real roots (descending) for a nonpositive discriminant."""
    if p == 0.0:
        if q != 0.0:
            raise ValueError("trigonometric branch needs p < 0 unless p = q = 0")
        return (0.0, 0.0, 0.0)
    if p > 0.0:
        raise ValueError(f"trigonometric branch needs p <= 0, got {p!r}")
    # -3 q sqrt(-3p) / (2 p^2) written as -(q/2)/m^3 with m = sqrt(-p/3);
    # dividing by m three times avoids underflow for tiny p; so does taking
    # the root before dividing by 3
    m = math.sqrt(-p) / SQRT3
    arg = -0.5 * q / m / m / m
    alpha = math.acos(min(1.0, max(-1.0, arg)))
    amp = 2.0 * math.sqrt(-3.0 * p) / 3.0
    roots = [amp * math.cos(alpha / 3.0 - 2.0 * math.pi * k / 3.0) for k in range(3)]
    return tuple(sorted(roots, reverse=True))  # type: ignore[return-value]


def _single_real_root(p: float, q: float) -> bool:
    """Sign of the discriminant decided without forming ``p**3`` (which can underflow).

    A discriminant within rounding of zero counts as zero, so a double root
    comes back with its multiplicity instead of being lost to Cardano.
    """
    if p >= 0.0:
        return q != 0.0 or p > 0.0
    m = math.sqrt(-p) / SQRT3
    return m * m * m < 0.5 * abs(q) * (1.0 - DOUBLE_ROOT_RTOL)


def solve_depressed_cubic(p: float, q: float, tol: float = 1e-10) -> CubicBranch:
    """Solve ``t**3 + p*t + q = 0`` over the reals.

    The discriminant ``p**3/27 + q**2/4`` picks the branch; zero goes to the
    trigonometric formula so that double roots come back with multiplicity.
    Roots are returned in descending order.
    """
    if not (math.isfinite(p) and math.isfinite(q)):
        raise ValueError("p and q must be finite")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    disc = p**3 / 27.0 + q * q / 4.0
    if p == 0.0 and q == 0.0:
        return CubicBranch(p, q, 0.0, TRIGONOMETRIC, (0.0, 0.0, 0.0))
    if _single_real_root(p, q):
        roots: tuple[float, ...] = (_polish(p, q, cardano_real_root(p, q)),)
        branch = CARDANO
    else:
        roots = tuple(sorted((_polish(p, q, t) for t in trigonometric_roots(p, q)), reverse=True))
        branch = TRIGONOMETRIC
    for t in roots:
        res = abs(cubic_residual(p, q, t))
        # scale by the size of the individual terms as well as 1 + |t|^3
        scale = max(1.0 + abs(t) ** 3, abs(p * t) + abs(q))
        if res > tol * scale:
            raise ArithmeticError(f"cubic root {t!r} has residual {res:.3e} for p={p!r}, q={q!r}")
    return CubicBranch(p, q, disc, branch, roots)


def _scan_grid(lo: float, hi: float, n: int) -> np.ndarray:
    if lo > 0.0:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def bisect_largest_root(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    n_grid: int = 4001,
) -> float:
    """Largest root of ``fn`` in ``[lo, hi]`` beyond which ``fn`` stays positive.

    A grid scan locates the last sign change, then plain bisection runs until
    the bracket stops shrinking. ``tol`` bounds ``|fn(root)|``.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    grid = _scan_grid(lo, hi, n_grid)
    vals = np.array([fn(float(x)) for x in grid])
    if not vals[-1] > 0.0:
        raise NoRootError(f"fn(hi) = {vals[-1]!r} is not positive")
    nonpos = np.nonzero(vals <= 0.0)[0]
    if nonpos.size == 0:
        raise NoRootError(f"no sign change of fn on [{lo}, {hi}]")
    k = int(nonpos[-1])
    a, b = float(grid[k]), float(grid[k + 1])
    if vals[k] == 0.0:
        return a
    fa = vals[k]
    while True:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = fn(m)
        if fm == 0.0:
            a = b = m
            break
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b = m
    root = b if abs(fn(b)) <= abs(fn(a)) else a
    if abs(fn(root)) > tol:
        raise NoRootError(f"bisection converged to {root!r} with |fn| = {abs(fn(root)):.3e} > {tol}")
    return root


def _central(fn: Callable[[float], float], r: float, h: float, order: int) -> float:
    if order == 1:
        return (fn(r + h) - fn(r - h)) / (2.0 * h)
    return (fn(r + h) - 2.0 * fn(r) + fn(r - h)) / (h * h)


def fd_derivative(
    fn: Callable[[float], float],
    r: float,
    order: int = 1,
    domain: tuple[float, float] = (-math.inf, math.inf),
) -> float:
    """Central difference with one Richardson step (h and h/2).

    Base step is ``eps**(1/3)`` for first derivatives and ``eps**(1/4)`` for
    second derivatives, both scaled by ``max(1, |r|)``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    h = (EPS ** (1.0 / 3.0) if order == 1 else EPS ** 0.25) * max(1.0, abs(r))
    lo, hi = domain
    if r - h <= lo or r + h >= hi:
        raise DomainError(
            f"r={r!r} is within one step ({h:.2e}) of the domain boundary", code="too-close-to-boundary"
        )
    coarse = _central(fn, r, h, order)
    fine = _central(fn, r, 0.5 * h, order)
    return (4.0 * fine - coarse) / 3.0


def extrapolate_limit(
    samples: Sequence[tuple[float, float]],
    powers: Sequence[int] | None = None,
) -> ExtrapolationResult:
    """Estimate ``lim_{x -> inf} value(x)`` from samples at increasing ``x``.

    The samples are fitted exactly by ``L + sum_j c_j * x**(-powers[j])``
    using as many terms as the sample count allows. The default model uses
    even powers ``2, 4, 6, ...``. The error estimate is the change in ``L``
    when the smallest-``x`` sample (and the highest term) is dropped.
    """
    if len(samples) < 3:
        raise InsufficientSamplesError(f"need at least 3 samples, got {len(samples)}")
    pts = sorted((float(x), float(v)) for x, v in samples)
    xs = np.array([x for x, _ in pts])
    vs = np.array([v for _, v in pts])
    if np.any(xs <= 0.0) or np.any(np.diff(xs) <= 0.0):
        raise ValueError("sample abscissae must be positive and distinct")
    m = len(pts)
    if powers is None:
        powers = [2 * (j + 1) for j in range(m - 1)]
    if len(powers) < m - 1:
        raise ValueError(f"{m} samples need {m - 1} correction powers")

    def fit(x: np.ndarray, v: np.ndarray) -> float:
        k = len(x)
        # scale abscissae so the Vandermonde-like matrix stays well conditioned
        s = x / x[-1]
        cols = [np.ones(k)] + [s ** (-float(pw)) for pw in powers[: k - 1]]
        coef = np.linalg.solve(np.column_stack(cols), v)
        return float(coef[0])

    full = fit(xs, vs)
    reduced = fit(xs[1:], vs[1:])
    return ExtrapolationResult(limit=full, error_estimate=abs(full - reduced), samples_used=m)
