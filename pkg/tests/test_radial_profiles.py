import math

import numpy as np
import pytest
import sympy as sp

from ehverify.errors import DomainError, VerificationError
from ehverify.families import zero_scalar_construct
from ehverify.numeric_kernel import fd_derivative
from ehverify.radial_profiles import (
    CLASSIC_EH,
    HYPERBOLIC,
    TYPE_I,
    TYPE_II,
    ZERO_SCALAR,
    RadialProfile,
    classic_eh,
)

R, Bs, As, Cs = sp.symbols("r B A C", positive=True)
SYMBOLIC_F = {
    CLASSIC_EH: 1 - Bs / R**4,
    ZERO_SCALAR: 1 - 2 * As / R**2 - Bs / R**4,
    TYPE_I: 1 + Cs / R**2 + As / R**4 + Bs * R**2,
    TYPE_II: 1 + (sp.sqrt(1 + Bs * R**2) * Cs + As) / R**4,
    HYPERBOLIC: sp.Integer(1),
}


@pytest.mark.parametrize("family", sorted(SYMBOLIC_F))
def test_fsq_and_derivatives_match_symbolic(family):
    B, A, C = 0.7, -0.4, 0.3
    prof = RadialProfile(family, B, A=A, C=C)
    expr = SYMBOLIC_F[family]
    subs = {Bs: B, As: A, Cs: C}
    for r in (0.6, 1.3, 4.0, 25.0):
        for k in range(3):
            ref = float(sp.diff(expr, R, k).subs(subs).subs(R, r))
            assert prof.fsq(r, k) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_type1_direct_value():
    assert RadialProfile(TYPE_I, 1.0, A=-1.0, C=2.0).fsq(1.0) == pytest.approx(3.0, rel=1e-15)


def test_type2_direct_value():
    assert RadialProfile(TYPE_II, 1.0, A=0.0, C=1.0).fsq(1.0) == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-15)


def test_type2_hyperbolic_reduction():
    prof = RadialProfile(TYPE_II, 2.0)
    for r in (0.3, 1.0, 7.0):
        assert prof.f(r) == 1.0
        assert prof.f(r, 1) == 0.0


def test_classic_root():
    assert classic_eh(1.0).f(1.0) == 0.0


def test_type1_root():
    prof = RadialProfile(TYPE_I, 1.0, A=-4.0 / 27.0, r_min=math.sqrt(1.0 / 3.0))
    assert prof.f(math.sqrt(1.0 / 3.0)) == pytest.approx(0.0, abs=1e-7)


def test_zero_scalar_n2_is_classic():
    spec = zero_scalar_construct(1.0, 2)
    assert spec.A == 0.0
    z, c = spec.profile, classic_eh(1.0)
    for r in (1.1, 2.0, 9.0):
        assert z.fsq(r) == c.fsq(r)


def test_chain_rule_against_fd():
    prof = RadialProfile(TYPE_II, 1.0, A=-25.0 / 16.0, r_min=math.sqrt(1.25))
    for r in np.geomspace(1.1 * prof.r_min, 1e3, 30):
        r = float(r)
        assert prof.f(r, 1) == pytest.approx(fd_derivative(prof.f, r, 1), rel=1e-6, abs=1e-12)
        assert prof.f(r, 2) == pytest.approx(fd_derivative(prof.f, r, 2), rel=1e-6, abs=1e-9)


def test_square_root_is_consistent():
    prof = RadialProfile(TYPE_I, 2.0, A=-0.5, C=0.1, r_min=0.6)
    for r in (0.7, 1.0, 3.0):
        assert prof.f(r) ** 2 == pytest.approx(prof.fsq(r), rel=1e-12)


def test_fsq_minus_one_has_no_cancellation():
    prof = RadialProfile(TYPE_II, 1.0, A=-1.5625)
    r = 1e6
    assert prof.fsq_minus_one(r) == pytest.approx(-1.5625 / r**4, rel=1e-12)


class TestErrors:
    def test_below_domain(self):
        with pytest.raises(DomainError) as exc:
            classic_eh(1.0).f(0.9)
        assert exc.value.code == "outside-domain"

    def test_derivative_at_root_refused(self):
        with pytest.raises(DomainError):
            classic_eh(1.0).f(1.0, 1)

    def test_negative_square(self):
        prof = RadialProfile(CLASSIC_EH, 1.0)
        with pytest.raises(VerificationError) as exc:
            prof.f(0.5)
        assert exc.value.code == "negative-square"

    def test_singular_radius(self):
        with pytest.raises(DomainError) as exc:
            RadialProfile(TYPE_I, 1.0).fsq(0.0)
        assert exc.value.code == "singular-radius"

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            RadialProfile("taub-nut", 1.0)
