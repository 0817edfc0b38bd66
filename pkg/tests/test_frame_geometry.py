import math

import numpy as np
import pytest
import sympy as sp

from ehverify import frame_geometry as fg
from ehverify.checks import metric_for
from ehverify.einstein_5d import AFFINE_R2, HYPERBOLIC_LAPSE, Lapse
from ehverify.errors import DomainError
from ehverify.families import construct, type1_construct, type2_construct
from ehverify.radial_profiles import TYPE_I, TYPE_II, RadialProfile

from oracles import biaxial_ricci_reference, exterior_d, sigma_forms, wedge

SPECS = [
    ("type1", 1.0, 3, 0.0),
    ("type1", 0.1, 5, -4.0),
    ("type2", 1.0, 3, 0.0),
    ("type2", 10.0, 4, 0.01),
    ("type2", 1.0, 6, -20.0),
    ("zero-scalar", 2.0, 4, 0.0),
    ("eh", 1.0, None, 0.0),
    ("hyperbolic", 0.5, None, 0.0),
]


def _radii(spec, n=50):
    lo = 1.01 * spec.r0 if spec.r0 > 0 else 0.05
    return np.geomspace(lo, max(100.0 * lo, 10.0), n)


def test_sigma_structure_equations():
    s1, s2, s3 = sigma_forms()
    for a, b, c in ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2)):
        assert sp.simplify(exterior_d(a) - 2 * wedge(b, c)) == sp.zeros(3, 3)


class TestConnection:
    def test_hyperbolic_values(self):
        w = fg.connection(fg.hyperbolic_metric(1.0), 1.0)
        assert w["w21"] == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert w["w23"] == pytest.approx(1.0, rel=1e-15)

    def test_type2_w23(self):
        prof = RadialProfile(TYPE_II, 1.0, A=-25.0 / 16.0, r_min=math.sqrt(1.25))
        f = math.sqrt(1.0 - 25.0 / 256.0)
        w = fg.connection(fg.biaxial_from_profile(prof), 2.0)
        assert w["w23"] == pytest.approx(2.0 / (2.0 * f) - f / 2.0, rel=1e-14)

    @pytest.mark.parametrize("fam,B,n,C", SPECS)
    def test_w23_plus_w34(self, fam, B, n, C):
        spec = construct(fam, B, n, C)
        metric = metric_for(spec)
        r = 2.0 * spec.r0 if spec.r0 else 1.0
        w = fg.connection(metric, r)
        assert w["w23"] + w["w34"] == pytest.approx(2.0 / metric.c(r)[0], rel=1e-14)

    @pytest.mark.parametrize("fam,B,n,C", SPECS)
    def test_torsion_free(self, fam, B, n, C):
        spec = construct(fam, B, n, C)
        for r in _radii(spec, 10):
            assert fg.torsion_residual(metric_for(spec), float(r)) < 1e-12

    def test_outside_domain(self):
        metric = metric_for(construct("type2", 1.0, 3, 0.0))
        with pytest.raises(DomainError) as exc:
            fg.connection(metric, 1.0)
        assert exc.value.code == "outside-domain"


class TestCurvature:
    def test_type1_sectional_k23(self):
        prof = RadialProfile(TYPE_I, 1.0, A=-1.0, C=2.0)
        k = fg.curvature(fg.biaxial_from_profile(prof), 2.0).sectional
        assert k["K23"] == pytest.approx(-4.4375, rel=1e-13)

    def test_hyperbolic_constant_curvature(self):
        B = 0.7
        frame = fg.curvature(fg.hyperbolic_metric(B), 1.3)
        for val in frame.sectional.values():
            assert val == pytest.approx(-B, rel=1e-13)
        np.testing.assert_allclose(frame.ricci_diag, -3 * B, rtol=1e-13)
        assert frame.scalar == pytest.approx(-12 * B, rel=1e-13)

    def test_classic_ricci_flat(self):
        frame = fg.curvature(metric_for(construct("eh", 1.0)), 1.5)
        np.testing.assert_allclose(frame.ricci_diag, 0.0, atol=1e-9)

    @pytest.mark.parametrize("fam,B,n,C", SPECS)
    def test_identities(self, fam, B, n, C):
        spec = construct(fam, B, n, C)
        metric = metric_for(spec)
        scale = max(B, 1.0 / spec.r0**2 if spec.r0 else 0.0)
        for r in _radii(spec, 15):
            frame = fg.curvature(metric, float(r))
            assert fg.bianchi_residual(frame) <= 1e-10 * scale
            assert fg.pair_symmetry_residual(frame) <= 1e-10 * scale
            assert frame.scalar == pytest.approx(float(np.sum(frame.ricci_diag)), abs=1e-12 * scale)

    @pytest.mark.parametrize("fam,B,n,C", [s for s in SPECS if s[0] != "hyperbolic"])
    def test_against_coordinate_christoffel_oracle(self, fam, B, n, C):
        spec = construct(fam, B, n, C)
        metric = metric_for(spec)
        for r in (1.2 * spec.r0, 3.0 * spec.r0):
            frame = fg.curvature(metric, r)
            ref = biaxial_ricci_reference(metric, r)
            got = np.array([frame.ricci_diag[0], frame.ricci_diag[3], frame.scalar])
            np.testing.assert_allclose(got, ref, rtol=1e-9, atol=1e-9 * max(1.0, B))

    @pytest.mark.parametrize("fam,B,n,C", [s for s in SPECS if s[0] != "hyperbolic"])
    def test_analytic_matches_finite_difference(self, fam, B, n, C):
        spec = construct(fam, B, n, C)
        exact, approx = metric_for(spec), metric_for(spec, "fd")
        for r in _radii(spec):
            a = fg.curvature(exact, float(r)).riemann
            b = fg.curvature(approx, float(r)).riemann
            denom = max(float(np.max(np.abs(a))), B)
            assert float(np.max(np.abs(a - b))) / denom <= 1e-6


class TestScalarOde:
    def test_type1(self):
        spec = type1_construct(1.0, 4, 0.2)
        assert abs(fg.scalar_ode_residual(spec.profile, 3.0)) <= 1e-9 * 24

    def test_type2_hyperbolic_is_exact(self):
        prof = RadialProfile(TYPE_II, 1.0)
        assert fg.scalar_ode_residual(prof, 2.0) == 0.0

    def test_integration_constants_are_free(self):
        # A/r^4 and C/r^2 solve the homogeneous equation, so shifting A keeps the residual at zero
        spec = type1_construct(1.0, 3, 0.0)
        shifted = RadialProfile(TYPE_I, spec.B, A=spec.A + 1.0, C=spec.C + 0.5)
        assert abs(fg.scalar_ode_residual(shifted, 1.2 * spec.r0)) <= 1e-9 * 24

    def test_corrupted_profile(self):
        spec = type1_construct(1.0, 3, 0.0)
        good = spec.profile

        class Corrupted:
            family, B = TYPE_I, good.B

            def fsq(self, r, derivative=0):
                extra = (1e-2 / r**3, -3e-2 / r**4, 12e-2 / r**5)[derivative]
                return good.fsq(r, derivative) + extra

            def fsq_minus_one(self, r):
                return self.fsq(r) - 1.0

        assert abs(fg.scalar_ode_residual(Corrupted(), 1.2 * spec.r0)) >= 1e-3

    def test_other_family_rejected(self):
        with pytest.raises(ValueError):
            fg.scalar_ode_residual(construct("eh", 1.0).profile, 2.0)


class TestWeyl:
    def test_classic_is_anti_self_dual(self):
        plus, minus = fg.weyl_dual_parts(metric_for(construct("eh", 1.0)), 1.3)
        assert plus <= 1e-9
        assert minus > 1.0

    def test_orientation_flag_swaps(self):
        metric = metric_for(construct("eh", 1.0))
        assert fg.weyl_dual_parts(metric, 1.3, -1) == pytest.approx(fg.weyl_dual_parts(metric, 1.3)[::-1])

    def test_hyperbolic_conformally_flat(self):
        assert fg.weyl_dual_parts(fg.hyperbolic_metric(1.0), 0.8) == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_type1_not_self_dual(self):
        # regression baseline for (B, n, C) = (1, 6, 1), r = 1.5 r0
        spec = type1_construct(1.0, 6, 1.0)
        plus = fg.weyl_asd_residual(metric_for(spec), 1.5 * spec.r0)
        assert plus == pytest.approx(4.898979485566356, rel=1e-9)


class TestFiveDimensional:
    def test_constant_lapse_is_product(self):
        spec = type2_construct(1.0, 3, 0.2)
        metric = metric_for(spec)
        ric = fg.curvature_5d(metric, lambda r: (1.0, 0.0, 0.0), 2.0)
        assert ric[0] == 0.0
        np.testing.assert_allclose(ric[1:], fg.curvature(metric, 2.0).ricci_diag, rtol=1e-15)

    @pytest.mark.parametrize("fam,C,lapse", [
        ("type1", 0.05, Lapse(AFFINE_R2, 1.0, 0.3)),
        ("type2", 0.4, Lapse(HYPERBOLIC_LAPSE, 1.0, 0.5, 1.0)),
        ("type2", -1.0, Lapse(HYPERBOLIC_LAPSE, 2.0, 1.0, 1.0)),
    ])
    def test_recipe_matches_generic_engine(self, fam, C, lapse):
        spec = construct(fam, 1.0, 3, C)
        metric = metric_for(spec)
        for r in _radii(spec, 12):
            full = fg.curvature_5d_cartan(metric, lapse, float(r))
            recipe = fg.curvature_5d(metric, lapse, float(r))
            np.testing.assert_allclose(np.diag(full), recipe, rtol=1e-10, atol=1e-10)
            assert np.max(np.abs(full - np.diag(np.diag(full)))) < 1e-10

    def test_recipe_matches_finite_difference(self):
        spec = type2_construct(1.0, 4, 0.1)
        lapse = Lapse(HYPERBOLIC_LAPSE, 1.0, 0.2, 1.0)
        exact, approx = metric_for(spec), metric_for(spec, "fd")
        for r in _radii(spec, 20):
            a = fg.curvature_5d(exact, lapse, float(r))
            b = fg.curvature_5d(approx, lapse, float(r))
            assert np.max(np.abs(a - b)) <= 1e-6 * max(1.0, np.max(np.abs(a)))

    def test_degenerate_lapse(self):
        metric = metric_for(type2_construct(1.0, 3, 0.0))
        with pytest.raises(DomainError) as exc:
            fg.curvature_5d(metric, lambda r: (-1.0, 0.0, 0.0), 2.0)
        assert exc.value.code == "degenerate-lapse"
