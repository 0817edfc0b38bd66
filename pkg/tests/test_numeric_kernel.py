import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ehverify import numeric_kernel as nk
from ehverify.errors import DomainError, InsufficientSamplesError, NoRootError
from ehverify.families import type2_cubic, type2_pq
from ehverify.radial_profiles import CLASSIC_EH, TYPE_I, TYPE_II, RadialProfile


def _numpy_real_roots(p, q):
    # companion-matrix oracle
    roots = np.roots([1.0, 0.0, p, q])
    return sorted((z.real for z in roots if abs(z.imag) < 1e-7 * max(1.0, abs(z))), reverse=True)


class TestCubic:
    def test_triple_root_at_origin(self):
        res = nk.solve_depressed_cubic(0.0, 0.0)
        assert res.roots == (0.0, 0.0, 0.0)
        assert res.discriminant == 0.0

    def test_double_root(self):
        res = nk.solve_depressed_cubic(-3.0, 2.0)
        assert res.discriminant == pytest.approx(0.0, abs=1e-15)
        assert res.branch == nk.TRIGONOMETRIC
        np.testing.assert_allclose(res.roots, [1.0, 1.0, -2.0], atol=1e-7)

    def test_bolt_cubic_shifts_back_to_five_quarters(self):
        p, q = type2_pq(1.0, 3, 0.0)
        t = nk.solve_depressed_cubic(p, q).largest
        x = t + (9 - 4) / 12.0
        assert x == pytest.approx(1.25, abs=1e-12)
        assert abs(type2_cubic(1.0, 3, x, 0.0)[0]) < 1e-12

    def test_cardano_branch_has_one_root(self):
        res = nk.solve_depressed_cubic(1.0, 1.0)
        assert res.branch == nk.CARDANO
        assert len(res.roots) == 1
        assert res.roots[0] == pytest.approx(_numpy_real_roots(1.0, 1.0)[0], rel=1e-12)

    def test_subnormal_p(self):
        # -p/3 underflows to zero here; the roots are 0 and +-sqrt(-p)
        res = nk.solve_depressed_cubic(-5e-324, 0.0)
        assert res.branch == nk.TRIGONOMETRIC
        assert abs(res.roots[1]) <= 1e-170
        assert res.roots[0] == pytest.approx(math.sqrt(5e-324), rel=1e-6)

    def test_cardano_large_ratio_no_cancellation(self):
        # p tiny against q: the naive sum of two cube roots loses digits
        p, q = 1e-8, -1.0
        t = nk.cardano_real_root(p, q)
        assert abs(nk.cubic_residual(p, q, t)) < 1e-15

    def test_random_against_companion_matrix(self):
        rng = np.random.default_rng(20240611)
        for p, q in rng.uniform(-10.0, 10.0, size=(1000, 2)):
            res = nk.solve_depressed_cubic(float(p), float(q))
            for t in res.roots:
                assert abs(nk.cubic_residual(p, q, t)) <= 1e-10 * (1.0 + abs(t) ** 3)
            expected = _numpy_real_roots(p, q)
            assert len(res.roots) == len(expected)
            assert len(res.roots) == (1 if res.discriminant > 0 else 3)
            np.testing.assert_allclose(res.roots, expected, rtol=1e-6, atol=1e-6)

    @settings(max_examples=300, deadline=None)
    @given(
        st.floats(-1e3, 1e3, allow_nan=False),
        st.floats(-1e3, 1e3, allow_nan=False),
    )
    def test_roots_descending_with_bounded_residual(self, p, q):
        res = nk.solve_depressed_cubic(p, q)
        assert list(res.roots) == sorted(res.roots, reverse=True)
        for t in res.roots:
            scale = max(1.0 + abs(t) ** 3, abs(p * t) + abs(q))
            assert abs(nk.cubic_residual(p, q, t)) <= 1e-10 * scale

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3))
    def test_recovers_constructed_roots(self, roots):
        # (t - a)(t - b)(t - c) with a + b + c shifted to zero
        a, b, c = roots
        m = (a + b + c) / 3.0
        a, b, c = a - m, b - m, c - m
        p = a * b + b * c + c * a
        q = -a * b * c
        res = nk.solve_depressed_cubic(p, q)
        assert res.largest == pytest.approx(max(a, b, c), abs=1e-4)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            nk.solve_depressed_cubic(math.inf, 0.0)


class TestBisection:
    def test_type2_clarkson_mann(self):
        prof = RadialProfile(TYPE_II, 1.0, A=-25.0 / 16.0)
        assert nk.bisect_largest_root(prof.fsq, 0.5, 3.0) == pytest.approx(math.sqrt(1.25), abs=1e-10)

    def test_classic(self):
        prof = RadialProfile(CLASSIC_EH, 1.0)
        assert nk.bisect_largest_root(prof.fsq, 0.5, 2.0) == pytest.approx(1.0, abs=1e-12)

    def test_type1(self):
        prof = RadialProfile(TYPE_I, 1.0, A=-4.0 / 27.0)
        r = nk.bisect_largest_root(prof.fsq, 0.1, 2.0)
        assert r == pytest.approx(math.sqrt(1.0 / 3.0), abs=1e-10)
        assert abs(prof.fsq(r)) <= 1e-10

    def test_largest_of_several(self):
        fn = lambda x: (x - 1.0) * (x - 2.0) * (x - 3.0)
        assert nk.bisect_largest_root(fn, 0.0, 4.0) == pytest.approx(3.0, abs=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(NoRootError) as exc:
            nk.bisect_largest_root(lambda x: 1.0 + x * x, 0.0, 4.0)
        assert exc.value.code == "no-root"

    def test_agrees_with_cubic_solver(self):
        for n in range(3, 9):
            for C in (-3.0, -0.5, 0.0, 0.3):
                p, q = type2_pq(1.0, n, C)
                x = nk.solve_depressed_cubic(p, q).largest + (n * n - 4) / 12.0
                oracle = nk.bisect_largest_root(lambda s: type2_cubic(1.0, n, s, C)[0], 1e-3, 100.0, tol=1e-8)
                assert x == pytest.approx(oracle, abs=1e-10)


class TestFiniteDifference:
    def test_square(self):
        assert nk.fd_derivative(lambda x: x * x, 2.0, 1) == pytest.approx(4.0, rel=1e-10)

    def test_sine(self):
        assert nk.fd_derivative(math.sin, 0.0, 1) == pytest.approx(1.0, rel=1e-10)

    def test_second_derivative_type1(self):
        prof = RadialProfile(TYPE_I, 1.0, A=-1.0, C=2.0)
        expected = 6 * 2.0 / 16 + 20 * -1.0 / 64 + 2.0
        assert nk.fd_derivative(prof.fsq, 2.0, 2) == pytest.approx(expected, rel=1e-8)

    def test_too_close_to_boundary(self):
        with pytest.raises(DomainError) as exc:
            nk.fd_derivative(math.sqrt, 1e-9, 1, domain=(0.0, math.inf))
        assert exc.value.code == "too-close-to-boundary"

    def test_exponential_grid(self):
        for r in np.geomspace(0.01, 100.0, 20):
            assert nk.fd_derivative(math.exp, r, 1) == pytest.approx(math.exp(r), rel=1e-8)
            assert nk.fd_derivative(math.log, r, 2) == pytest.approx(-1.0 / r**2, rel=1e-6)


class TestExtrapolation:
    def test_exact_model(self):
        res = nk.extrapolate_limit([(x, 3.0 + 1.0 / x**2) for x in (10.0, 20.0, 40.0)])
        assert res.limit == pytest.approx(3.0, abs=1e-8)
        assert res.samples_used == 3

    def test_constant(self):
        res = nk.extrapolate_limit([(x, 2.5) for x in (1.0, 2.0, 4.0)])
        assert res.limit == pytest.approx(2.5, abs=1e-14)
        assert res.error_estimate == pytest.approx(0.0, abs=1e-14)

    def test_odd_powers_need_explicit_model(self):
        samples = [(x, -1.0 + 0.3 / x + 0.2 / x**2) for x in (100.0, 200.0, 400.0)]
        assert nk.extrapolate_limit(samples, powers=(1, 2)).limit == pytest.approx(-1.0, abs=1e-12)
        assert abs(nk.extrapolate_limit(samples).limit + 1.0) > 1e-5

    def test_insufficient(self):
        with pytest.raises(InsufficientSamplesError) as exc:
            nk.extrapolate_limit([(1.0, 1.0), (2.0, 1.0)])
        assert exc.value.code == "insufficient-samples"

    def test_error_estimate_nonnegative(self):
        res = nk.extrapolate_limit([(x, 1.0 + 1.0 / x**3) for x in (10.0, 20.0, 40.0, 80.0)])
        assert res.error_estimate >= 0.0
        assert res.limit == pytest.approx(1.0, abs=1e-4)
