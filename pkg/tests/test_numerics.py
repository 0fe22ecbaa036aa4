import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import exp1

from helpers import quad_e1_scaled, trapezoid_gaussian_fermi
from memkin import (QuadratureSpec, ValidationError, e1_scaled, fermi,
                    gaussian_fermi_integral)

KT = 0.025335


class TestFermi:
    def test_zero_is_half(self):
        assert fermi(0.0, KT) == pytest.approx(0.5, abs=1e-15)

    def test_ln3_point(self):
        assert fermi(KT * np.log(3.0), KT) == pytest.approx(0.25, rel=1e-12)

    @given(st.floats(min_value=-50, max_value=50))
    @settings(max_examples=200, deadline=None)
    def test_particle_hole_identity(self, E):
        assert fermi(E, KT) + fermi(-E, KT) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_decreasing(self):
        E = np.linspace(-1.0, 1.0, 1001)
        f = fermi(E, KT)
        assert np.all(np.diff(f) < 0)

    def test_saturation_no_overflow(self):
        assert fermi(1e6, KT) == 0.0
        assert fermi(-1e6, KT) == 1.0


class TestE1Scaled:
    def test_known_point_one(self):
        # oracle: adaptive quadrature of the defining integral
        assert e1_scaled(1.0) == pytest.approx(0.596347, abs=1e-5)
        assert e1_scaled(1.0) == pytest.approx(quad_e1_scaled(1.0), rel=1e-10)

    def test_known_point_hundred(self):
        # oracle: asymptotic series 1/x - 1/x^2 + 2/x^3 - 6/x^4
        x = 100.0
        asym = 1 / x - 1 / x**2 + 2 / x**3 - 6 / x**4
        assert e1_scaled(x) == pytest.approx(0.0099019, abs=1e-6)
        assert e1_scaled(x) == pytest.approx(asym, rel=1e-6)

    def test_bracketing_bound_dense(self):
        x = np.logspace(-3, 3, 10_000)
        v = e1_scaled(x)
        assert np.all(v > 1.0 / (x + 1.0))
        assert np.all(v < 1.0 / x)

    def test_strictly_decreasing(self):
        x = np.logspace(-3, 3, 2000)
        assert np.all(np.diff(e1_scaled(x)) < 0)

    def test_against_scipy(self):
        x = np.logspace(-3, 2.5, 300)
        ref = np.exp(x) * exp1(x)
        assert np.allclose(e1_scaled(x), ref, rtol=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            e1_scaled(0.0)
        with pytest.raises(ValidationError):
            e1_scaled(-1.0)


class TestGaussianFermiIntegral:
    def test_full_mass_deep_below_fermi_sea(self):
        spread = 4 * 0.2 * KT
        full = np.sqrt(np.pi * spread)
        val = gaussian_fermi_integral(-2.0, spread, KT)
        assert val == pytest.approx(full, rel=1e-12)

    def test_particle_hole_reflection(self):
        spread = 4 * 0.25 * KT
        for c in (-0.3, -0.05, 0.0, 0.02, 0.4):
            a = gaussian_fermi_integral(c, spread, KT, use_hole=False)
            b = gaussian_fermi_integral(-c, spread, KT, use_hole=True)
            assert a == pytest.approx(b, rel=1e-12)

    def test_against_dense_trapezoid(self):
        spread = 4 * 0.2 * KT
        val = gaussian_fermi_integral(0.0, spread, KT)
        ref = trapezoid_gaussian_fermi(0.0, spread, KT)
        assert val == pytest.approx(ref, rel=1e-8)

    def test_monotone_decreasing_in_center(self):
        spread = 4 * 0.2 * KT
        centers = np.linspace(-0.5, 0.5, 21)
        vals = [gaussian_fermi_integral(c, spread, KT) for c in centers]
        assert np.all(np.diff(vals) < 0)

    def test_node_doubling_within_tolerance(self):
        spread = 4 * 0.3 * KT
        spec = QuadratureSpec(nodes=512, rtol=1e-9)
        spec2 = QuadratureSpec(nodes=1024, rtol=1e-9)
        a = gaussian_fermi_integral(0.1, spread, KT, spec=spec)
        b = gaussian_fermi_integral(0.1, spread, KT, spec=spec2)
        assert abs(a - b) < spec.rtol * abs(a)

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            QuadratureSpec(nodes=8)
        with pytest.raises(ValidationError):
            QuadratureSpec(rtol=1e-3)
        with pytest.raises(ValidationError):
            QuadratureSpec(min_half_width_eV=0.0)

    def test_invalid_spread(self):
        with pytest.raises(ValidationError):
            gaussian_fermi_integral(0.0, -1.0, KT)
