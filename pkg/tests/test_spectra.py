import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wva_lab.polarization import MwiSettings
from wva_lab.spectra import (
    MomentumGrid,
    SpectralProfile,
    build_grid,
    effective_sigma_p,
    lambda_p_convert,
)

LAMBDA0 = 1550e-9
P0 = 4053667.9401158622            # 2*pi / 1550 nm, frozen
SIGMA_P_6NM = 15691.617832706564   # 2*pi * 6 nm / lambda0^2, frozen
SIGMA_P_05NM = 1307.6348193922136


def gaussian(width=6e-9, convention="sigma"):
    return SpectralProfile("gaussian", LAMBDA0, width, width_convention=convention)


class TestConversion:
    def test_center_wavelength(self):
        assert lambda_p_convert(LAMBDA0) == pytest.approx(P0, rel=1e-12)

    def test_unit_case(self):
        assert lambda_p_convert(2.0 * math.pi) == pytest.approx(1.0, rel=1e-15)

    @given(st.floats(min_value=1e-9, max_value=1e-3))
    def test_round_trip_identity(self, lam):
        assert lambda_p_convert(lambda_p_convert(lam)) == pytest.approx(lam, rel=1e-12)

    def test_nonpositive_rejected(self):
        for bad in (0.0, -1.0):
            with pytest.raises(ValueError):
                lambda_p_convert(bad)


class TestEffectiveSigma:
    def test_six_nanometers(self):
        assert effective_sigma_p(gaussian(6e-9)) == pytest.approx(SIGMA_P_6NM, rel=1e-12)

    def test_half_nanometer(self):
        assert effective_sigma_p(gaussian(0.5e-9)) == pytest.approx(SIGMA_P_05NM, rel=1e-12)

    def test_monochromatic_is_zero(self):
        profile = SpectralProfile("monochromatic", LAMBDA0, 0.0)
        assert effective_sigma_p(profile) == 0.0

    def test_fwhm_convention_gaussian(self):
        fwhm = 2.0 * math.sqrt(2.0 * math.log(2.0))  # sigma -> fwhm factor
        direct = effective_sigma_p(gaussian(6e-9))
        via_fwhm = effective_sigma_p(gaussian(6e-9 * fwhm, convention="fwhm"))
        assert via_fwhm == pytest.approx(direct, rel=1e-12)

    def test_fwhm_convention_rectangular(self):
        profile = SpectralProfile("rectangular", LAMBDA0, 3e-9, width_convention="fwhm")
        assert profile.sigma_lambda == pytest.approx(3e-9 / math.sqrt(12.0), rel=1e-12)


class TestProfileValidation:
    def test_width_required(self):
        with pytest.raises(ValueError):
            SpectralProfile("gaussian", LAMBDA0, 0.0)
        with pytest.raises(ValueError):
            SpectralProfile("monochromatic", LAMBDA0, 1e-9)

    def test_supergaussian_order_must_be_even(self):
        with pytest.raises(ValueError):
            SpectralProfile("supergaussian", LAMBDA0, 6e-9, order=5)
        with pytest.raises(ValueError):
            SpectralProfile("supergaussian", LAMBDA0, 6e-9, order=0)

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            SpectralProfile("gaussian", LAMBDA0, 6e-9, width_convention="hwhm")


class TestBuildGrid:
    def test_normalized_and_centered(self):
        grid = build_grid(gaussian())
        assert grid.points.size >= 2**12
        assert grid.integral() == pytest.approx(1.0, abs=1e-12)
        assert grid.mean() == pytest.approx(P0, rel=1e-9)

    def test_gaussian_moments(self):
        grid = build_grid(gaussian())
        assert grid.mean() == pytest.approx(P0, rel=1e-3 * SIGMA_P_6NM / P0)
        assert grid.variance() == pytest.approx(SIGMA_P_6NM**2, rel=1e-3)

    def test_supergaussian_equal_variance(self):
        profile = SpectralProfile("supergaussian", LAMBDA0, 6e-9, order=6)
        grid = build_grid(profile)
        assert grid.variance() == pytest.approx(SIGMA_P_6NM**2, rel=1e-3)

    def test_doubling_resolution_converged(self):
        base = build_grid(gaussian())
        fine = build_grid(gaussian(), min_points=2 * (base.points.size - 1) + 1)
        assert fine.integral() == pytest.approx(base.integral(), rel=1e-9)
        assert fine.mean() == pytest.approx(base.mean(), rel=1e-9)

    def test_supergaussian_order_two_matches_gaussian(self):
        sg = build_grid(SpectralProfile("supergaussian", LAMBDA0, 6e-9, order=2))
        ga = build_grid(gaussian())
        peak = ga.density.max()
        assert np.max(np.abs(sg.density - ga.density)) < 1e-6 * peak

    def test_rectangular_density(self):
        profile = SpectralProfile("rectangular", LAMBDA0, 3e-9)
        grid = build_grid(profile)
        half_width = 0.5 * math.sqrt(12.0) * effective_sigma_p(profile)
        inside = np.abs(grid.points - grid.center) <= half_width * (1 - 1e-12)
        outside = np.abs(grid.points - grid.center) > half_width * (1 + 1e-12)
        values = grid.density[inside]
        assert np.max(np.abs(values - values[0])) <= 1e-12 * values[0]
        assert np.all(grid.density[outside] == 0.0)

    def test_modulation_period_resolved(self):
        settings = MwiSettings(1, 0.0, gamma=1.9 * math.pi / P0, rho=0.002)
        grid = build_grid(gaussian(), settings)
        assert abs(settings.phase_length) * grid.step <= 2.0 * math.pi / 32.0

    def test_span_covers_eight_widths(self):
        grid = build_grid(gaussian())
        assert grid.points[0] <= P0 - 8.0 * SIGMA_P_6NM * (1 - 1e-12)
        assert grid.points[-1] >= P0 + 8.0 * SIGMA_P_6NM * (1 - 1e-12)

    def test_monochromatic_rejected(self):
        with pytest.raises(ValueError, match="monochromatic"):
            build_grid(SpectralProfile("monochromatic", LAMBDA0, 0.0))

    def test_half_resolution_consistent(self):
        grid = build_grid(gaussian())
        half = grid.half_resolution()
        assert half.points.size == (grid.points.size + 1) // 2
        assert half.integral() == pytest.approx(grid.integral(), rel=1e-9)


class TestMomentumGridValidation:
    def test_rejects_bad_inputs(self):
        pts = np.linspace(0.0, 1.0, 5)
        w = np.full(5, 0.1)
        d = np.ones(5)
        with pytest.raises(ValueError):
            MomentumGrid(pts[::-1].copy(), w, d, 0.5)
        with pytest.raises(ValueError):
            MomentumGrid(pts, -w, d, 0.5)
        with pytest.raises(ValueError):
            MomentumGrid(pts, w, -d, 0.5)
        with pytest.raises(ValueError):
            MomentumGrid(np.linspace(0, 1, 4), np.full(4, 0.1), np.ones(4), 0.5)

    def test_arrays_read_only(self):
        grid = build_grid(gaussian())
        with pytest.raises(ValueError):
            grid.density[0] = 1.0
