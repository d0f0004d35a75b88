"""Meter spectral models and wavelength <-> momentum conversion.

Momentum is the angular wavenumber p = 2*pi/lambda in rad/m.  A profile's
quoted width is interpreted according to ``width_convention``:

* ``"sigma"`` (default): the quoted width is the standard deviation of the
  momentum-space density, whatever the shape (equal-variance rule: a
  rectangle of full width W has sigma = W/sqrt(12), a flat-top supergaussian
  is matched the same way).
* ``"fwhm"``: the quoted width is the full width at half maximum.

Grids are uniform, carry composite-Simpson weights, and normalize the
sampled density to unit integral under their own quadrature rule.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import NumericalError
from .polarization import MwiSettings

MIN_GRID_POINTS = 2**13 + 1
MAX_GRID_POINTS = 2**21 + 1


class Shape(str, enum.Enum):
    GAUSSIAN = "gaussian"
    SUPERGAUSSIAN = "supergaussian"
    RECTANGULAR = "rectangular"
    MONOCHROMATIC = "monochromatic"


_WIDTH_CONVENTIONS = ("sigma", "fwhm")


def _supergaussian_sigma_factor(order: int) -> float:
    """Std of exp(-|x/w|^order) relative to w: sqrt(G(3/order)/G(1/order))."""
    return math.sqrt(math.gamma(3.0 / order) / math.gamma(1.0 / order))


@dataclass(frozen=True)
class SpectralProfile:
    """Source spectrum: shape family, center wavelength, quoted width (meters)."""

    shape: Shape
    center_wavelength: float
    width: float
    order: int = 6
    width_convention: str = "sigma"

    def __post_init__(self) -> None:
        object.__setattr__(self, "shape", Shape(self.shape))
        if self.center_wavelength <= 0.0:
            raise ValueError(f"center wavelength must be > 0, got {self.center_wavelength!r}")
        if self.shape is Shape.MONOCHROMATIC:
            if self.width != 0.0:
                raise ValueError("monochromatic profile must have width = 0")
        elif self.width <= 0.0:
            raise ValueError(f"width must be > 0 for shape {self.shape.value}, got {self.width!r}")
        if self.shape is Shape.SUPERGAUSSIAN and (self.order < 2 or self.order % 2 != 0):
            raise ValueError(f"supergaussian order must be an even integer >= 2, got {self.order!r}")
        if self.width_convention not in _WIDTH_CONVENTIONS:
            raise ValueError(f"width_convention must be one of {_WIDTH_CONVENTIONS}, got {self.width_convention!r}")

    @property
    def is_monochromatic(self) -> bool:
        return self.shape is Shape.MONOCHROMATIC

    @property
    def sigma_lambda(self) -> float:
        """Equal-variance standard deviation in wavelength (meters)."""
        if self.is_monochromatic:
            return 0.0
        if self.width_convention == "sigma":
            return self.width
        # fwhm -> sigma, per shape
        if self.shape is Shape.GAUSSIAN:
            return self.width / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        if self.shape is Shape.RECTANGULAR:
            return self.width / math.sqrt(12.0)
        w = self.width / (2.0 * math.log(2.0) ** (1.0 / self.order))
        return w * _supergaussian_sigma_factor(self.order)


def lambda_p_convert(value: float) -> float:
    """Convert wavelength to angular wavenumber or back: p = 2*pi/lambda.

    The map x -> 2*pi/x is its own inverse, so a single function serves both
    directions; the round trip is the identity to within rounding.
    """
    if value <= 0.0:
        raise ValueError(f"conversion requires a positive value, got {value!r}")
    return 2.0 * math.pi / value


wavelength_to_momentum = lambda_p_convert
momentum_to_wavelength = lambda_p_convert


def effective_sigma_p(profile: SpectralProfile) -> float:
    """First-order momentum-space width (2*pi/lambda0^2) * sigma_lambda, rad/m."""
    return 2.0 * math.pi * profile.sigma_lambda / profile.center_wavelength**2


def _simpson_weights(n_points: int, dx: float) -> np.ndarray:
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError(f"Simpson rule needs an odd point count >= 3, got {n_points}")
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (dx / 3.0)


def _density_offsets(profile: SpectralProfile, x: np.ndarray) -> np.ndarray:
    """Unnormalized momentum density at offsets x from the center p0."""
    sigma_p = effective_sigma_p(profile)
    if profile.shape is Shape.GAUSSIAN:
        return np.exp(-0.5 * (x / sigma_p) ** 2)
    if profile.shape is Shape.SUPERGAUSSIAN:
        w = sigma_p / _supergaussian_sigma_factor(profile.order)
        return np.exp(-np.abs(x / w) ** profile.order)
    if profile.shape is Shape.RECTANGULAR:
        half = 0.5 * math.sqrt(12.0) * sigma_p
        return np.where(np.abs(x) <= half, 1.0, 0.0)
    raise ValueError(f"no grid density for shape {profile.shape.value}")


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform momentum grid with Simpson weights and a density sampled on it."""

    points: np.ndarray   # rad/m, strictly increasing, odd length
    weights: np.ndarray  # composite-Simpson weights (include dx/3)
    density: np.ndarray  # nonnegative
    center: float        # p0, rad/m

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        density = np.asarray(self.density, dtype=float)
        if points.ndim != 1 or points.size < 3 or points.size % 2 == 0:
            raise ValueError("grid needs an odd number of points >= 3")
        if not (points.size == weights.size == density.size):
            raise ValueError("points, weights and density must have equal length")
        if np.any(np.diff(points) <= 0.0):
            raise ValueError("grid points must be strictly increasing")
        if np.any(weights <= 0.0):
            raise ValueError("quadrature weights must be positive")
        if np.any(density < 0.0) or not np.all(np.isfinite(density)):
            raise ValueError("density values must be finite and >= 0")
        for arr, name in ((points, "points"), (weights, "weights"), (density, "density")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def step(self) -> float:
        return float(self.points[1] - self.points[0])

    def integral(self, values: Optional[np.ndarray] = None) -> float:
        """Simpson integral of ``values`` (the stored density by default)."""
        v = self.density if values is None else values
        return float(np.dot(self.weights, v))

    def mean(self, values: Optional[np.ndarray] = None) -> float:
        """Density-weighted mean momentum, computed in centered coordinates."""
        v = self.density if values is None else values
        wv = self.weights * v
        return self.center + float(np.dot(wv, self.points - self.center) / np.sum(wv))

    def variance(self, values: Optional[np.ndarray] = None) -> float:
        v = self.density if values is None else values
        wv = self.weights * v
        total = np.sum(wv)
        x = self.points - self.center
        m1 = float(np.dot(wv, x) / total)
        return float(np.dot(wv, (x - m1) ** 2) / total)

    def with_density(self, density: np.ndarray) -> "MomentumGrid":
        return replace(self, density=density)

    def half_resolution(self) -> "MomentumGrid":
        """Stride-2 subgrid (valid Simpson grid when the point count is 2^m + 1)."""
        pts = self.points[::2]
        return MomentumGrid(
            points=pts,
            weights=_simpson_weights(pts.size, 2.0 * self.step),
            density=self.density[::2],
            center=self.center,
        )


def build_grid(
    profile: SpectralProfile,
    settings: Optional[MwiSettings] = None,
    *,
    span_sigmas: float = 8.0,
    min_points: int = MIN_GRID_POINTS,
    samples_per_period: int = 32,
    max_points: int = MAX_GRID_POINTS,
) -> MomentumGrid:
    """Build a uniform momentum grid around p0 = 2*pi/lambda0.

    The grid spans +- ``span_sigmas`` effective widths.  The point count is
    the smallest 2^m + 1 that samples the postselection modulation (momentum
    period 2*pi/(N*k + gamma)) at least ``samples_per_period`` times, with a
    floor of ``min_points``.  The density is normalized to unit integral
    under the grid's own Simpson rule.

    Raises
    ------
    ValueError
        For monochromatic profiles (no momentum grid; use the closed-form
        intensity path instead).
    """
    if profile.is_monochromatic:
        raise ValueError("monochromatic profile has no momentum grid; use the intensity path")
    p0 = lambda_p_convert(profile.center_wavelength)
    sigma_p = effective_sigma_p(profile)
    span = span_sigmas * sigma_p

    n_intervals = max(min_points - 1, 4)
    if settings is not None and settings.phase_length != 0.0:
        max_step = 2.0 * math.pi / (samples_per_period * abs(settings.phase_length))
        needed = math.ceil(2.0 * span / max_step)
        while n_intervals < needed:
            n_intervals *= 2
    # power-of-two interval count so stride-2 subsampling stays a Simpson grid
    n_intervals = 2 ** math.ceil(math.log2(n_intervals))
    if n_intervals + 1 > max_points:
        raise NumericalError(
            f"grid would need {n_intervals + 1} points (> {max_points}); "
            "modulation period too short for this span"
        )

    x = np.linspace(-span, span, n_intervals + 1)
    density = _density_offsets(profile, x)
    weights = _simpson_weights(x.size, float(x[1] - x[0]))
    total = float(np.dot(weights, density))
    if not (total > 0.0 and math.isfinite(total)):
        raise NumericalError("density integral is not positive and finite")
    return MomentumGrid(points=p0 + x, weights=weights, density=density / total, center=p0)
