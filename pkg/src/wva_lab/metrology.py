"""Instrument models and derived metrology.

Maps a wave-plate tilt to the time difference it introduces, differentiates
pointer signals against the interaction strength, and turns instrument
resolutions into precisions delta_k = delta_m / |dS/dk| and
delta_tau = delta_k / c.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .constants import SPEED_OF_LIGHT
from .errors import NumericalError


@dataclass(frozen=True)
class TiltGeometry:
    """Tilted wave plate: tilt angle, refractive index, working wavelength."""

    theta: float                    # rad
    refractive_index: float = 1.54
    wavelength: float = 1550e-9     # m

    def __post_init__(self) -> None:
        if not abs(self.theta) < math.pi / 2:
            raise ValueError(f"|theta| must be < pi/2, got {self.theta!r}")
        if self.refractive_index <= 1.0:
            raise ValueError(f"refractive index must be > 1, got {self.refractive_index!r}")
        if self.wavelength <= 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength!r}")


@dataclass(frozen=True)
class InstrumentModel:
    """Gain + noise-floor abstraction of the detection chain."""

    spectrometer_resolution: float = 0.04e-12  # m
    apd_gain: float = 3.14e6                   # V/W
    noise_floor: float = 0.5e-3                # V
    intensity_uncertainty: float = 0.045e-3    # V

    def __post_init__(self) -> None:
        for name in ("spectrometer_resolution", "apd_gain", "noise_floor", "intensity_uncertainty"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class ShiftRateEstimate:
    """Finite-difference slope with an error estimate from step halving."""

    value: float
    error: float


@dataclass(frozen=True)
class PrecisionReport:
    """Resolution divided by shift rate, in both k (meters) and tau (seconds)."""

    shift_rate: float
    delta_k: float
    delta_tau: float
    pointer: str = "P"

    def __post_init__(self) -> None:
        if self.shift_rate == 0.0:
            raise ValueError("shift rate must be nonzero when precisions are populated")
        if abs(self.delta_k - SPEED_OF_LIGHT * self.delta_tau) > 1e-12 * abs(self.delta_k):
            raise ValueError("delta_k and delta_tau are inconsistent (delta_k = c delta_tau)")


def tau_from_tilt(geom: TiltGeometry) -> float:
    """Time difference from a wave-plate tilt, seconds.

    tau = (lambda / 2c) * (1/sqrt(1 - sin^2(theta)/n^2) - 1); even in theta,
    zero at zero tilt, strictly increasing on (0, pi/2).
    """
    s2 = math.sin(geom.theta) ** 2 / geom.refractive_index**2
    return geom.wavelength / (2.0 * SPEED_OF_LIGHT) * (1.0 / math.sqrt(1.0 - s2) - 1.0)


def k_from_tau(tau: float) -> float:
    """Interaction strength k = c * tau, meters."""
    return SPEED_OF_LIGHT * tau


DEFAULT_RATE_K0 = k_from_tau(0.05e-18)
DEFAULT_RATE_HALF_WINDOW = k_from_tau(0.02e-18)


def shift_rate(
    signal_fn: Callable[[float], float],
    k0: float = DEFAULT_RATE_K0,
    half_window: float = DEFAULT_RATE_HALF_WINDOW,
) -> ShiftRateEstimate:
    """Central-difference slope of ``signal_fn`` at ``k0``, Richardson refined once.

    Evaluates [S(k0+h) - S(k0-h)]/(2h) at h and h/2 and extrapolates; the
    deviation between the two estimates is returned as the error.  Already
    exact (to rounding) for quadratics at the first step.
    """
    if half_window <= 0.0:
        raise ValueError(f"half_window must be > 0, got {half_window!r}")

    def central(h: float) -> float:
        hi, lo = signal_fn(k0 + h), signal_fn(k0 - h)
        if not (math.isfinite(hi) and math.isfinite(lo)):
            raise NumericalError(f"signal not finite near k0 = {k0!r}")
        return (hi - lo) / (2.0 * h)

    coarse = central(half_window)
    fine = central(0.5 * half_window)
    return ShiftRateEstimate(value=(4.0 * fine - coarse) / 3.0, error=abs(fine - coarse))


def precision(instrument_resolution: float, rate: float, pointer: str = "P") -> PrecisionReport:
    """delta_k = resolution / |rate| and delta_tau = delta_k / c."""
    if instrument_resolution <= 0.0:
        raise ValueError(f"instrument resolution must be > 0, got {instrument_resolution!r}")
    if rate == 0.0:
        raise ValueError("zero shift rate: precision undefined")
    delta_k = instrument_resolution / abs(rate)
    return PrecisionReport(
        shift_rate=rate, delta_k=delta_k, delta_tau=delta_k / SPEED_OF_LIGHT, pointer=pointer
    )


def snr_db(signal: float, noise: float) -> float:
    """Signal-to-noise ratio 10 log10(signal/noise), decibels."""
    if signal <= 0.0 or noise <= 0.0:
        raise ValueError(f"signal and noise must be > 0, got {signal!r}, {noise!r}")
    return 10.0 * math.log10(signal / noise)
