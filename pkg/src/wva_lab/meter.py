"""Postselection collapse of the meter state and both pointer shifts.

The collapsed (unnormalized) momentum density after N weak passes with a
path-imbalance phase is

    D(p) = Omega(p)/2 * [1 - cos(p*(N*k + gamma) + 2*rho)]
         = Omega(p) * sin^2((p*(N*k + gamma) + 2*rho)/2).

The momentum (P) pointer is the density-weighted mean shift of D, reported
also as a wavelength shift; the intensity (I) pointer is the postselected
total signal.  Alongside the grid path this module provides exact closed
forms for Gaussian densities, the linear-regime approximations, and a
brute-force joint-state oracle for verification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from . import _kernels
from .errors import NumericalError
from .polarization import MwiSettings
from .spectra import MomentumGrid, SpectralProfile, build_grid, effective_sigma_p

_RELATIVE_SHIFT_RECON_TOL = 1e-12


@dataclass(frozen=True)
class CollapseResult:
    """Collapsed density D(p) on its grid, with the derived pointer readouts."""

    density: MomentumGrid
    postselection_probability: float
    delta_p: float       # rad/m
    delta_lambda: float  # meters; sign convention delta_lambda = -(lambda0^2/2pi) delta_p

    def __post_init__(self) -> None:
        if not (0.0 <= self.postselection_probability <= 1.0):
            raise ValueError(
                f"postselection probability outside [0, 1]: {self.postselection_probability!r}"
            )


@dataclass(frozen=True)
class IntensityResult:
    """Postselected intensity and its relative shift against the k = 0 baseline."""

    intensity: float
    baseline_intensity: float
    relative_shift: float

    def __post_init__(self) -> None:
        if self.intensity < 0.0 or self.baseline_intensity <= 0.0:
            raise ValueError("intensities must be nonnegative (baseline positive)")
        recon = (self.intensity - self.baseline_intensity) / self.baseline_intensity
        if abs(recon - self.relative_shift) > _RELATIVE_SHIFT_RECON_TOL * max(1.0, abs(recon)):
            raise ValueError("relative_shift does not reconstruct from the stored intensities")


def _moments(grid: MomentumGrid, collapsed) -> tuple[float, float]:
    wd = grid.weights * collapsed
    prob = float(wd.sum())
    mom1 = float((wd * (grid.points - grid.center)).sum())
    return prob, mom1


def collapse_moments_on_grid(grid: MomentumGrid, settings: MwiSettings) -> tuple[float, float]:
    """Fast sweep path: (postselection probability, delta_p) on a prebuilt grid.

    Runs the fused collapse-and-integrate kernel without materializing D(p);
    used by the scenario sweeps where only the pointer readouts are needed.
    """
    prob_raw, mom1 = _kernels.collapse_moments(
        grid.density,
        grid.points,
        grid.center,
        settings.phase_length,
        2.0 * settings.rho,
        grid.weights,
    )
    if prob_raw <= 0.0 or not math.isfinite(prob_raw):
        raise NumericalError("collapsed density integrated to a non-positive value")
    return prob_raw / grid.integral(), mom1 / prob_raw


def collapsed_density(
    profile: SpectralProfile,
    settings: MwiSettings,
    grid: Optional[MomentumGrid] = None,
    *,
    refine_tolerance: float = 1e-9,
    max_refinements: int = 3,
) -> CollapseResult:
    """Collapse the meter density under postselection and integrate its moments.

    Parameters
    ----------
    profile, settings
        Source spectrum and interaction-chain settings.
    grid
        Optional pre-built grid (reused across a sweep, or shared with the
        oracle).  When omitted, a grid is built for these settings and a
        stride-2 Simpson comparison guards the quadrature: full- and
        half-resolution estimates must agree to ``refine_tolerance``
        (relative for the probability, relative to sigma_p for the mean
        shift) or the grid is rebuilt at double resolution.

    Returns
    -------
    CollapseResult
        D(p) on the grid, postselection probability (integral ratio against
        the initial density), the mean momentum shift delta_p, and
        delta_lambda = -(lambda0^2/2pi) * delta_p.
    """
    if profile.is_monochromatic:
        raise ValueError(
            "monochromatic profile: the momentum pointer is undefined; "
            "use intensity_after_postselection"
        )
    sigma_p = effective_sigma_p(profile)
    phase_length = settings.phase_length
    two_rho = 2.0 * settings.rho

    own_grid = grid is None
    if own_grid:
        grid = build_grid(profile, settings)

    refinements = 0
    while True:
        collapsed = _kernels.collapse_density(grid.density, grid.points, phase_length, two_rho)
        prob_full, mom_full = _moments(grid, collapsed)
        if not own_grid:
            break
        half = grid.half_resolution()
        half_collapsed = _kernels.collapse_density(half.density, half.points, phase_length, two_rho)
        prob_half, mom_half = _moments(half, half_collapsed)
        prob_ok = abs(prob_full - prob_half) <= refine_tolerance * abs(prob_full)
        shift_ok = abs(mom_full / prob_full - mom_half / prob_half) <= refine_tolerance * sigma_p
        if prob_ok and shift_ok:
            break
        if refinements >= max_refinements:
            raise NumericalError("collapse quadrature did not converge under grid refinement")
        refinements += 1
        grid = build_grid(profile, settings, min_points=2 * (grid.points.size - 1) + 1)

    omega_total = grid.integral()
    probability = prob_full / omega_total
    delta_p = mom_full / prob_full
    delta_lambda = -(profile.center_wavelength**2 / (2.0 * math.pi)) * delta_p
    return CollapseResult(
        density=grid.with_density(collapsed),
        postselection_probability=probability,
        delta_p=delta_p,
        delta_lambda=delta_lambda,
    )


def postselection_probability_gaussian(sigma_p: float, p0: float, settings: MwiSettings) -> float:
    """Postselection probability for a Gaussian momentum density, exact.

    P = 1/2 [1 - exp(-(sigma_p L)^2 / 2) cos(L p0 + 2 rho)] with
    L = N*k + gamma (the path imbalance enters by the substitution
    N*k -> N*k + gamma).  sigma_p refers to the standard deviation of the
    momentum density; sigma_p = 0 gives the monochromatic limit.
    """
    if sigma_p < 0.0:
        raise ValueError(f"sigma_p must be >= 0, got {sigma_p!r}")
    L = settings.phase_length
    theta = L * p0 + 2.0 * settings.rho
    # 1/2(1 - d cos) = sin^2(theta/2) + (1 - d)/2 cos(theta), both terms stable
    half_one_minus_damp = -0.5 * math.expm1(-0.5 * (sigma_p * L) ** 2)
    return math.sin(0.5 * theta) ** 2 + half_one_minus_damp * math.cos(theta)


def pointer_shift_p_gaussian(sigma_p: float, p0: float, settings: MwiSettings) -> float:
    """Mean momentum shift for a Gaussian density (exact closed form), rad/m.

    delta_p = sigma_p^2 L exp(-(sigma_p L)^2/2) sin(L p0 + 2 rho) / (2 P).
    """
    if sigma_p <= 0.0:
        raise ValueError("no momentum pointer for a monochromatic source (sigma_p = 0)")
    L = settings.phase_length
    theta = L * p0 + 2.0 * settings.rho
    prob = postselection_probability_gaussian(sigma_p, p0, settings)
    return (
        sigma_p**2 * L * math.exp(-0.5 * (sigma_p * L) ** 2) * math.sin(theta) / (2.0 * prob)
    )


def pointer_shift_p_approx(sigma_p: float, settings: MwiSettings) -> float:
    """Linear-regime momentum shift k sigma_p^2 N cot(rho), rad/m.

    Valid for k*p0/2 << rho << 1; exactly proportional to sigma_p^2.
    """
    if sigma_p <= 0.0:
        raise ValueError("no momentum pointer for a monochromatic source (sigma_p = 0)")
    return settings.k * sigma_p**2 * settings.n_interactions / math.tan(settings.rho)


def intensity_after_postselection(
    i_init: float, sigma_p: float, p0: float, settings: MwiSettings
) -> IntensityResult:
    """Postselected intensity i_init * P and its relative shift.

    The baseline is the same chain at k = 0 (same gamma and rho): the
    reference is zero interaction strength, not zero total phase.
    """
    if i_init <= 0.0:
        raise ValueError(f"initial intensity must be > 0, got {i_init!r}")
    prob = postselection_probability_gaussian(sigma_p, p0, settings)
    prob0 = postselection_probability_gaussian(sigma_p, p0, replace(settings, k=0.0))
    intensity = i_init * prob
    baseline = i_init * prob0
    return IntensityResult(
        intensity=intensity,
        baseline_intensity=baseline,
        relative_shift=(intensity - baseline) / baseline,
    )


def intensity_shift_approx(sigma_p: float, p0: float, settings: MwiSettings) -> float:
    """Linear-regime intensity shift exp(-(sigma_p N k)^2) p0 k N cot(rho).

    Reference small-signal form: grows linearly with N and decreases
    strictly with sigma_p for N*k != 0.
    """
    nk = settings.n_interactions * settings.k
    return (
        math.exp(-((sigma_p * nk) ** 2))
        * p0
        * settings.k
        * settings.n_interactions
        / math.tan(settings.rho)
    )


def oracle_joint_state(
    profile: SpectralProfile,
    settings: MwiSettings,
    grid: MomentumGrid,
    *,
    sequential: bool = False,
) -> CollapseResult:
    """Brute-force oracle: literal joint-state evolution and projection.

    Builds the system-meter state amplitude by amplitude (complex per-pass
    phases on |H> and |V> against sqrt of the density), projects onto the
    postselection state, and squares -- no trigonometric shortcut.  With
    ``sequential=True`` the N passes are applied one at a time instead of as
    a single N-fold phase.  Used to validate ``collapsed_density``.
    """
    if profile.is_monochromatic:
        raise ValueError("monochromatic profile: oracle needs a momentum grid")
    collapsed = _kernels.oracle_density(
        grid.density,
        grid.points,
        settings.k,
        settings.n_interactions,
        settings.gamma,
        settings.rho,
        sequential,
    )
    prob, mom1 = _moments(grid, collapsed)
    delta_p = mom1 / prob
    return CollapseResult(
        density=grid.with_density(collapsed),
        postselection_probability=prob / grid.integral(),
        delta_p=delta_p,
        delta_lambda=-(profile.center_wavelength**2 / (2.0 * math.pi)) * delta_p,
    )
