"""Dual-pointer weak-value-amplification lab.

Simulates the postselected collapse of a spectral meter state under N weak
polarization-momentum couplings and derives everything measured from it:
momentum- and intensity-pointer shifts, shift rates and precisions,
signal-to-noise, and Leggett-Garg K31 values.  The ``wva-lab`` CLI drives
named scenario sweeps that emit deterministic CSV tables.
"""
from ._version import __version__
from ._kernels import BACKEND as kernel_backend
from .constants import CONSTANTS, SPEED_OF_LIGHT, PhysicalConstants
from .errors import ConfigError, NumericalError
from .lgi import (
    LgiPoint,
    k31,
    negativity_boundary_scan,
    quantum_region_boundary,
    weak_value_from_shift,
)
from .meter import (
    CollapseResult,
    IntensityResult,
    collapse_moments_on_grid,
    collapsed_density,
    intensity_after_postselection,
    intensity_shift_approx,
    oracle_joint_state,
    pointer_shift_p_approx,
    pointer_shift_p_gaussian,
    postselection_probability_gaussian,
)
from .metrology import (
    InstrumentModel,
    PrecisionReport,
    ShiftRateEstimate,
    TiltGeometry,
    k_from_tau,
    precision,
    shift_rate,
    snr_db,
    tau_from_tilt,
)
from .polarization import (
    MwiSettings,
    PauliObservable,
    PolarizationState,
    WeakValue,
    coupling_observable,
    postselection_state,
    preselection_state,
    weak_value,
)
from .spectra import (
    MomentumGrid,
    Shape,
    SpectralProfile,
    build_grid,
    effective_sigma_p,
    lambda_p_convert,
    momentum_to_wavelength,
    wavelength_to_momentum,
)

__all__ = [
    "__version__",
    "kernel_backend",
    "CONSTANTS",
    "SPEED_OF_LIGHT",
    "PhysicalConstants",
    "ConfigError",
    "NumericalError",
    "LgiPoint",
    "k31",
    "negativity_boundary_scan",
    "quantum_region_boundary",
    "weak_value_from_shift",
    "CollapseResult",
    "IntensityResult",
    "collapse_moments_on_grid",
    "collapsed_density",
    "intensity_after_postselection",
    "intensity_shift_approx",
    "oracle_joint_state",
    "pointer_shift_p_approx",
    "pointer_shift_p_gaussian",
    "postselection_probability_gaussian",
    "InstrumentModel",
    "PrecisionReport",
    "ShiftRateEstimate",
    "TiltGeometry",
    "k_from_tau",
    "precision",
    "shift_rate",
    "snr_db",
    "tau_from_tilt",
    "MwiSettings",
    "PauliObservable",
    "PolarizationState",
    "WeakValue",
    "coupling_observable",
    "postselection_state",
    "preselection_state",
    "weak_value",
    "MomentumGrid",
    "Shape",
    "SpectralProfile",
    "build_grid",
    "effective_sigma_p",
    "lambda_p_convert",
    "momentum_to_wavelength",
    "wavelength_to_momentum",
]
