"""Leggett-Garg K31 values, the quantum-effect (negativity) region, and
weak-value extraction from measured intensity shifts.

K31 = 2 P (1 - Im of the N-pass weak value) goes negative exactly when the
weak value is anomalous (Im > 1); the small-coupling boundary of the
negativity region in the postselection angle is arctan(N).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .meter import postselection_probability_gaussian
from .polarization import MwiSettings


@dataclass(frozen=True)
class LgiPoint:
    rho: float
    n_interactions: int
    k31: float
    im_weak_value: float


def k31(
    n_interactions: int,
    rho: float,
    *,
    sigma_p: Optional[float] = None,
    p0: Optional[float] = None,
    k: Optional[float] = None,
) -> LgiPoint:
    """K31 = 2 P (1 - N cot rho) at the given postselection angle.

    By default P is the small-coupling postselection probability sin^2(rho).
    Passing all of (sigma_p, p0, k) switches to the exact Gaussian
    probability for that coupling strength.

    Raises
    ------
    ValueError
        rho outside (0, pi/2) (the weak value is singular at rho = 0), or a
        partial set of exact-mode arguments.
    """
    if n_interactions < 1:
        raise ValueError(f"n_interactions must be >= 1, got {n_interactions!r}")
    if not (0.0 < rho < math.pi / 2):
        raise ValueError(f"rho must lie in (0, pi/2), got {rho!r}")
    exact_args = (sigma_p, p0, k)
    if any(a is not None for a in exact_args) and not all(a is not None for a in exact_args):
        raise ValueError("exact mode needs all of sigma_p, p0 and k")

    im = n_interactions / math.tan(rho)
    if sigma_p is None:
        prob = math.sin(rho) ** 2
    else:
        prob = postselection_probability_gaussian(
            sigma_p, p0, MwiSettings(n_interactions=n_interactions, k=k, gamma=0.0, rho=rho)
        )
    return LgiPoint(rho=rho, n_interactions=n_interactions, k31=2.0 * prob * (1.0 - im), im_weak_value=im)


def quantum_region_boundary(n_interactions: int) -> float:
    """Largest rho with negative small-coupling K31: arctan(N), radians.

    Grows with N, so the quantum-effect region expands with more passes.
    """
    if n_interactions < 1:
        raise ValueError(f"n_interactions must be >= 1, got {n_interactions!r}")
    return math.atan(float(n_interactions))


def negativity_boundary_scan(n_interactions: int, rho_max: float = 1.5, step: float = 1e-3) -> float:
    """Boundary of the K31 < 0 region located by dense scanning.

    Returns the largest scanned rho with K31 < 0; the scan step bounds the
    deviation from arctan(N).
    """
    if step <= 0.0 or rho_max <= step:
        raise ValueError("need step > 0 and rho_max > step")
    boundary = 0.0
    n_steps = int(rho_max / step)
    for i in range(1, n_steps + 1):
        rho = i * step
        if rho >= math.pi / 2:
            break
        if k31(n_interactions, rho).k31 < 0.0:
            boundary = rho
    return boundary


def weak_value_from_shift(
    delta_ell: float, k: float, p0: float, sigma_p: float, n_interactions: int
) -> float:
    """Invert the linear-regime intensity shift to the Im weak value.

    Returns delta_ell / (exp(-(sigma_p N k)^2) p0 k); on shifts produced by
    the forward linear model this recovers N cot(rho) exactly.
    """
    if k == 0.0:
        raise ValueError("k = 0: weak value from an intensity shift is undefined")
    damp = math.exp(-((sigma_p * n_interactions * k) ** 2))
    return delta_ell / (damp * p0 * k)
