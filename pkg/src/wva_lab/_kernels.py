"""Hot numeric kernels: postselection collapse, its moments, and the
joint-state oracle.

Two interchangeable implementations: numba ``@njit`` loops (the default when
numba imports) and pure numpy.  Select explicitly with the environment
variable ``WVA_LAB_BACKEND=numba`` or ``WVA_LAB_BACKEND=numpy``.  Both
backends agree to floating-point rounding, and a given backend is
bit-reproducible from run to run; ``benchmarks/bench_kernels.py`` compares
their throughput.
"""
from __future__ import annotations

import math
import os

import numpy as np

_ENV_VAR = "WVA_LAB_BACKEND"


def _collapse_density_np(density, points, phase_length, two_rho):
    """D(p) = Omega(p) * sin^2((p*L + 2 rho)/2); the sin^2 form is the exact
    rewrite of (1 - cos)/2 and avoids cancellation at small arguments."""
    s = np.sin(0.5 * (points * phase_length + two_rho))
    return density * s * s


def _collapse_moments_np(density, points, center, phase_length, two_rho, weights):
    """Fused collapse + Simpson moments: returns (integral D, integral (p-p0) D)."""
    s = np.sin(0.5 * (points * phase_length + two_rho))
    wd = weights * density * s * s
    return float(np.sum(wd)), float(np.sum(wd * (points - center)))


def _oracle_density_np(density, points, k_single, n_interactions, gamma, rho, sequential):
    """Literal joint-state evolution: complex per-pass phases on the H and V
    amplitudes, projection onto the postselection state, squared magnitude."""
    if sequential:
        amp_h = np.exp(0.5j * gamma * points)
        step = np.exp(0.5j * k_single * points)
        for _ in range(n_interactions):
            amp_h = amp_h * step
    else:
        amp_h = np.exp(0.5j * (n_interactions * k_single + gamma) * points)
    amp_v = np.conj(amp_h)
    proj = 0.5 * (np.exp(1j * rho) * amp_h - np.exp(-1j * rho) * amp_v) * np.sqrt(density)
    return (proj * np.conj(proj)).real


_requested = os.environ.get(_ENV_VAR, "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {_requested!r}")

_HAVE_NUMBA = False
if _requested != "numpy":
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise

BACKEND = "numba" if _HAVE_NUMBA else "numpy"

if _HAVE_NUMBA:

    @njit(cache=True)
    def _collapse_density_nb(density, points, phase_length, two_rho):  # pragma: no cover
        out = np.empty_like(density)
        for i in range(points.shape[0]):
            s = math.sin(0.5 * (points[i] * phase_length + two_rho))
            out[i] = density[i] * s * s
        return out

    @njit(cache=True)
    def _collapse_moments_nb(density, points, center, phase_length, two_rho, weights):  # pragma: no cover
        s0 = 0.0
        s1 = 0.0
        for i in range(points.shape[0]):
            s = math.sin(0.5 * (points[i] * phase_length + two_rho))
            wd = weights[i] * density[i] * s * s
            s0 += wd
            s1 += wd * (points[i] - center)
        return s0, s1

    @njit(cache=True)
    def _oracle_density_nb(density, points, k_single, n_interactions, gamma, rho, sequential):  # pragma: no cover
        out = np.empty_like(density)
        pr = np.exp(1j * rho)
        mr = np.exp(-1j * rho)
        for i in range(points.shape[0]):
            p = points[i]
            if sequential:
                amp_h = np.exp(0.5j * gamma * p)
                step = np.exp(0.5j * k_single * p)
                for _ in range(n_interactions):
                    amp_h = amp_h * step
            else:
                amp_h = np.exp(0.5j * (n_interactions * k_single + gamma) * p)
            amp_v = np.conj(amp_h)
            proj = 0.5 * (pr * amp_h - mr * amp_v) * math.sqrt(density[i])
            out[i] = (proj * np.conj(proj)).real
        return out

    collapse_density = _collapse_density_nb
    collapse_moments = _collapse_moments_nb
    oracle_density = _oracle_density_nb
else:
    collapse_density = _collapse_density_np
    collapse_moments = _collapse_moments_np
    oracle_density = _oracle_density_np
