"""Two-level polarization algebra: pre/postselected states and weak values.

The system lives in the {|H>, |V>} basis.  Preselection is the balanced
superposition; postselection projects onto a state parameterized by an angle
rho that controls how close to orthogonal the projection is (squared overlap
with the preselection equals sin^2(rho)).  The weak value of the N-pass
coupling observable is purely imaginary, i*N*cot(rho), and grows linearly
with the number of interactions.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

_NORM_TOL = 1e-12
_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class PolarizationState:
    """Normalized two-component polarization amplitude in the (H, V) basis."""

    amp_h: complex
    amp_v: complex

    def __post_init__(self) -> None:
        norm = abs(self.amp_h) ** 2 + abs(self.amp_v) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: |H|^2 + |V|^2 = {norm!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=np.complex128)

    def overlap(self, other: "PolarizationState") -> complex:
        """Inner product <self|other>."""
        return complex(
            np.conj(self.amp_h) * other.amp_h + np.conj(self.amp_v) * other.amp_v
        )

    def projection_probability(self, other: "PolarizationState") -> float:
        """Squared magnitude of the overlap with ``other``."""
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True)
class PauliObservable:
    """Hermitian 2x2 observable; the weak coupling uses diag(+1, -1)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"observable must be 2x2, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERMITIAN_TOL:
            raise ValueError("observable must be Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def coupling_observable() -> PauliObservable:
    """The observable entering the weak coupling: +1 on |H>, -1 on |V>."""
    return PauliObservable(np.diag([1.0 + 0j, -1.0 + 0j]))


@dataclass(frozen=True)
class MwiSettings:
    """Interaction-chain settings.

    Parameters
    ----------
    n_interactions : int
        Number of weak-coupling passes (>= 1).
    k : float
        Single-pass interaction strength in meters (k = c*tau); may be signed.
    gamma : float
        Residual interferometric path imbalance in meters; contributes a
        phase gamma*p and biases the operating point.  Nonnegative.
    rho : float
        Postselection angle in radians, inside (0, pi/2).
    """

    n_interactions: int
    k: float
    gamma: float = 0.0
    rho: float = 0.002

    def __post_init__(self) -> None:
        if int(self.n_interactions) != self.n_interactions or self.n_interactions < 1:
            raise ValueError(f"n_interactions must be an integer >= 1, got {self.n_interactions!r}")
        if not (0.0 < self.rho < math.pi / 2):
            raise ValueError(f"rho must lie in (0, pi/2), got {self.rho!r}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if not math.isfinite(self.k):
            raise ValueError(f"k must be finite, got {self.k!r}")

    @property
    def phase_length(self) -> float:
        """Total phase length N*k + gamma in meters (multiplies p in the phase)."""
        return self.n_interactions * self.k + self.gamma


@dataclass(frozen=True)
class WeakValue:
    """Weak value of the coupled observable (purely imaginary here)."""

    value: complex

    @property
    def imag(self) -> float:
        return self.value.imag


def preselection_state() -> PolarizationState:
    """Balanced input state (|H> + |V>)/sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return PolarizationState(complex(r), complex(r))


def postselection_state(rho: float) -> PolarizationState:
    """Projection state (e^{-i rho}|H> - e^{+i rho}|V>)/sqrt(2).

    rho = 0 is the exactly orthogonal limit and is permitted here; operations
    that divide by tan(rho) reject it separately.
    """
    if not (0.0 <= rho < math.pi / 2):
        raise ValueError(f"rho must lie in [0, pi/2), got {rho!r}")
    r = 1.0 / math.sqrt(2.0)
    return PolarizationState(r * cmath.exp(-1j * rho), -r * cmath.exp(1j * rho))


def weak_value(n_interactions: int, rho: float) -> WeakValue:
    """Weak value i*N*cot(rho) of the N-pass coupling observable.

    Equals N times the single-pass weak value exactly.

    Raises
    ------
    ValueError
        If rho is outside (0, pi/2); the postselection is singular at rho = 0.
    """
    if n_interactions < 1:
        raise ValueError(f"n_interactions must be >= 1, got {n_interactions!r}")
    if not (0.0 < rho < math.pi / 2):
        raise ValueError(f"singular postselection: rho must lie in (0, pi/2), got {rho!r}")
    # written as N * (single-pass value) so linearity in N is bit-exact
    return WeakValue(n_interactions * (1j / math.tan(rho)))
