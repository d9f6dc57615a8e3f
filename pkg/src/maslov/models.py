"""System catalogue, physical parameters and shared numeric defaults.

Natural units (m = hbar = 1) are the defaults everywhere; hbar stays
explicit in every formula so other unit systems work unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .errors import UnsupportedModelError

TWO_PI = 2.0 * math.pi

#: default classification tolerance on |sin(omega*T)|
CAUSTIC_TOL = 1e-9


@dataclass(frozen=True)
class Free:
    """Force-free particle on the line."""

    m: float = 1.0
    hbar: float = 1.0


@dataclass(frozen=True)
class Oscillator:
    """Harmonic oscillator, L = (m/2)(v^2 - omega^2 x^2)."""

    m: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0


@dataclass(frozen=True)
class ForcedOscillator:
    """Oscillator driven by a constant force f, L = (m/2)(v^2 - omega^2 x^2) + f x.

    The drive shifts the equilibrium to x_star = f / (m omega^2).
    """

    m: float = 1.0
    omega: float = 1.0
    f: float = 0.0
    hbar: float = 1.0

    @property
    def x_star(self) -> float:
        return self.f / (self.m * self.omega**2)


@dataclass(frozen=True)
class MagneticPlane:
    """Charged particle in a uniform perpendicular magnetic field.

    omega = eB/2m is half the cyclotron rate: orbits are circles
    traversed with angular speed 2*omega, so every bundle of paths
    leaving a common point refocuses there after each interval
    pi/omega (one full cyclotron turn).
    """

    m: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0


@dataclass(frozen=True)
class Potential1D:
    """Particle in a smooth one-dimensional potential.

    V must accept float or ndarray arguments.  First and second
    derivatives are taken from the optional callables when given and
    by centered differences (step 1e-5 * max(1, |x|)) otherwise.
    """

    m: float
    V: Callable
    dV: Optional[Callable] = None
    d2V: Optional[Callable] = None
    hbar: float = 1.0

    def force(self, x):
        if self.dV is not None:
            return -self.dV(x)
        if np.ndim(x) == 0:  # scalar fast path for the step-by-step integrators
            x = float(x)
            h = 1e-5 * max(1.0, abs(x))
        else:
            h = 1e-5 * np.maximum(1.0, np.abs(x))
        return -(self.V(x + h) - self.V(x - h)) / (2.0 * h)

    def curvature(self, x):
        """d^2V/dx^2 at x."""
        if self.d2V is not None:
            return self.d2V(x)
        if np.ndim(x) == 0:
            x = float(x)
            h = 1e-5 * max(1.0, abs(x))
        else:
            h = 1e-5 * np.maximum(1.0, np.abs(x))
        return (self.V(x + h) - 2.0 * self.V(x) + self.V(x - h)) / (h * h)


SystemModel = Union[Free, Oscillator, ForcedOscillator, MagneticPlane, Potential1D]


@dataclass(frozen=True)
class NumericConfig:
    """Shared numeric knobs with desk-scale defaults."""

    caustic_tol: float = CAUSTIC_TOL
    grid_points: int = 2048
    mode_count: int = 10000
    hermite_terms: int = 400
    quad_domain_halfwidth: float = 12.0
    quad_points: int = 4096
    damping_eta: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.caustic_tol <= 1e-3:
            raise ValueError("caustic_tol must lie in (0, 1e-3]")
        if self.grid_points < 64:
            raise ValueError("grid_points must be >= 64")
        for name in ("mode_count", "hermite_terms", "quad_points"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.damping_eta < 0.0:
            raise ValueError("damping_eta must be >= 0")


DEFAULTS = NumericConfig()


def frequency(model: SystemModel) -> Optional[float]:
    """The model's oscillation frequency, or None when it has none."""
    return getattr(model, "omega", None)


def dimension(model: SystemModel) -> int:
    return 2 if isinstance(model, MagneticPlane) else 1


def period(model: SystemModel) -> float:
    """Full period 2*pi/omega of the model's frequency."""
    omega = frequency(model)
    if omega is None:
        raise UnsupportedModelError(f"{type(model).__name__} has no frequency")
    return TWO_PI / omega


class CausticIndex(NamedTuple):
    """Crossing count N plus whether T itself sits on a focal time."""

    caustic: bool
    N: int


def caustic_index(model: SystemModel, T: float, tol: float = CAUSTIC_TOL) -> CausticIndex:
    """Count focal times passed up to T and classify T itself.

    Focal times sit at omega*T = k*pi; for MagneticPlane that is one
    full cyclotron period per k (the planar double degeneracy is
    accounted for by the callers).  Models without a frequency never
    focus: they report regular with N = 0.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    omega = frequency(model)
    if omega is None or omega == 0.0:
        return CausticIndex(False, 0)
    x = omega * T
    if abs(math.sin(x)) <= tol:
        return CausticIndex(True, round(x / math.pi))
    return CausticIndex(False, math.floor(x / math.pi))
