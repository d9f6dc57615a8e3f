"""Propagator evaluation: phase-corrected closed forms and the
endpoint-Hessian (Van Vleck) semiclassical formula.

Conventions fixed here and used everywhere else:

* every factor 1/sqrt(i) is e^{-i pi/4} (the analytic continuation of
  the oscillatory Gaussian integral), never +e^{+3i pi/4};
* the crossing count N enters only through the explicit factor
  e^{-i D N pi/2} and is supplied as an integer, never inferred from a
  square-root branch;
* the action in the exponent is the true principal function, with the
  signed sin/cot of the elapsed phase.

At focal times the kernel degenerates to a delta concentrated on the
(possibly reflected, possibly shifted) image point; that limit is kept
symbolic as CausticDelta and consumers pair it with test functions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import classical, models
from .errors import CausticTimeError, UnsupportedModelError
from .models import CAUSTIC_TOL, Free, ForcedOscillator, MagneticPlane, Oscillator

ROOT_I_INV = cmath.exp(-1j * math.pi / 4.0)  # 1/sqrt(i), fixed branch


@dataclass(frozen=True)
class Regular:
    value: complex


@dataclass(frozen=True)
class CausticDelta:
    """Symbolic delta kernel at a focal time.

    Acts on states as psi(x) -> phase * psi(shift + parity*(x - shift));
    dimension tells how many coordinates are involved.
    """

    N: int
    parity: int
    phase: complex
    dimension: int = 1
    shift: float = 0.0


KernelValue = Union[Regular, CausticDelta]


def as_complex(value: KernelValue) -> complex:
    if isinstance(value, CausticDelta):
        raise CausticTimeError("delta kernel has no pointwise amplitude")
    return value.value


def free_kernel(m: float, hbar: float, x1: float, x2: float, T: float) -> complex:
    """sqrt(m/(2 pi i hbar T)) exp[i m (x2-x1)^2 / (2 hbar T)]."""
    if T <= 0.0:
        raise ValueError("T must be positive")
    amp = math.sqrt(m / (2.0 * math.pi * hbar * T)) * ROOT_I_INV
    return amp * cmath.exp(1j * m * (x2 - x1) ** 2 / (2.0 * hbar * T))


def oscillator_kernel(
    m: float,
    omega: float,
    hbar: float,
    x1: float,
    x2: float,
    T: float,
    tol: float = CAUSTIC_TOL,
) -> KernelValue:
    """Phase-corrected oscillator kernel.

    Away from focal times, with N = floor(omega T / pi),

        K = sqrt(m omega / (2 pi hbar |sin omega T|))
            * e^{-i pi/4} e^{-i pi N/2} * e^{i S / hbar},

    S the closed-form action (signed sin).  At omega T = N pi the
    kernel is e^{-i pi N/2} delta(x1 - (-1)^N x2).
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    x = omega * T
    s = math.sin(x)
    if abs(s) <= tol:
        N = round(x / math.pi)
        return CausticDelta(N, (-1) ** N, cmath.exp(-1j * math.pi * N / 2.0), 1)
    N = math.floor(x / math.pi)
    amp = math.sqrt(m * omega / (2.0 * math.pi * hbar * abs(s)))
    phase = ROOT_I_INV * cmath.exp(-1j * math.pi * N / 2.0)
    S = m * omega / (2.0 * s) * ((x1 * x1 + x2 * x2) * math.cos(x) - 2.0 * x1 * x2)
    return Regular(amp * phase * cmath.exp(1j * S / hbar))


def naive_kernel(
    m: float,
    omega: float,
    hbar: float,
    x1: float,
    x2: float,
    T: float,
    tol: float = CAUSTIC_TOL,
) -> complex:
    """Uncorrected closed form with the principal square-root branch.

    Correct for 0 < omega T < pi only; kept to exhibit the missing
    crossing phases at later times.
    """
    x = omega * T
    s = math.sin(x)
    if abs(s) <= tol:
        raise CausticTimeError("kernel diverges at a focal time")
    pref = np.sqrt(complex(m * omega, 0.0) / (2j * math.pi * hbar * s))
    S = m * omega / (2.0 * s) * ((x1 * x1 + x2 * x2) * math.cos(x) - 2.0 * x1 * x2)
    return complex(pref * cmath.exp(1j * S / hbar))


def forced_kernel(
    m: float,
    omega: float,
    f: float,
    hbar: float,
    x1: float,
    x2: float,
    T: float,
    tol: float = CAUSTIC_TOL,
) -> KernelValue:
    """Constant-force oscillator kernel via the equilibrium shift.

    K_f(x2, T | x1) = e^{i f^2 T / (2 m omega^2 hbar)}
                      K_osc(x2 - x*, T | x1 - x*),  x* = f/(m omega^2).

    Valid at focal times too, where it is the shifted delta.
    """
    xs = f / (m * omega**2)
    drive_phase = cmath.exp(1j * f * f * T / (2.0 * m * omega**2 * hbar))
    base = oscillator_kernel(m, omega, hbar, x1 - xs, x2 - xs, T, tol)
    if isinstance(base, CausticDelta):
        return CausticDelta(base.N, base.parity, drive_phase * base.phase, 1, shift=xs)
    return Regular(drive_phase * base.value)


def magnetic_kernel(
    m: float,
    omega: float,
    hbar: float,
    r1,
    r2,
    T: float,
    tol: float = CAUSTIC_TOL,
) -> KernelValue:
    """Kernel in a uniform magnetic field, omega = eB/2m.

    Between full cyclotron turns (N = floor(omega T / pi)),

        K = (m omega / (2 pi i hbar |sin omega T|)) (-1)^N
            * exp{ (i m omega / 2 hbar)
                   [ |r2 - r1|^2 cot(omega T) + 2 (x1 y2 - x2 y1) ] },

    and at T = N pi / omega it is (-1)^N delta^2(r1 - r2): the paths
    return to their start, so the parity factor is +1 in each
    coordinate while the two transverse directions each contribute a
    quarter-turn phase per crossing.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    x = omega * T
    s = math.sin(x)
    if abs(s) <= tol:
        N = round(x / math.pi)
        return CausticDelta(N, +1, (-1.0 + 0.0j) ** N, 2)
    N = math.floor(x / math.pi)
    x1, y1 = r1
    x2, y2 = r2
    cot = math.cos(x) / s
    dsq = (x2 - x1) ** 2 + (y2 - y1) ** 2
    S = m * omega / 2.0 * (dsq * cot + 2.0 * (x1 * y2 - x2 * y1))
    amp = m * omega / (2.0 * math.pi * hbar * abs(s))
    phase = ROOT_I_INV**2 * (-1.0) ** N  # one factor 1/sqrt(i) per dimension
    return Regular(amp * phase * cmath.exp(1j * S / hbar))


def van_vleck_kernel(
    model,
    x1,
    x2,
    T: float,
    n_caustics: int = None,
    hessian=None,
    fd_step: float = 1e-3,
) -> complex:
    """Semiclassical kernel from the endpoint Hessian of the action.

        K = (2 pi i hbar)^{-D/2} |det d2S/dx1 dx2|^{1/2}
            e^{-i D N pi/2} e^{i S/hbar}

    N counts focal crossings (each contributes a quarter turn per
    dimension); it defaults to the model's crossing count.  hessian
    may be "fd" to force nested central differences, a precomputed
    matrix, or None for the analytic form when the model has one.
    Exact for quadratic actions.
    """
    D = models.dimension(model)
    hbar = model.hbar
    if n_caustics is None:
        n_caustics = models.caustic_index(model, T).N
    if hessian is None:
        try:
            H = classical.mixed_hessian_analytic(model, T)
        except UnsupportedModelError:
            H = classical.principal_function_hessian(model, x1, x2, T, fd_step)
    elif isinstance(hessian, str) and hessian == "fd":
        H = classical.principal_function_hessian(model, x1, x2, T, fd_step)
    else:
        H = np.asarray(hessian, dtype=float)
    det = abs(float(np.linalg.det(H)))
    S = classical.principal_action(model, x1, x2, T)
    amp = (1.0 / (2.0 * math.pi * hbar)) ** (D / 2.0) * math.sqrt(det)
    phase = ROOT_I_INV**D * cmath.exp(-1j * D * n_caustics * math.pi / 2.0)
    return amp * phase * cmath.exp(1j * S / hbar)


def kernel_for_model(model, x1, x2, T: float, tol: float = CAUSTIC_TOL) -> KernelValue:
    """Dispatch to the model's closed-form kernel."""
    if isinstance(model, Free):
        return Regular(free_kernel(model.m, model.hbar, x1, x2, T))
    if isinstance(model, Oscillator):
        return oscillator_kernel(model.m, model.omega, model.hbar, x1, x2, T, tol)
    if isinstance(model, ForcedOscillator):
        return forced_kernel(model.m, model.omega, model.f, model.hbar, x1, x2, T, tol)
    if isinstance(model, MagneticPlane):
        return magnetic_kernel(model.m, model.omega, model.hbar, x1, x2, T, tol)
    raise UnsupportedModelError("no closed-form kernel for " + type(model).__name__)
