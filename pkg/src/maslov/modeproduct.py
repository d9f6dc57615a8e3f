"""Fourier-mode route to the reduced propagator.

Fluctuations around the classical path are expanded in Dirichlet sine
modes.  Each mode contributes an oscillatory Gaussian factor whose
phase is +/- pi/4 with the sign of its eigenvalue; the divergent
normalization cancels in the ratio against the free-particle modes,
leaving a truncated product with an analytic tail estimate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma

from .errors import CausticTimeError, ZeroModeError
from .models import CAUSTIC_TOL


def fresnel_factor(lam: float) -> complex:
    """Oscillatory Gaussian integral over one mode: sqrt(2 pi/|lam|) e^{i sgn(lam) pi/4}."""
    if lam == 0.0:
        raise ZeroModeError("zero eigenvalue: mode integral diverges")
    return math.sqrt(2.0 * math.pi / abs(lam)) * cmath.exp(1j * math.copysign(math.pi / 4.0, lam))


def free_eigenvalues(m: float, T: float, n: int) -> np.ndarray:
    """Dirichlet sine-mode eigenvalues m (k pi / T)^2, k = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(1, n + 1, dtype=float)
    return m * (k * math.pi / T) ** 2


def _tail_log(x: float, n: int) -> float:
    """First-order log tail of prod_{k>n} |1 - x^2/(k pi)^2|.

    log(1 - u) ~ -u with u = x^2/(k pi)^2; the remaining k-sum is
    exact: sum_{k>n} k^-2 = psi'(n+1).
    """
    return -(x * x) / (math.pi**2) * float(polygamma(1, n + 1))


def euler_product(x: float, n: int) -> float:
    """prod_{k<=n} |1 - x^2/(k pi)^2| with the analytic tail; tends to |sin x|/x."""
    if x <= 0.0 or n < 1:
        raise ValueError("need x > 0 and n >= 1")
    k = np.arange(1, n + 1, dtype=float)
    factors = np.abs(1.0 - (x / (k * math.pi)) ** 2)
    if np.any(factors == 0.0):
        raise ZeroModeError(f"x = {x:.6g} is an integer multiple of pi")
    log_prod = float(np.sum(np.log(factors)))
    return math.exp(log_prod + _tail_log(x, n))


@dataclass(frozen=True)
class ModeProductResult:
    """Tail-corrected eigenvalue-ratio data and the assembled prefactor."""

    ratio: float
    negative_count: int
    reduced_propagator: complex
    truncation: int


def reduced_propagator(
    m: float, omega: float, hbar: float, T: float, n: int = 10000
) -> ModeProductResult:
    """Fluctuation prefactor by the mode product.

    ratio = prod_k lambda_k^free / |lambda_k| (tail corrected), and
    each negative mode rotates the phase by -pi/2, so

        F(T) = sqrt(m / (2 pi hbar T)) e^{-i pi/4}
               * sqrt(ratio) * e^{-i pi N / 2}

    with N the count of negative eigenvalues.  Matches
    sqrt(m omega / (2 pi hbar |sin omega T|)) e^{-i pi/4 - i pi N/2}.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    x = omega * T
    if omega > 0.0 and abs(math.sin(x)) <= CAUSTIC_TOL:
        raise CausticTimeError(f"focal time: omega*T = {x:.6g}")
    if omega == 0.0:
        ratio = 1.0
        negative = 0
    else:
        ratio = 1.0 / euler_product(x, n)
        k = np.arange(1, n + 1, dtype=float)
        negative = int(np.sum((k * math.pi / T) ** 2 < omega**2))
    prefactor = math.sqrt(m / (2.0 * math.pi * hbar * T)) * cmath.exp(-1j * math.pi / 4.0)
    reduced = prefactor * math.sqrt(ratio) * cmath.exp(-1j * math.pi * negative / 2.0)
    return ModeProductResult(ratio, negative, reduced, n)


def mode_product_kernel(
    m: float, omega: float, hbar: float, x1: float, x2: float, T: float, n: int = 10000
) -> complex:
    """Full oscillator kernel assembled from the mode product and the action."""
    from .classical import action_closed
    from .models import Free, Oscillator

    model = Oscillator(m, omega, hbar) if omega > 0.0 else Free(m, hbar)
    result = reduced_propagator(m, omega, hbar, T, n)
    return result.reduced_propagator * cmath.exp(1j * action_closed(model, x1, x2, T) / hbar)
