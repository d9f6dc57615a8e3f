"""Exact spectral machinery: oscillator eigenfunctions, the spectral
kernel and its damped closed form, and wavepacket evolution by direct
quadrature.  This module is the ground truth the closed-form kernels
are checked against.

The real-time spectral sum does not converge pointwise; it is used
either with the damping regulator eta (equivalently |z| = e^{-eta} < 1
in the generating-function variable) or projected onto smooth states,
whose coefficients decay fast enough on their own.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import models, propagators
from .errors import DomainTooSmallError, UnsupportedModelError
from .models import Free, ForcedOscillator, MagneticPlane, Oscillator
from .propagators import CausticDelta, ROOT_I_INV
from ._backend import apply_quadratic_kernel

EDGE_MASS_TOL = 1e-8


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitude sampled on a uniform grid."""

    samples: np.ndarray
    x_min: float
    dx: float

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.samples.size)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.samples.size, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w

    def norm(self) -> float:
        return math.sqrt(float(np.sum(self.weights * np.abs(self.samples) ** 2)))

    def overlap(self, other: "WaveFunction") -> complex:
        return complex(np.sum(self.weights * np.conj(self.samples) * other.samples))

    def reflected(self) -> "WaveFunction":
        """psi(-x); the grid must be symmetric about the origin."""
        if abs(self.x_min + self.x[-1]) > 1e-9 * self.dx:
            raise ValueError("grid is not symmetric about x = 0")
        return replace(self, samples=self.samples[::-1].copy())

    def with_samples(self, samples: np.ndarray) -> "WaveFunction":
        return replace(self, samples=np.asarray(samples, dtype=np.complex128))


def symmetric_grid(halfwidth: float, n: int) -> np.ndarray:
    return np.linspace(-halfwidth, halfwidth, n)


def gaussian(x: np.ndarray, x0: float = 0.0, p0: float = 0.0, sigma: float = 1.0,
             hbar: float = 1.0) -> WaveFunction:
    """Normalized Gaussian packet centered at x0 with mean momentum p0."""
    x = np.asarray(x, dtype=float)
    env = (2.0 * math.pi * sigma**2) ** (-0.25) * np.exp(-((x - x0) ** 2) / (4.0 * sigma**2))
    samples = env * np.exp(1j * p0 * (x - x0) / hbar)
    return WaveFunction(samples.astype(np.complex128), float(x[0]), float(x[1] - x[0]))


def default_grid(model, config: models.NumericConfig = models.DEFAULTS) -> np.ndarray:
    """Grid wide enough that oscillator-scale Gaussians vanish at the edges."""
    omega = models.frequency(model) or 1.0
    ell = math.sqrt(model.hbar / (model.m * omega))
    return symmetric_grid(config.quad_domain_halfwidth * ell, config.quad_points)


# ---------------------------------------------------------------------------
# eigenfunctions and spectral kernels


def hermite_psi(x, n_max: int, m: float = 1.0, omega: float = 1.0, hbar: float = 1.0):
    """Normalized oscillator eigenfunctions psi_0..psi_n_max at x.

    Stable normalized recurrence
        psi_{n+1} = zeta sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1},
    zeta = sqrt(m omega / hbar) x.  Returns shape (n_max+1,) + x.shape.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    zeta = math.sqrt(m * omega / hbar) * np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + zeta.shape)
    out[0] = (m * omega / (math.pi * hbar)) ** 0.25 * np.exp(-0.5 * zeta**2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * zeta * out[0]
    for n in range(1, n_max):
        out[n + 1] = zeta * math.sqrt(2.0 / (n + 1)) * out[n] - math.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def spectral_kernel(
    x1: float,
    x2: float,
    T: float,
    n_max: int = 400,
    eta: float = 0.1,
    m: float = 1.0,
    omega: float = 1.0,
    hbar: float = 1.0,
) -> complex:
    """Damped eigenfunction sum sum_n e^{-(i omega T + eta)(n+1/2)} psi_n(x1) psi_n(x2).

    With eta > 0 the tail is geometric and the truncation error is
    bounded by the first omitted term over 1 - e^{-eta}.
    """
    psi1 = hermite_psi(x1, n_max, m, omega, hbar)
    psi2 = hermite_psi(x2, n_max, m, omega, hbar)
    n = np.arange(n_max + 1) + 0.5
    return complex(np.sum(np.exp(-(1j * omega * T + eta) * n) * psi1 * psi2))


def generating_function(zeta1: float, zeta2: float, z: complex) -> complex:
    """Bilinear Hermite generating function

        G(z1, z2; z) = (1 - z^2)^{-1/2}
                       exp[(2 z z1 z2 - z^2 (z1^2 + z2^2)) / (1 - z^2)],

    analytic off the real cuts (-inf, -1] and [1, inf); the principal
    square root applies since Re(1 - z^2) > 0 for |z| < 1.
    """
    w = 1.0 - z * z
    if abs(w) < 1e-12:
        warnings.warn("z^2 within 1e-12 of 1: next to the branch cut", stacklevel=2)
    return cmath.exp((2.0 * z * zeta1 * zeta2 - z * z * (zeta1**2 + zeta2**2)) / w) / cmath.sqrt(w)


def continued_kernel(
    x1: float,
    x2: float,
    T: float,
    eta: float = 0.1,
    m: float = 1.0,
    omega: float = 1.0,
    hbar: float = 1.0,
) -> complex:
    """Closed form of the damped spectral sum at complexified phase
    alpha = omega T - i eta.

    Written in z = e^{-i alpha} the half-power is the explicit
    e^{-i alpha/2}, so the winding (one quarter turn per half period)
    is built in and no branch choice remains.
    """
    alpha = omega * T - 1j * eta
    z = cmath.exp(-1j * alpha)
    scale = math.sqrt(m * omega / hbar)
    zeta1, zeta2 = scale * x1, scale * x2
    pref = math.sqrt(m * omega / (math.pi * hbar)) * cmath.exp(-1j * alpha / 2.0)
    return pref * cmath.exp(-0.5 * (zeta1**2 + zeta2**2)) * generating_function(zeta1, zeta2, z)


# ---------------------------------------------------------------------------
# evolution by quadrature


def _edge_mass(psi: WaveFunction) -> float:
    s = psi.samples
    return float(psi.dx * (abs(s[0]) ** 2 + abs(s[1]) ** 2 + abs(s[-2]) ** 2 + abs(s[-1]) ** 2))


def _apply_caustic(delta: CausticDelta, psi: WaveFunction) -> WaveFunction:
    if delta.parity == 1 and delta.shift == 0.0:
        return psi.with_samples(delta.phase * psi.samples)
    if delta.shift == 0.0:
        return psi.with_samples(delta.phase * psi.reflected().samples)
    # reflection about the shifted center: resample by interpolation
    xr = delta.shift + delta.parity * (psi.x - delta.shift)
    re = np.interp(xr, psi.x, psi.samples.real, left=0.0, right=0.0)
    im = np.interp(xr, psi.x, psi.samples.imag, left=0.0, right=0.0)
    return psi.with_samples(delta.phase * (re + 1j * im))


def evolve(model, psi: WaveFunction, T: float) -> WaveFunction:
    """psi_T(y) = integral K(y, T | x) psi(x) dx by trapezoid quadrature.

    Uses the model's closed-form kernel; at focal times the parity and
    phase act exactly, with no quadrature.  T = 0 is the identity.
    """
    if T == 0.0:
        return psi
    if isinstance(model, MagneticPlane):
        raise UnsupportedModelError("planar states evolve via evolve_plane")
    if _edge_mass(psi) > EDGE_MASS_TOL:
        raise DomainTooSmallError("state reaches the grid edge; widen the domain")
    m, hbar = model.m, model.hbar
    x = psi.x
    wpsi = psi.weights * psi.samples

    if isinstance(model, Free):
        p = m / (2.0 * hbar * T)
        pref = math.sqrt(m / (2.0 * math.pi * hbar * T)) * ROOT_I_INV
        return psi.with_samples(pref * apply_quadratic_kernel(wpsi, x, p, -2.0 * p))

    if isinstance(model, (Oscillator, ForcedOscillator)):
        kind = models.caustic_index(model, T)
        value = propagators.kernel_for_model(model, 0.0, 0.0, T)
        if kind.caustic:
            return _apply_caustic(value, psi)
        omega = model.omega
        s, c = math.sin(omega * T), math.cos(omega * T)
        p = m * omega * c / (2.0 * hbar * s)
        q = -m * omega / (hbar * s)
        pref = math.sqrt(m * omega / (2.0 * math.pi * hbar * abs(s)))
        pref *= ROOT_I_INV * cmath.exp(-1j * math.pi * kind.N / 2.0)
        if isinstance(model, ForcedOscillator):
            u = x - model.x_star
            drive = cmath.exp(1j * model.f**2 * T / (2.0 * m * omega**2 * hbar))
            return psi.with_samples(drive * pref * apply_quadratic_kernel(wpsi, u, p, q))
        return psi.with_samples(pref * apply_quadratic_kernel(wpsi, x, p, q))

    raise UnsupportedModelError(type(model).__name__)


def evolve_spectral(model, psi: WaveFunction, T: float, n_max: int = 400) -> WaveFunction:
    """Evolution by projection on the oscillator eigenbasis.

    Exact at any T (focal times included) for states resolved by the
    first n_max+1 modes; the driven oscillator uses the basis shifted
    to its displaced equilibrium, whose energies carry the constant
    offset -f^2/(2 m omega^2).
    """
    if isinstance(model, Oscillator):
        shift, extra = 0.0, 0.0
    elif isinstance(model, ForcedOscillator):
        shift = model.x_star
        extra = model.f**2 * T / (2.0 * model.m * model.omega**2 * model.hbar)
    else:
        raise UnsupportedModelError("spectral evolution needs an oscillator spectrum")
    basis = hermite_psi(psi.x - shift, n_max, model.m, model.omega, model.hbar)
    coeff = basis @ (psi.weights * psi.samples)
    phases = np.exp(-1j * model.omega * T * (np.arange(n_max + 1) + 0.5) + 1j * extra)
    return psi.with_samples((phases * coeff) @ basis)


def semigroup_check(model, psi: WaveFunction, t: float, tp: float) -> float:
    """L2 defect of U_{t+t'} psi against U_t U_{t'} psi."""
    direct = evolve(model, psi, t + tp)
    composed = evolve(model, evolve(model, psi, tp), t)
    return float(
        math.sqrt(np.sum(psi.weights * np.abs(direct.samples - composed.samples) ** 2))
    )


def quarter_period_fourier_check(model, psi: WaveFunction) -> float:
    """Defect between quarter-period evolution and the scaled Fourier map

        (m omega / 2 pi hbar)^{1/2} e^{-i pi/4}
        integral e^{-i m omega x y / hbar} psi(x) dx,

    the latter by direct quadrature of the explicit phase matrix.
    """
    omega = models.frequency(model)
    if omega is None:
        raise UnsupportedModelError("quarter period needs a frequency")
    m, hbar = model.m, model.hbar
    evolved = evolve(model, psi, 0.5 * math.pi / omega)
    x = psi.x
    phases = np.exp(-1j * m * omega * np.outer(x, x) / hbar)
    direct = (
        math.sqrt(m * omega / (2.0 * math.pi * hbar))
        * ROOT_I_INV
        * (phases @ (psi.weights * psi.samples))
    )
    return float(math.sqrt(np.sum(psi.weights * np.abs(evolved.samples - direct) ** 2)))


# ---------------------------------------------------------------------------
# planar (magnetic) quadrature


def plane_gaussian(x, y, x0=0.0, y0=0.0, sigma=1.0) -> np.ndarray:
    gx = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2))
    gy = np.exp(-((y - y0) ** 2) / (4.0 * sigma**2))
    return (2.0 * math.pi * sigma**2) ** (-0.5) * np.outer(gx, gy).astype(np.complex128)


def _plane_weights(x, y):
    wx = np.full(x.size, x[1] - x[0])
    wx[0] = wx[-1] = 0.5 * (x[1] - x[0])
    wy = np.full(y.size, y[1] - y[0])
    wy[0] = wy[-1] = 0.5 * (y[1] - y[0])
    return np.outer(wx, wy)


def plane_overlap(A: np.ndarray, B: np.ndarray, x, y) -> complex:
    return complex(np.sum(_plane_weights(x, y) * np.conj(A) * B))


def evolve_plane(model: MagneticPlane, Psi: np.ndarray, x, y, T: float) -> np.ndarray:
    """Planar quadrature evolution under the magnetic kernel.

    Psi is sampled as Psi[i, j] = psi(x[i], y[j]).  The kernel phase
    factorizes into (x-source, y-target) and (y-source, x-target)
    pieces, contracted with einsum in O(G^4).
    """
    if T == 0.0:
        return Psi
    m, omega, hbar = model.m, model.omega, model.hbar
    kind = models.caustic_index(model, T)
    if kind.caustic:
        return ((-1.0) ** kind.N) * Psi
    s, c = math.sin(omega * T), math.cos(omega * T)
    a = m * omega * c / (2.0 * hbar * s)
    b = m * omega / hbar
    pref = m * omega / (2.0 * math.pi * hbar * abs(s)) * ROOT_I_INV**2 * (-1.0) ** kind.N
    Psiw = Psi * _plane_weights(x, y)
    # Ax[i, k, l] covers the x-source leg, Ay[j, k, l] the y-source leg
    dx2 = (x[None, :] - x[:, None]) ** 2
    dy2 = (y[None, :] - y[:, None]) ** 2
    Ax = np.exp(1j * (a * dx2[:, :, None] + b * x[:, None, None] * y[None, None, :]))
    Ay = np.exp(1j * (a * dy2[:, None, :] - b * y[:, None, None] * x[None, :, None]))
    return pref * np.einsum("ij,ikl,jkl->kl", Psiw, Ax, Ay, optimize=True)
