"""Jacobi fields, conjugate points and the index of classical extremals.

Jacobi fields are integrated as first-order systems with RK4 on the
same grid as the classical path.  Conjugate points are the zeros of
det M(t), where the columns of M are the solutions launched with zero
displacement and unit velocity; multiplicities come from the rank
drop of M at the located zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from . import models
from .errors import EndpointConjugateError, UnsupportedModelError
from .models import Free, ForcedOscillator, MagneticPlane, Oscillator, Potential1D
from ._backend import rk4_linear_second_order

DET_DROP_TOL = 1e-10  # |det M| threshold (relative) at a refined minimum
RANK_TOL = 1e-8  # singular-value threshold relative to the field scale
ENDPOINT_WINDOW = 1e-6  # relative window treating a root as the endpoint


@dataclass(frozen=True)
class JacobiBasis:
    """The 2D independent Jacobi solutions along a path.

    xi and dxi have shape (2*D, n+1, D): first the D solutions with
    xi(0) = e_i, xi'(0) = 0, then the D solutions with xi(0) = 0,
    xi'(0) = e_i.
    """

    t: np.ndarray
    xi: np.ndarray
    dxi: np.ndarray

    @property
    def D(self) -> int:
        return self.xi.shape[2]


def _curvature_over_mass(model, T: float, n_half: int, path):
    """w(t) with xi'' = -w(t) xi, sampled on the half-step grid."""
    th = np.linspace(0.0, T, n_half)
    if isinstance(model, Free):
        return np.zeros(n_half)
    if isinstance(model, (Oscillator, ForcedOscillator)):
        return np.full(n_half, model.omega**2)
    if isinstance(model, Potential1D):
        if path is None:
            raise ValueError("Potential1D needs the classical path")
        xbar = np.interp(th, path.t, path.x)
        return np.array([model.curvature(x) for x in xbar]) / model.m
    raise UnsupportedModelError(type(model).__name__)


def jacobi_basis(model, T: float, n_steps: int = 4096, path=None) -> JacobiBasis:
    """Integrate the linearized flow from the canonical initial data."""
    t = np.linspace(0.0, T, n_steps + 1)
    if isinstance(model, MagneticPlane):
        # linear constant-coefficient system: one RK4 step is the
        # degree-4 Taylor polynomial of the exact transition matrix
        w = 2.0 * model.omega
        A = np.array(
            [
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 0.0, w],
                [0.0, 0.0, -w, 0.0],
            ]
        )
        h = T / n_steps
        hA = h * A
        R = np.eye(4) + hA + hA @ hA / 2.0 + hA @ hA @ hA / 6.0 + hA @ hA @ hA @ hA / 24.0
        Y = np.zeros((n_steps + 1, 4, 4))
        Y[0] = np.eye(4)  # columns: (e_x,0), (e_y,0), (0,e_x), (0,e_y)
        for k in range(n_steps):
            Y[k + 1] = R @ Y[k]
        xi = np.transpose(Y[:, :2, :], (2, 0, 1))
        dxi = np.transpose(Y[:, 2:, :], (2, 0, 1))
        return JacobiBasis(t, xi, dxi)

    w_half = _curvature_over_mass(model, T, 2 * n_steps + 1, path)
    dt = T / n_steps
    xi = np.empty((2, n_steps + 1, 1))
    dxi = np.empty((2, n_steps + 1, 1))
    for j, (x0, v0) in enumerate([(1.0, 0.0), (0.0, 1.0)]):
        x, v = rk4_linear_second_order(w_half, dt, x0, v0)
        xi[j, :, 0] = x
        dxi[j, :, 0] = v
    return JacobiBasis(t, xi, dxi)


def _velocity_block(basis: JacobiBasis):
    """M(t_k) and M'(t_k): columns are the velocity-initialized fields."""
    D = basis.D
    M = np.transpose(basis.xi[D:], (1, 2, 0))  # (n+1, D, D)
    dM = np.transpose(basis.dxi[D:], (1, 2, 0))
    return M, dM


def _hermite_eval(tk, h, y0, y1, d0, d1, t):
    s = (t - tk) / h
    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
    h10 = s * (1.0 - s) ** 2
    h01 = s * s * (3.0 - 2.0 * s)
    h11 = s * s * (s - 1.0)
    return h00 * y0 + h * h10 * d0 + h01 * y1 + h * h11 * d1


def _hermite_deriv(tk, h, y0, y1, d0, d1, t):
    s = (t - tk) / h
    g00 = 6.0 * s * (s - 1.0) / h
    g10 = (3.0 * s - 1.0) * (s - 1.0)
    g01 = -6.0 * s * (s - 1.0) / h
    g11 = s * (3.0 * s - 2.0)
    return g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1


class _DetInterpolant:
    """Cubic-Hermite matrix interpolant and its determinant."""

    def __init__(self, t, M, dM):
        self.t = t
        self.M = M
        self.dM = dM
        self.h = t[1] - t[0]

    def _locate(self, x):
        k = int(np.clip(np.floor(x / self.h), 0, self.t.size - 2))
        return k

    def matrix(self, x):
        k = self._locate(x)
        return _hermite_eval(
            self.t[k], self.h, self.M[k], self.M[k + 1], self.dM[k], self.dM[k + 1], x
        )

    def matrix_deriv(self, x):
        k = self._locate(x)
        return _hermite_deriv(
            self.t[k], self.h, self.M[k], self.M[k + 1], self.dM[k], self.dM[k + 1], x
        )

    def det(self, x):
        return float(np.linalg.det(self.matrix(x)))

    def det_deriv(self, x):
        M = self.matrix(x)
        dM = self.matrix_deriv(x)
        if M.shape[0] == 1:
            return float(dM[0, 0])
        # Jacobi's formula for D = 2
        return float(
            dM[0, 0] * M[1, 1]
            + M[0, 0] * dM[1, 1]
            - dM[0, 1] * M[1, 0]
            - M[0, 1] * dM[1, 0]
        )


def conjugate_points(
    model, T: float, n_steps: int = 4096, path=None
) -> List[Tuple[float, int]]:
    """Times in (0, T] conjugate to the start, with multiplicities.

    Zeros of det M(t) are located by bisection on sign changes; even-
    order zeros (no sign change, as for the doubly-degenerate planar
    refocusing) are caught by refining local minima of |det M| and
    testing the residual against DET_DROP_TOL.
    """
    basis = jacobi_basis(model, T, n_steps, path=path)
    M, dM = _velocity_block(basis)
    interp = _DetInterpolant(basis.t, M, dM)
    dets = np.array([float(np.linalg.det(M[k])) for k in range(M.shape[0])])
    scale_det = float(np.max(np.abs(dets)))
    scale_field = float(np.max(np.abs(M)))
    if scale_det == 0.0:
        return []

    roots: List[float] = []
    n = dets.size - 1
    # skip the trivial zero at t = 0 where all these fields vanish
    for k in range(1, n):
        a, b = basis.t[k], basis.t[k + 1]
        da, db = dets[k], dets[k + 1]
        if da == 0.0:
            continue
        if da * db < 0.0:
            roots.append(brentq(interp.det, a, b, xtol=1e-12, rtol=8.9e-16))
        elif 0 < k < n and abs(da) < abs(dets[k - 1]) and abs(da) <= abs(db):
            lo, hi = basis.t[k - 1], b
            if interp.det_deriv(lo) < 0.0 < interp.det_deriv(hi) or (
                interp.det_deriv(lo) > 0.0 > interp.det_deriv(hi)
            ):
                tstar = brentq(interp.det_deriv, lo, hi, xtol=1e-12, rtol=8.9e-16)
                if abs(interp.det(tstar)) <= DET_DROP_TOL * scale_det:
                    roots.append(tstar)
    if abs(dets[-1]) <= DET_DROP_TOL * scale_det:
        roots.append(basis.t[-1])

    out: List[Tuple[float, int]] = []
    for r in sorted(roots):
        if out and abs(r - out[-1][0]) <= 1e-8 * max(1.0, T):
            continue
        sv = np.linalg.svd(interp.matrix(r), compute_uv=False)
        mult = int(np.sum(sv <= RANK_TOL * scale_field))
        if mult > 0:
            out.append((float(r), mult))
    return out


@dataclass(frozen=True)
class MorseReport:
    """Conjugate times, total index and the step profile mu(t)."""

    conjugate_times: List[Tuple[float, int]]
    morse_index: int
    profile: List[Tuple[float, int]]

    def index_at(self, t: float) -> int:
        """mu(t) for the subarc [0, t]; left-continuous at the jumps."""
        return sum(m for tc, m in self.conjugate_times if tc < t)


def morse_index(model, T: float, n_steps: int = 4096, path=None) -> MorseReport:
    """Index of the extremal on [0, T]: interior conjugate points, with
    multiplicity.  Raises EndpointConjugateError when T itself is focal."""
    kind = models.caustic_index(model, T) if models.frequency(model) else None
    if kind is not None and kind.caustic:
        raise EndpointConjugateError(f"T = {T:.6g} is a focal time")
    pts = conjugate_points(model, T, n_steps, path=path)
    window = ENDPOINT_WINDOW * max(1.0, T)
    if any(abs(tc - T) <= window for tc, _ in pts):
        raise EndpointConjugateError(f"endpoint at T = {T:.6g} is conjugate to the start")
    profile = [(0.0, 0)]
    mu = 0
    for tc, mult in pts:
        mu += mult
        profile.append((tc, mu))
    return MorseReport(pts, mu, profile)
