"""Two-point boundary problems and Hamilton's principal function.

For the closed-form models (free, oscillator, driven oscillator,
magnetic plane) the boundary problem and the action are analytic.  The
general 1D potential is handled by shooting on the initial velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.integrate import simpson

from . import models
from .errors import CausticTimeError, SolverConvergenceError, UnsupportedModelError
from .models import CAUSTIC_TOL, Free, ForcedOscillator, MagneticPlane, Oscillator, Potential1D

ENDPOINT_TOL = 1e-10
SHOOT_STEPS = 4096


@dataclass(frozen=True)
class Path:
    """Trajectory sampled on a uniform time grid.

    x has shape (n,) for line models and (n, 2) in the plane.  v holds
    the sampled velocities when the producer knows them; otherwise
    they are reconstructed by 4th-order finite differences.
    """

    t: np.ndarray
    x: np.ndarray
    v: Optional[np.ndarray] = None


@dataclass(frozen=True)
class Unique:
    path: Path
    action: float


@dataclass(frozen=True)
class NoSolution:
    pass


@dataclass(frozen=True)
class Degenerate:
    """Focal-time boundary data: a one-parameter family of solutions."""

    parity: int


ClassicalSolution = Union[Unique, NoSolution, Degenerate]


def _grid(T: float, n: int) -> np.ndarray:
    return np.linspace(0.0, T, n)


def _deriv4(x: np.ndarray, dt: float) -> np.ndarray:
    """4th-order finite-difference time derivative on a uniform grid."""
    x = np.asarray(x, dtype=float)
    v = np.empty_like(x)
    v[2:-2] = (x[:-4] - 8.0 * x[1:-3] + 8.0 * x[3:-1] - x[4:]) / (12.0 * dt)
    # one-sided 5-point stencils at the edges
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    v[0] = np.dot(c, x[:5]) / dt
    v[1] = np.dot(c, x[1:6]) / dt
    v[-1] = -np.dot(c, x[-1:-6:-1]) / dt
    v[-2] = -np.dot(c, x[-2:-7:-1]) / dt
    return v


def _lagrangian(model, x, v):
    if isinstance(model, Free):
        return 0.5 * model.m * v**2
    if isinstance(model, Oscillator):
        return 0.5 * model.m * (v**2 - model.omega**2 * x**2)
    if isinstance(model, ForcedOscillator):
        return 0.5 * model.m * (v**2 - model.omega**2 * x**2) + model.f * x
    if isinstance(model, MagneticPlane):
        vx, vy = v[:, 0], v[:, 1]
        px, py = x[:, 0], x[:, 1]
        return 0.5 * model.m * (vx**2 + vy**2) + model.m * model.omega * (px * vy - py * vx)
    if isinstance(model, Potential1D):
        return 0.5 * model.m * v**2 - model.V(x)
    raise UnsupportedModelError(type(model).__name__)


def action_numeric(model, path: Path) -> float:
    """Composite Simpson quadrature of the Lagrangian along the path."""
    t = np.asarray(path.t, dtype=float)
    x = np.asarray(path.x, dtype=float)
    dt = t[1] - t[0]
    if path.v is not None:
        v = np.asarray(path.v, dtype=float)
    elif x.ndim == 1:
        v = _deriv4(x, dt)
    else:
        v = np.column_stack([_deriv4(x[:, i], dt) for i in range(x.shape[1])])
    return float(simpson(_lagrangian(model, x, v), x=t))


def _oscillator_action(m, omega, x1, x2, T):
    s = math.sin(omega * T)
    c = math.cos(omega * T)
    return m * omega / (2.0 * s) * ((x1 * x1 + x2 * x2) * c - 2.0 * x1 * x2)


def action_closed(model, x1, x2, T: float, tol: float = CAUSTIC_TOL) -> float:
    """Hamilton's principal function S(x1, x2, T) in closed form.

    Raises CausticTimeError at focal times where the expression
    degenerates.  The driven oscillator reduces to the plain one via
    the equilibrium shift u = x - x_star plus the constant-energy term
    f^2 T / (2 m omega^2); this form is what the numeric action along
    the solved path reproduces.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    if isinstance(model, Free):
        return model.m * (x2 - x1) ** 2 / (2.0 * T)
    kind = models.caustic_index(model, T, tol) if models.frequency(model) else None
    if kind is not None and kind.caustic:
        raise CausticTimeError(f"focal time: omega*T = {model.omega * T:.6g}")
    if isinstance(model, Oscillator):
        return _oscillator_action(model.m, model.omega, x1, x2, T)
    if isinstance(model, ForcedOscillator):
        xs = model.x_star
        shift = model.f**2 * T / (2.0 * model.m * model.omega**2)
        return _oscillator_action(model.m, model.omega, x1 - xs, x2 - xs, T) + shift
    if isinstance(model, MagneticPlane):
        (a1, b1), (a2, b2) = x1, x2
        cot = 1.0 / math.tan(model.omega * T)
        dsq = (a2 - a1) ** 2 + (b2 - b1) ** 2
        return model.m * model.omega / 2.0 * (dsq * cot + 2.0 * (a1 * b2 - a2 * b1))
    raise UnsupportedModelError("no closed-form action for " + type(model).__name__)


def _close(a, b, scale) -> bool:
    return abs(a - b) <= 1e-9 * (1.0 + abs(scale))


def solve_boundary(model, x1, x2, T: float, n_samples: int = 1025) -> ClassicalSolution:
    """Solve the boundary problem x(0) = x1, x(T) = x2.

    Returns Unique (path + action), NoSolution, or Degenerate at a
    focal time where the endpoints admit a solution family.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    t = _grid(T, n_samples)

    if isinstance(model, Free):
        vel = (x2 - x1) / T
        x = x1 + vel * t
        path = Path(t, x, np.full_like(t, vel))
        return Unique(path, model.m * (x2 - x1) ** 2 / (2.0 * T))

    if isinstance(model, (Oscillator, ForcedOscillator)):
        omega = model.omega
        xs = model.x_star if isinstance(model, ForcedOscillator) else 0.0
        u1, u2 = x1 - xs, x2 - xs
        kind = models.caustic_index(model, T)
        if kind.caustic:
            if _close(u2, (-1) ** kind.N * u1, u1):
                return Degenerate(parity=(-1) ** kind.N)
            return NoSolution()
        s, c = math.sin(omega * T), math.cos(omega * T)
        B = u1
        A = (u2 - u1 * c) / s
        x = xs + A * np.sin(omega * t) + B * np.cos(omega * t)
        v = omega * (A * np.cos(omega * t) - B * np.sin(omega * t))
        return Unique(Path(t, x, v), action_closed(model, x1, x2, T))

    if isinstance(model, MagneticPlane):
        omega = model.omega
        kind = models.caustic_index(model, T)
        w1 = complex(x1[0], x1[1])
        w2 = complex(x2[0], x2[1])
        if kind.caustic:
            # full cyclotron turns: every path returns to its start
            if _close(x2[0], x1[0], x1[0]) and _close(x2[1], x1[1], x1[1]):
                return Degenerate(parity=+1)
            return NoSolution()
        vel0 = (w2 - w1) * 2j * omega / (1.0 - np.exp(-2j * omega * T))
        w = w1 + vel0 * (1.0 - np.exp(-2j * omega * t)) / (2j * omega)
        vw = vel0 * np.exp(-2j * omega * t)
        x = np.column_stack([w.real, w.imag])
        v = np.column_stack([vw.real, vw.imag])
        return Unique(Path(t, x, v), action_closed(model, x1, x2, T))

    if isinstance(model, Potential1D):
        return _solve_shooting(model, x1, x2, T, n_samples)

    raise UnsupportedModelError(type(model).__name__)


# ---------------------------------------------------------------------------
# shooting solver for the general 1D potential


def _integrate_potential(model: Potential1D, x1, v0, T, n_steps=SHOOT_STEPS):
    """RK4 of m x'' = -V'(x) from (x1, v0); returns (t, x, v).

    v0 may be an array, integrating a whole fan of launches at once;
    x and v then have shape (n_steps+1,) + v0.shape.
    """
    m = model.m
    h = T / n_steps
    scalar = np.ndim(v0) == 0
    v0 = np.asarray(v0, dtype=float)
    x = np.empty((n_steps + 1,) + v0.shape)
    v = np.empty_like(x)
    xi = float(x1) if scalar else np.full_like(v0, float(x1))
    vi = float(v0) if scalar else v0.copy()
    x[0], v[0] = xi, vi
    for k in range(n_steps):
        a1 = model.force(xi) / m
        k2x = vi + 0.5 * h * a1
        a2 = model.force(xi + 0.5 * h * vi) / m
        k3x = vi + 0.5 * h * a2
        a3 = model.force(xi + 0.5 * h * k2x) / m
        k4x = vi + h * a3
        a4 = model.force(xi + h * k3x) / m
        xi = xi + h / 6.0 * (vi + 2.0 * k2x + 2.0 * k3x + k4x)
        vi = vi + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        x[k + 1], v[k + 1] = xi, vi
    return np.linspace(0.0, T, n_steps + 1), x, v


def shoot_endpoint(model: Potential1D, x1, v0, T, n_steps=SHOOT_STEPS):
    """Final position of the trajectory launched from (x1, v0)."""
    end = _integrate_potential(model, x1, v0, T, n_steps)[1][-1]
    return float(end) if np.ndim(v0) == 0 else end


def _velocity_bracket(model: Potential1D, x1, x2, T) -> float:
    lo, hi = min(x1, x2), max(x1, x2)
    pad = 0.25 * (hi - lo + 1.0)
    xs = np.linspace(lo - pad, hi + pad, 257)
    dV = float(np.max(model.V(xs)) - np.min(model.V(xs)))
    return 4.0 * max(abs(x2 - x1) / T, math.sqrt(2.0 * max(dV, 0.0) / model.m))


def _solve_shooting(model: Potential1D, x1, x2, T, n_samples) -> ClassicalSolution:
    """Bracket the launch velocity on a fan of trajectories, narrow the
    bracket by vectorized bisection, then Newton-polish at full step
    resolution.  Every user-potential evaluation is batched."""
    vmax = _velocity_bracket(model, x1, x2, T)
    search_steps = SHOOT_STEPS // 4

    vs = np.linspace(-vmax, vmax, 65)
    gs = shoot_endpoint(model, x1, vs, T, search_steps) - x2
    idx = np.flatnonzero(np.sign(gs[:-1]) * np.sign(gs[1:]) < 0)
    if idx.size == 0:
        exact = np.flatnonzero(gs == 0.0)
        if exact.size:
            return _unique_from_velocity(model, x1, x2, T, float(vs[exact[0]]), n_samples)
        return NoSolution()

    a, b = float(vs[idx[0]]), float(vs[idx[0] + 1])
    for _ in range(3):  # 17-fold subdivision per round
        vs = np.linspace(a, b, 17)
        gs = shoot_endpoint(model, x1, vs, T, search_steps) - x2
        j = np.flatnonzero(np.sign(gs[:-1]) * np.sign(gs[1:]) < 0)
        if j.size == 0:
            break
        a, b = float(vs[j[0]]), float(vs[j[0] + 1])
    v0 = 0.5 * (a + b)

    # Newton polish at full resolution; the value and the centered slope
    # share a single three-trajectory batch per iteration
    scale = 1.0 + abs(x2)
    for _ in range(6):
        h = 1e-7 * max(1.0, abs(v0))
        trio = shoot_endpoint(model, x1, np.array([v0, v0 + h, v0 - h]), T)
        g0 = trio[0] - x2
        if abs(g0) <= 0.1 * ENDPOINT_TOL * scale:
            break
        slope = (trio[1] - trio[2]) / (2.0 * h)
        if slope == 0.0:
            break
        v0 -= g0 / slope
    return _unique_from_velocity(model, x1, x2, T, v0, n_samples, check=x2)


def _unique_from_velocity(model, x1, x2, T, v0, n_samples, check=None) -> Unique:
    t, x, v = _integrate_potential(model, x1, v0, T)
    if check is not None and abs(x[-1] - check) > ENDPOINT_TOL * (1.0 + abs(check)):
        raise SolverConvergenceError(
            f"shooting stalled: residual {x[-1] - check:.3e} for x1={x1}, x2={x2}, T={T}"
        )
    ts = _grid(T, n_samples)
    path = Path(ts, np.interp(ts, t, x), np.interp(ts, t, v))
    return Unique(path, action_numeric(model, path))


# ---------------------------------------------------------------------------
# principal-function Hessians


def principal_action(model, x1, x2, T: float) -> float:
    """S(x1, x2, T) by the closed form, or by shooting for Potential1D."""
    if isinstance(model, Potential1D):
        sol = solve_boundary(model, x1, x2, T)
        if not isinstance(sol, Unique):
            raise SolverConvergenceError("no unique classical path")
        return sol.action
    return action_closed(model, x1, x2, T)


def principal_function_hessian(model, x1, x2, T: float, h: float = 1e-3) -> np.ndarray:
    """Mixed endpoint Hessian d^2 S / dx1_i dx2_j by nested central differences."""
    if h <= 0.0:
        raise ValueError("h must be positive")
    D = models.dimension(model)
    a = np.atleast_1d(np.asarray(x1, dtype=float))
    b = np.atleast_1d(np.asarray(x2, dtype=float))

    def S(da, db):
        if D == 1:
            return principal_action(model, float(a[0] + da[0]), float(b[0] + db[0]), T)
        return principal_action(model, tuple(a + da), tuple(b + db), T)

    H = np.empty((D, D))
    for i in range(D):
        for j in range(D):
            ei = np.zeros(D)
            ej = np.zeros(D)
            ei[i] = h
            ej[j] = h
            H[i, j] = (S(ei, ej) - S(ei, -ej) - S(-ei, ej) + S(-ei, -ej)) / (4.0 * h * h)
    return H


def mixed_hessian_analytic(model, T: float) -> np.ndarray:
    """Closed-form mixed Hessian for the quadratic models (endpoint independent)."""
    if isinstance(model, Free):
        return np.array([[-model.m / T]])
    if isinstance(model, (Oscillator, ForcedOscillator)):
        s = math.sin(model.omega * T)
        if abs(s) <= CAUSTIC_TOL:
            raise CausticTimeError("focal time")
        return np.array([[-model.m * model.omega / s]])
    if isinstance(model, MagneticPlane):
        s = math.sin(model.omega * T)
        if abs(s) <= CAUSTIC_TOL:
            raise CausticTimeError("focal time")
        cot = math.cos(model.omega * T) / s
        mw = model.m * model.omega
        return mw * np.array([[-cot, 1.0], [-1.0, -cot]])
    raise UnsupportedModelError("no analytic Hessian for " + type(model).__name__)
