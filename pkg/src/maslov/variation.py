"""Second-variation operators along classical paths: spectra and inertia.

The quadratic form of the second variation is discretized with
centered differences on the interior time grid under Dirichlet
boundary conditions.  Line models give a symmetric tridiagonal matrix;
the magnetic plane gives a symmetric block matrix with antisymmetric
first-derivative coupling.  Eigenvalue counts come from Sturm scans
(tridiagonal) or a symmetric-indefinite LDL^T factorization (block).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from . import models
from .errors import UnsupportedModelError
from .models import Free, ForcedOscillator, MagneticPlane, Oscillator, Potential1D
from ._backend import tridiag_count_below


def eigenvalues_analytic(model, T: float, k_max: int) -> List[Tuple[float, int]]:
    """Dirichlet eigenvalues lambda_k = m((k pi/T)^2 - omega^2) with degeneracy.

    The magnetic problem separates into two oscillator copies under a
    frame rotating at the field's half-cyclotron rate, so each level
    appears twice.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if isinstance(model, (Oscillator, ForcedOscillator)):
        deg = 1
    elif isinstance(model, MagneticPlane):
        deg = 2
    else:
        raise UnsupportedModelError(type(model).__name__)
    m, omega = model.m, model.omega
    return [(m * ((k * math.pi / T) ** 2 - omega**2), deg) for k in range(1, k_max + 1)]


@dataclass(frozen=True)
class AssembledOperator:
    """Discretized second-variation operator on the interior grid."""

    kind: str  # "tridiagonal" | "block"
    T: float
    dt: float
    t: np.ndarray
    diag: Optional[np.ndarray] = None
    off: Optional[np.ndarray] = None
    dense: Optional[np.ndarray] = None
    zero_tol: float = 0.0

    @property
    def size(self) -> int:
        return self.diag.size if self.kind == "tridiagonal" else self.dense.shape[0]

    def quadratic_form(self, eta: np.ndarray) -> float:
        """dt * eta^T A eta, the discrete second-variation quadratic form."""
        eta = np.asarray(eta, dtype=float)
        if self.kind == "tridiagonal":
            val = np.dot(self.diag * eta, eta) + 2.0 * np.dot(self.off * eta[:-1], eta[1:])
        else:
            val = eta @ self.dense @ eta
        return float(self.dt * val)

    def as_dense(self) -> np.ndarray:
        if self.kind == "block":
            return self.dense
        A = np.diag(self.diag)
        idx = np.arange(self.diag.size - 1)
        A[idx, idx + 1] = self.off
        A[idx + 1, idx] = self.off
        return A


def _default_zero_tol(m: float, T: float) -> float:
    # scaled to the smallest free Dirichlet eigenvalue
    return 1e-6 * m * (math.pi / T) ** 2


def assemble_operator(model, T: float, n_grid: int = 2048, path=None) -> AssembledOperator:
    """Centered-difference matrix of the second variation on (0, T).

    n_grid counts interior points; Dirichlet values at t = 0 and t = T
    are eliminated.  Potential1D needs the classical path to sample
    the local curvature V''(x(t)).
    """
    if n_grid < 64:
        raise ValueError("n_grid must be >= 64")
    dt = T / (n_grid + 1)
    t = np.linspace(dt, T - dt, n_grid)
    ztol = _default_zero_tol(model.m, T)

    if isinstance(model, MagneticPlane):
        m, omega = model.m, model.omega
        n = n_grid
        A = np.zeros((2 * n, 2 * n))
        ix = 2 * np.arange(n)
        iy = ix + 1
        A[ix, ix] = 2.0 * m / dt**2
        A[iy, iy] = 2.0 * m / dt**2
        A[ix[:-1], ix[1:]] = A[ix[1:], ix[:-1]] = -m / dt**2
        A[iy[:-1], iy[1:]] = A[iy[1:], iy[:-1]] = -m / dt**2
        c = m * omega / dt
        A[ix[:-1], iy[1:]] = A[iy[1:], ix[:-1]] = c
        A[ix[1:], iy[:-1]] = A[iy[:-1], ix[1:]] = -c
        return AssembledOperator("block", T, dt, t, dense=A, zero_tol=ztol)

    if isinstance(model, Free):
        curv = np.zeros(n_grid)
    elif isinstance(model, (Oscillator, ForcedOscillator)):
        curv = np.full(n_grid, model.m * model.omega**2)
    elif isinstance(model, Potential1D):
        if path is None:
            raise ValueError("Potential1D needs the classical path")
        xbar = np.interp(t, path.t, path.x)
        curv = np.array([model.curvature(x) for x in xbar])
    else:
        raise UnsupportedModelError(type(model).__name__)

    diag = 2.0 * model.m / dt**2 - curv
    off = np.full(n_grid - 1, -model.m / dt**2)
    return AssembledOperator("tridiagonal", T, dt, t, diag=diag, off=off, zero_tol=ztol)


def _ldl_count_below(A: np.ndarray, shift: float) -> int:
    """Eigenvalues of symmetric A below shift via LDL^T block inertia."""
    M = A - shift * np.eye(A.shape[0])
    lu, d, _ = scipy.linalg.ldl(M)
    if not np.all(np.isfinite(d)):
        raise np.linalg.LinAlgError("non-finite LDL factor")
    count = 0
    n = d.shape[0]
    i = 0
    while i < n:
        if i + 1 < n and (d[i, i + 1] != 0.0 or d[i + 1, i] != 0.0):
            block = d[i : i + 2, i : i + 2]
            count += int(np.sum(np.linalg.eigvalsh(block) < 0.0))
            i += 2
        else:
            if d[i, i] < 0.0:
                count += 1
            i += 1
    return count


def inertia(op: AssembledOperator, shift: float = 0.0, zero_tol: Optional[float] = None):
    """(n_below, n_at, n_above) eigenvalue counts relative to shift.

    n_at counts eigenvalues in (shift - zero_tol, shift + zero_tol).
    Falls back to a full symmetric eigensolve if the factorization
    breaks down.
    """
    ztol = op.zero_tol if zero_tol is None else zero_tol
    n = op.size
    if op.kind == "tridiagonal":
        below = tridiag_count_below(op.diag, op.off, shift - ztol)
        upto = tridiag_count_below(op.diag, op.off, shift + ztol)
        return below, upto - below, n - upto
    try:
        below = _ldl_count_below(op.dense, shift - ztol)
        upto = _ldl_count_below(op.dense, shift + ztol)
    except np.linalg.LinAlgError:
        ev = np.linalg.eigvalsh(op.dense)
        below = int(np.sum(ev < shift - ztol))
        upto = int(np.sum(ev < shift + ztol))
    return below, upto - below, n - upto


def leading_eigenvalues(op: AssembledOperator, k: int = 6) -> np.ndarray:
    """The k smallest eigenvalues of the assembled operator."""
    k = min(k, op.size)
    if op.kind == "tridiagonal":
        return scipy.linalg.eigh_tridiagonal(
            op.diag, op.off, select="i", select_range=(0, k - 1), eigvals_only=True
        )
    bands = np.zeros((4, op.size))
    for u in range(4):
        bands[3 - u, u:] = np.diagonal(op.dense, offset=u)
    return scipy.linalg.eig_banded(
        bands, lower=False, select="i", select_range=(0, k - 1), eigvals_only=True
    )


@dataclass(frozen=True)
class SpectrumReport:
    """Inertia of the second variation plus its lowest eigenvalues."""

    n_negative: int
    n_zero: int
    n_positive_checked: int
    leading_eigenvalues: np.ndarray
    zero_tol: float


def spectrum_report(
    model,
    T: float,
    n_grid: int = 2048,
    n_lead: int = 6,
    zero_tol: Optional[float] = None,
    path=None,
) -> SpectrumReport:
    op = assemble_operator(model, T, n_grid, path=path)
    ztol = op.zero_tol if zero_tol is None else zero_tol
    neg, zero, pos = inertia(op, 0.0, ztol)
    return SpectrumReport(neg, zero, pos, leading_eigenvalues(op, n_lead), ztol)


def null_mode(model, T: float, n: int = 1025):
    """Sampled null modes of the second variation at a focal time.

    Returns (t, [modes]) with each mode normalized to
    integral(|eta|^2 dt) = T/2, or None when T is regular.  Line
    models carry one mode sin(omega t); the magnetic plane carries the
    rotated pair.
    """
    kind = models.caustic_index(model, T)
    if not kind.caustic:
        return None
    t = np.linspace(0.0, T, n)
    omega = model.omega
    s = np.sin(omega * t)
    if isinstance(model, (Oscillator, ForcedOscillator)):
        return t, [s]
    if isinstance(model, MagneticPlane):
        c = np.cos(omega * t)
        return t, [np.column_stack([c * s, -s * s]), np.column_stack([s * s, c * s])]
    raise UnsupportedModelError(type(model).__name__)
