"""NumPy/pure-Python implementations of the hot numeric loops.

Same signatures and semantics as the compiled module ``_kernels_c``;
used whenever the extension is unavailable (or forced off via the
MASLOV_FORCE_PYTHON environment variable).
"""

import numpy as np

_QUAD_CHUNK = 256


def tridiag_count_below(diag, off, shift):
    """Number of eigenvalues of the symmetric tridiagonal matrix below shift.

    Sturm-style LDL^T scan; exact zero pivots are nudged to a tiny
    negative value (boundary eigenvalues count as below).
    """
    d = [float(v) for v in np.asarray(diag)]
    e = [float(v) for v in np.asarray(off)]
    shift = float(shift)
    count = 0
    q = d[0] - shift
    if q < 0.0:
        count += 1
    for i in range(1, len(d)):
        if q == 0.0:
            q = -1e-300
        q = (d[i] - shift) - e[i - 1] * e[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def apply_quadratic_kernel(wpsi, x, p, q):
    """out[j] = sum_i wpsi[i] * exp(1j*(p*(x[i]^2 + x[j]^2) + q*x[i]*x[j])).

    Quadrature weights belong in wpsi.  Evaluated in chunks of target
    points to bound the size of the phase matrix.
    """
    wpsi = np.asarray(wpsi, dtype=np.complex128)
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    x2 = x * x
    source = wpsi * np.exp(1j * p * x2)
    out = np.empty(n, dtype=np.complex128)
    for lo in range(0, n, _QUAD_CHUNK):
        hi = min(lo + _QUAD_CHUNK, n)
        phase = np.exp(1j * q * x[lo:hi, None] * x[None, :])
        out[lo:hi] = np.exp(1j * p * x2[lo:hi]) * (phase @ source)
    return out


def rk4_linear_second_order(w_half, dt, xi0, v0):
    """Integrate xi'' = -w(t) xi with classic RK4.

    w_half samples the coefficient at half-step resolution:
    w_half[2k] = w(t_k), w_half[2k+1] = w(t_k + dt/2), total 2n+1
    values for n steps.  Returns (xi, v) on the n+1 step grid.
    """
    w = [float(v) for v in np.asarray(w_half)]
    n = (len(w) - 1) // 2
    xi = np.empty(n + 1)
    vel = np.empty(n + 1)
    x = float(xi0)
    v = float(v0)
    xi[0] = x
    vel[0] = v
    h = float(dt)
    for k in range(n):
        w0 = w[2 * k]
        wm = w[2 * k + 1]
        w1 = w[2 * k + 2]
        k1x = v
        k1v = -w0 * x
        k2x = v + 0.5 * h * k1v
        k2v = -wm * (x + 0.5 * h * k1x)
        k3x = v + 0.5 * h * k2v
        k3v = -wm * (x + 0.5 * h * k2x)
        k4x = v + h * k3v
        k4v = -w1 * (x + h * k3x)
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        xi[k + 1] = x
        vel[k + 1] = v
    return xi, vel
