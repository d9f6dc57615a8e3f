# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot numeric loops.

Mirrors ``maslov._kernels_py`` exactly; see that module for the
contracts.
"""

import numpy as np

from libc.math cimport cos, sin


def tridiag_count_below(diag, off, double shift):
    cdef double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[::1] e = np.ascontiguousarray(off, dtype=np.float64)
    cdef Py_ssize_t i, n = d.shape[0]
    cdef int count = 0
    cdef double q = d[0] - shift
    if q < 0.0:
        count += 1
    for i in range(1, n):
        if q == 0.0:
            q = -1e-300
        q = (d[i] - shift) - e[i - 1] * e[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def apply_quadratic_kernel(wpsi, x, double p, double q):
    cdef double complex[::1] src = np.ascontiguousarray(wpsi, dtype=np.complex128)
    cdef double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t i, j, n = xs.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex acc, w
    cdef double theta, xj
    # fold the source-side quadratic phase once
    pre_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] pre = pre_arr
    for i in range(n):
        theta = p * xs[i] * xs[i]
        pre[i] = src[i] * (cos(theta) + 1j * sin(theta))
    for j in range(n):
        xj = xs[j]
        acc = 0.0
        for i in range(n):
            theta = q * xs[i] * xj
            acc = acc + pre[i] * (cos(theta) + 1j * sin(theta))
        theta = p * xj * xj
        out[j] = acc * (cos(theta) + 1j * sin(theta))
    return out_arr


def rk4_linear_second_order(w_half, double dt, double xi0, double v0):
    cdef double[::1] w = np.ascontiguousarray(w_half, dtype=np.float64)
    cdef Py_ssize_t k, n = (w.shape[0] - 1) // 2
    xi_arr = np.empty(n + 1)
    vel_arr = np.empty(n + 1)
    cdef double[::1] xi = xi_arr
    cdef double[::1] vel = vel_arr
    cdef double x = xi0, v = v0
    cdef double w0, wm, w1, k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v
    xi[0] = x
    vel[0] = v
    for k in range(n):
        w0 = w[2 * k]
        wm = w[2 * k + 1]
        w1 = w[2 * k + 2]
        k1x = v
        k1v = -w0 * x
        k2x = v + 0.5 * dt * k1v
        k2v = -wm * (x + 0.5 * dt * k1x)
        k3x = v + 0.5 * dt * k2v
        k3v = -wm * (x + 0.5 * dt * k2x)
        k4x = v + dt * k3v
        k4v = -w1 * (x + dt * k3x)
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        xi[k + 1] = x
        vel[k + 1] = v
    return xi_arr, vel_arr
