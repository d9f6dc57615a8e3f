"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line (run with ``pytest tests/test_acceptance.py -v -s`` to see them).

Every tolerance is fixed here, not tuned at runtime.
"""

import cmath
import math

import numpy as np

from maslov import (
    CausticDelta,
    ForcedOscillator,
    MagneticPlane,
    Oscillator,
    as_complex,
    euler_product,
    evolve,
    evolve_plane,
    evolve_spectral,
    forced_kernel,
    free_kernel,
    gaussian,
    magnetic_kernel,
    mode_product_kernel,
    morse_index,
    oscillator_kernel,
    plane_gaussian,
    plane_overlap,
    principal_function_hessian,
    quarter_period_fourier_check,
    reduced_propagator,
    semigroup_check,
    spectral_kernel,
    spectrum_report,
    symmetric_grid,
    van_vleck_kernel,
    continued_kernel,
)
from maslov.cli import interference_report

OSC = Oscillator(1.0, 1.0)
MAG = MagneticPlane(1.0, 1.0)
TAU = 2.0 * math.pi
T_GRID = (0.3, 1.0, 2.5, 4.0, 7.0)
X_GRID = (-1.5, 0.0, 0.7, 2.0)
QUAD_GRID = symmetric_grid(12.0, 4096)


def report(num, name, ok, detail=""):
    print(f"\nacceptance {num:02d} [{name}]: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} failed {detail}"


def test_criterion_01_maslov_three_way_consistency():
    ts = [t for t in np.linspace(0.05, 5 * TAU - 0.05, 240) if abs(math.sin(t)) >= 1e-3]
    assert len(ts) >= 200
    ts = ts[:200]
    bad = []
    for T in ts:
        expected = math.floor(T / math.pi)
        counts = (
            reduced_propagator(1.0, 1.0, 1.0, T).negative_count,
            spectrum_report(OSC, T, n_grid=2048).n_negative,
            morse_index(OSC, T).morse_index,
        )
        if any(c != expected for c in counts):
            bad.append((T, counts, expected))
    report(1, "maslov three-way consistency", not bad,
           f"({len(ts)} time points)" if not bad else f"mismatches: {bad[:3]}")


def test_criterion_02_kernel_four_way_agreement():
    worst_mp, worst_vv = 0.0, 0.0
    for T in T_GRID:
        for x1 in X_GRID:
            for x2 in X_GRID:
                closed = as_complex(oscillator_kernel(1, 1, 1, x1, x2, T))
                vv = van_vleck_kernel(OSC, x1, x2, T)
                mp = mode_product_kernel(1, 1, 1, x1, x2, T, n=10**4)
                worst_vv = max(worst_vv, abs(vv - closed) / abs(closed))
                worst_mp = max(worst_mp, abs(mp - closed) / abs(closed))
    ok = worst_mp <= 1e-6 and worst_vv <= 1e-8
    report(2, "kernel four-way agreement", ok,
           f"(mode product {worst_mp:.2e} <= 1e-6, van vleck {worst_vv:.2e} <= 1e-8)")


def test_criterion_03_spectral_oracle_at_complexified_time():
    worst = 0.0
    for T in T_GRID:
        for x1 in X_GRID:
            for x2 in X_GRID:
                spec = spectral_kernel(x1, x2, T, n_max=400, eta=0.1)
                closed = continued_kernel(x1, x2, T, eta=0.1)
                worst = max(worst, abs(spec - closed) / abs(closed))
    report(3, "spectral oracle at complexified time", worst <= 1e-8,
           f"(worst relative {worst:.2e} <= 1e-8)")


def test_criterion_04_euler_product():
    worst = 0.0
    for x in (0.5, math.pi / 2, 2.0, 4.0, 8.0):
        exact = abs(math.sin(x)) / x
        worst = max(worst, abs(euler_product(x, 10**4) - exact) / exact)
    half_pi = euler_product(math.pi / 2, 10**4)
    ok = worst <= 1e-6 and abs(half_pi - 0.636620) <= 1e-6
    report(4, "euler product with tail", ok,
           f"(worst relative {worst:.2e}, pi/2 value {half_pi:.6f})")


def test_criterion_05_caustic_delta_limit():
    g1 = gaussian(QUAD_GRID, x0=-0.4, sigma=0.8)
    g2 = gaussian(QUAD_GRID, x0=0.6, p0=-0.2, sigma=0.7)
    worst = 0.0
    for N in (1, 2):
        target = g1.overlap(g2.reflected()) if N % 2 else g1.overlap(g2)
        target = cmath.exp(-1j * math.pi * N / 2) * target
        for sign in (1.0, -1.0):
            got = g1.overlap(evolve_spectral(OSC, g2, N * math.pi + sign * 1e-4))
            worst = max(worst, abs(got - target))
    report(5, "caustic delta limit", worst <= 1e-3, f"(worst defect {worst:.2e} <= 1e-3)")


def test_criterion_06_semigroup_and_quarter_period():
    psi = gaussian(QUAD_GRID, x0=0.5, p0=0.2, sigma=0.8)
    d1 = semigroup_check(OSC, psi, TAU / 8, TAU / 8)
    d2 = semigroup_check(OSC, psi, TAU / 6, TAU / 3)
    d3 = quarter_period_fourier_check(OSC, psi)
    twice = evolve(OSC, evolve(OSC, psi, TAU / 4), TAU / 4)
    target = cmath.exp(-1j * math.pi / 2) * psi.reflected().samples
    d4 = math.sqrt(float(np.sum(psi.weights * np.abs(twice.samples - target) ** 2)))
    ok = max(d1, d2, d3, d4) <= 1e-6
    report(6, "semigroup and quarter period", ok,
           f"(defects {d1:.2e}, {d2:.2e}, {d3:.2e}, {d4:.2e} <= 1e-6)")


def test_criterion_07_forced_oscillator():
    forced = ForcedOscillator(1.0, 1.0, 0.8)
    narrow = gaussian(QUAD_GRID, x0=0.2, sigma=0.3)
    quad = evolve(forced, narrow, 1.3)
    spec = evolve_spectral(forced, narrow, 1.3)
    d_route = math.sqrt(float(np.sum(quad.weights * np.abs(quad.samples - spec.samples) ** 2)))

    exact_zero_force = all(
        as_complex(forced_kernel(1, 1, 0.0, 1, x1, x2, T))
        == as_complex(oscillator_kernel(1, 1, 1, x1, x2, T))
        for T in (0.9, 4.0)
        for x1, x2 in ((0.0, 0.0), (-0.8, 1.1))
    )

    caustic_quad = evolve(forced, narrow, math.pi)  # shifted-parity branch
    caustic_spec = evolve_spectral(forced, narrow, math.pi)
    d_caustic = math.sqrt(
        float(np.sum(narrow.weights * np.abs(caustic_quad.samples - caustic_spec.samples) ** 2))
    )
    ok = d_route <= 1e-5 and exact_zero_force and d_caustic <= 1e-3
    report(7, "forced oscillator shift identity", ok,
           f"(route defect {d_route:.2e} <= 1e-5, f=0 exact: {exact_zero_force}, "
           f"caustic {d_caustic:.2e} <= 1e-3)")


def test_criterion_08_magnetic_field():
    doubling = all(
        spectrum_report(MAG, T, n_grid=384).n_negative
        == 2 * spectrum_report(OSC, T, n_grid=384).n_negative
        for T in (2.0, 4.0, 7.0, 9.0)
    )

    worst_det = 0.0
    for T in (0.7, 2.0, 4.5):
        H = principal_function_hessian(MAG, (0.2, -0.1), (0.5, 0.4), T)
        exact = 1.0 / math.sin(T) ** 2
        worst_det = max(worst_det, abs(abs(np.linalg.det(H)) - exact) / exact)

    g = symmetric_grid(8.0, 96)
    P = plane_gaussian(g, g, x0=0.3, y0=-0.2, sigma=1.0)
    norm = plane_overlap(P, P, g, g).real
    # the focal-time kernel itself is the symbolic flip...
    delta = magnetic_kernel(1, 1, 1, (0, 0), (0, 0), math.pi)
    symbolic = delta == CausticDelta(N=1, parity=1, phase=complex(-1.0), dimension=2)
    # ...and two composed well-resolved half-turn quadratures reproduce it
    P2 = evolve_plane(MAG, evolve_plane(MAG, P, g, g, math.pi / 2), g, g, math.pi / 2)
    d_packet = abs(plane_overlap(P, P2, g, g) - (-1.0) * norm)
    ok = doubling and worst_det <= 1e-6 and symbolic and d_packet <= 1e-3
    report(8, "magnetic field", ok,
           f"(doubling: {doubling}, det defect {worst_det:.2e} <= 1e-6, "
           f"full-turn packet defect {d_packet:.2e} <= 1e-3)")


def test_criterion_09_morse_index_jump_law():
    ok = True
    detail = []
    for model, T, nu in ((OSC, 3.5 * math.pi, 1), (MAG, 2.5 * math.pi, 2)):
        rep = morse_index(model, T)
        for tc, mult in rep.conjugate_times:
            jump = rep.index_at(tc + 1e-4) - rep.index_at(tc - 1e-4)
            ok = ok and jump == nu == mult
        detail.append(f"{len(rep.conjugate_times)} crossings of nu={nu}")
    report(9, "morse index jump law", ok, "(" + "; ".join(detail) + ")")


def test_criterion_10_free_limits():
    soft = 0.0
    for x1 in X_GRID:
        for x2 in X_GRID:
            a = as_complex(oscillator_kernel(1, 1e-6, 1, x1, x2, 1.7))
            b = free_kernel(1, 1, x1, x2, 1.7)
            soft = max(soft, abs(a - b) / abs(b))
    ratio_defect = abs(reduced_propagator(1.0, 1e-6, 1.0, 1.3).ratio - 1.0)
    ok = soft <= 1e-4 and ratio_defect <= 1e-6
    report(10, "free limits", ok,
           f"(kernel {soft:.2e} <= 1e-4, ratio defect {ratio_defect:.2e} <= 1e-6)")


def test_criterion_11_interference_demo():
    worst = 0.0
    for t_b, expected in ((0.3 * TAU, 0.0), (0.6 * TAU, -math.pi / 2), (1.1 * TAU, -math.pi)):
        rep = interference_report(1.0, 1.0, 1.0, 0.25 * TAU, t_b, grid=4096)
        got = rep["relative_maslov_phase"]
        defect = abs((got - expected + math.pi) % (2 * math.pi) - math.pi)
        worst = max(worst, defect)
    report(11, "interference phase demo", worst <= 1e-3,
           f"(worst phase defect {worst:.2e} <= 1e-3)")
