"""Command-line front end.

Subcommands
-----------
kernel     one propagator evaluation (JSON)
scan       propagator methods over a time range (CSV)
morse      conjugate points, index and inertia agreement (JSON)
interfere  two-arm packet interference with phase extraction (JSON + CSV)

Output is deterministic: fixed field order, 15 significant digits, LF
line endings, no timestamps.  MASLOV_DEFAULT_GRID overrides the
default inertia grid.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from . import classical, models, modeproduct, morse, propagators, spectral, variation
from .errors import ConfigurationError, MaslovError
from .models import Free, ForcedOscillator, MagneticPlane, Oscillator, Potential1D
from .propagators import CausticDelta, Regular

METHODS = ("closed", "modes", "vanvleck", "oracle")
MAGNETIC_INERTIA_GRID = 384  # dense-factorization cap for the block operator


def fmt(v) -> str:
    return format(float(v), ".15g")


def rounded(v) -> float:
    """Float squeezed through the 15-significant-digit format."""
    return float(fmt(v))


def wrap_angle(theta: float) -> float:
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


def default_grid() -> int:
    value = os.environ.get("MASLOV_DEFAULT_GRID", "")
    return int(value) if value else models.DEFAULTS.grid_points


def build_model(args) -> models.SystemModel:
    if args.model == "free":
        return Free(args.m, args.hbar)
    if args.model == "osc":
        return Oscillator(args.m, args.omega, args.hbar)
    if args.model == "forced":
        return ForcedOscillator(args.m, args.omega, args.f, args.hbar)
    if args.model == "magnetic":
        return MagneticPlane(args.m, args.omega, args.hbar)
    if args.model == "potential":
        if not args.potential:
            raise ConfigurationError("--model potential needs --potential EXPR")
        expr = args.potential
        V = lambda x, _e=expr: eval(_e, {"__builtins__": {}}, {"x": x, "np": np, "pi": math.pi})
        return Potential1D(args.m, V, hbar=args.hbar)
    raise ConfigurationError(f"unknown model {args.model}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# kernel


def _endpoints(args, model):
    if isinstance(model, MagneticPlane):
        return (args.x1, args.y1), (args.x2, args.y2)
    return args.x1, args.x2


def _potential_path(model, x1, x2, T):
    sol = classical.solve_boundary(model, x1, x2, T)
    if not isinstance(sol, classical.Unique):
        raise ConfigurationError("no unique classical path for these endpoints")
    return sol.path


def kernel_record(model, x1, x2, T: float) -> dict:
    if isinstance(model, Potential1D):
        path = _potential_path(model, x1, x2, T)
        N = morse.morse_index(model, T, path=path).morse_index
        value = Regular(propagators.van_vleck_kernel(model, x1, x2, T, n_caustics=N))
    else:
        value = propagators.kernel_for_model(model, x1, x2, T)
    if isinstance(value, CausticDelta):
        rec = {
            "caustic": True,
            "N": value.N,
            "parity": value.parity,
            "phase": rounded(cmath.phase(value.phase)),
        }
        if value.shift:
            rec["shift"] = rounded(value.shift)
        return rec
    v = value.value
    return {
        "re": rounded(v.real),
        "im": rounded(v.imag),
        "modulus": rounded(abs(v)),
        "phase": rounded(cmath.phase(v)),
        "maslov_N": models.caustic_index(model, T).N if models.frequency(model) else 0,
    }


def cmd_kernel(args) -> int:
    model = build_model(args)
    x1, x2 = _endpoints(args, model)
    record = kernel_record(model, x1, x2, args.t)
    _emit(json.dumps(record) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# scan


def _method_value(method: str, model, x1, x2, T: float, args):
    """Complex kernel value for one scan cell, or None at a caustic."""
    caustic = models.frequency(model) is not None and models.caustic_index(model, T).caustic
    if caustic:
        return None
    if method == "closed":
        return propagators.as_complex(propagators.kernel_for_model(model, x1, x2, T))
    if method == "vanvleck":
        return propagators.van_vleck_kernel(model, x1, x2, T)
    if method == "modes":
        if isinstance(model, MagneticPlane) or isinstance(model, Potential1D):
            raise ConfigurationError("modes method needs a line model")
        reduced = modeproduct.reduced_propagator(
            model.m, models.frequency(model) or 0.0, model.hbar, T, args.modes
        ).reduced_propagator
        return reduced * cmath.exp(1j * classical.action_closed(model, x1, x2, T) / model.hbar)
    if method == "oracle":
        if not isinstance(model, Oscillator):
            raise ConfigurationError("oracle method supports the oscillator only")
        return spectral.spectral_kernel(
            x1, x2, T, n_max=args.hermite, eta=args.eta,
            m=model.m, omega=model.omega, hbar=model.hbar,
        )
    raise ConfigurationError(f"unknown method {method}")


def cmd_scan(args) -> int:
    model = build_model(args)
    if isinstance(model, Potential1D):
        raise ConfigurationError("scan supports the closed-form models; use kernel/morse")
    x1, x2 = _endpoints(args, model)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    ts = np.linspace(args.t_min, args.t_max, args.steps)
    has_freq = models.frequency(model) is not None

    inertia_grid = args.grid
    if isinstance(model, MagneticPlane):
        inertia_grid = min(inertia_grid, MAGNETIC_INERTIA_GRID)

    caustic_flags = []
    n_negatives = []
    morse_indices = []
    for T in ts:
        caustic = has_freq and models.caustic_index(model, T).caustic
        caustic_flags.append(caustic)
        if caustic:
            n_negatives.append(None)
            morse_indices.append(None)
        else:
            n_negatives.append(variation.spectrum_report(model, T, inertia_grid).n_negative)
            morse_indices.append(morse.morse_index(model, T, n_steps=2048).morse_index)

    values = {m: [None if c else _method_value(m, model, x1, x2, T, args)
                  for T, c in zip(ts, caustic_flags)] for m in methods}
    unwrapped = {}
    for m in methods:
        regular = [v for v in values[m] if v is not None]
        phases = iter(np.unwrap([cmath.phase(v) for v in regular])) if regular else iter(())
        unwrapped[m] = [None if v is None else next(phases) for v in values[m]]

    tname = "t[1/omega]" if has_freq else "t"
    lines = [f"{tname},method,re,im,modulus,phase_unwrapped,maslov_N,n_negative,morse_index,caustic"]
    for i, T in enumerate(ts):
        N = models.caustic_index(model, T).N if has_freq else 0
        for m in methods:
            v = values[m][i]
            if v is None:
                cells = ["", "", "", "", fmt(N), "", "", "1"]
            else:
                cells = [
                    fmt(v.real), fmt(v.imag), fmt(abs(v)), fmt(unwrapped[m][i]),
                    fmt(N), fmt(n_negatives[i]), fmt(morse_indices[i]), "0",
                ]
            lines.append(",".join([fmt(T), m] + cells))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# morse


def cmd_morse(args) -> int:
    model = build_model(args)
    path = None
    if isinstance(model, Potential1D):
        path = _potential_path(model, args.x1, args.x2, args.t)
    report = morse.morse_index(model, args.t, path=path)
    inertia_grid = args.grid
    if isinstance(model, MagneticPlane):
        inertia_grid = min(inertia_grid, MAGNETIC_INERTIA_GRID)
    n_negative = variation.spectrum_report(model, args.t, inertia_grid, path=path).n_negative
    record = {
        "conjugate_times": [rounded(t) for t, _ in report.conjugate_times],
        "multiplicities": [mult for _, mult in report.conjugate_times],
        "morse_index": report.morse_index,
        "inertia_negative": n_negative,
        "agreement": report.morse_index == n_negative,
    }
    _emit(json.dumps(record) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# interfere


def _arm_value(pref_caustic, pref_smooth, p, q, psi, target, sigma, x0, p0, hbar):
    """Quadrature value of the propagated packet at the classical endpoint,
    together with its analytic value and the analytic smooth phase."""
    x = psi.x
    kernel_row = np.exp(1j * (p * (x * x + target * target) + q * x * target))
    v = complex(pref_caustic * pref_smooth * np.sum(psi.weights * psi.samples * kernel_row))
    alpha = 1.0 / (4.0 * sigma**2) - 1j * p
    beta = x0 / (2.0 * sigma**2) + 1j * p0 / hbar + 1j * q * target
    gamma = -(x0**2) / (4.0 * sigma**2) - 1j * p0 * x0 / hbar
    integral = cmath.sqrt(math.pi / alpha) * cmath.exp(beta * beta / (4.0 * alpha) + gamma)
    packet_norm = (2.0 * math.pi * sigma**2) ** (-0.25)
    smooth = pref_smooth * cmath.exp(1j * p * target * target) * packet_norm * integral
    analytic = pref_caustic * smooth
    return v, analytic, smooth


def interference_report(
    m: float,
    omega: float,
    hbar: float,
    t_a: float,
    t_b: float,
    sigma: float = 0.05,
    x0: float = 0.0,
    p0: float = 0.0,
    grid: int = 4096,
) -> dict:
    """Split a Gaussian packet over a free reference arm (duration t_a)
    and an oscillator arm (duration t_b); read the extra phase of each
    arm at its classical endpoint after dividing out the analytic
    smooth (dynamical + packet) phase.

    The residues step by -pi/2 per focal crossing of the oscillator
    arm; the reference arm never crosses one.
    """
    end_a = x0 + p0 * t_a / m
    end_b = x0 * math.cos(omega * t_b) + p0 / (m * omega) * math.sin(omega * t_b)
    if abs(end_a - end_b) > 1e-9 * (1.0 + abs(end_a)):
        raise ConfigurationError(
            f"arm endpoints differ: free {end_a:.6g} vs oscillator {end_b:.6g}"
        )

    halfwidth = max(12.0 * sigma + abs(x0), 0.5)
    psi = spectral.gaussian(spectral.symmetric_grid(halfwidth, grid), x0, p0, sigma, hbar)

    # free reference arm
    p_a = m / (2.0 * hbar * t_a)
    pref_a = math.sqrt(m / (2.0 * math.pi * hbar * t_a)) * propagators.ROOT_I_INV
    v_a, analytic_a, smooth_a = _arm_value(
        1.0, pref_a, p_a, -2.0 * p_a, psi, end_a, sigma, x0, p0, hbar
    )

    # oscillator arm
    kind = models.caustic_index(Oscillator(m, omega, hbar), t_b)
    s, c = math.sin(omega * t_b), math.cos(omega * t_b)
    p_b = m * omega * c / (2.0 * hbar * s)
    q_b = -m * omega / (hbar * s)
    pref_b = math.sqrt(m * omega / (2.0 * math.pi * hbar * abs(s))) * propagators.ROOT_I_INV
    caustic_factor = cmath.exp(-1j * math.pi * kind.N / 2.0)
    v_b, analytic_b, smooth_b = _arm_value(
        caustic_factor, pref_b, p_b, q_b, psi, end_b, sigma, x0, p0, hbar
    )

    residual_a = wrap_angle(cmath.phase(v_a) - cmath.phase(smooth_a))
    residual_b = wrap_angle(cmath.phase(v_b) - cmath.phase(smooth_b))
    relative = wrap_angle(residual_b - residual_a)
    return {
        "arms": [
            {
                "arm": "free-reference",
                "t": rounded(t_a),
                "maslov_N": 0,
                "endpoint": rounded(end_a),
                "phase_residual": rounded(residual_a),
                "quadrature_defect": rounded(abs(v_a / analytic_a - 1.0)),
            },
            {
                "arm": "oscillator",
                "t": rounded(t_b),
                "maslov_N": kind.N,
                "endpoint": rounded(end_b),
                "phase_residual": rounded(residual_b),
                "quadrature_defect": rounded(abs(v_b / analytic_b - 1.0)),
            },
        ],
        "relative_maslov_phase": rounded(relative),
        "caustics_crossed": kind.N,
        "recombined_intensity": rounded(abs(v_a + v_b) ** 2),
        "incoherent_intensity": rounded(abs(v_a) ** 2 + abs(v_b) ** 2),
        "interference_term": rounded(2.0 * (v_a.conjugate() * v_b).real),
    }


def cmd_interfere(args) -> int:
    model = build_model(args)
    if not isinstance(model, Oscillator):
        raise ConfigurationError("interfere needs --model osc")
    tau = models.period(model)
    t_a = args.t_a if args.t_a is not None else 0.25 * tau
    t_b = args.t_b if args.t_b is not None else 0.6 * tau
    report = interference_report(
        model.m, model.omega, model.hbar, t_a, t_b,
        sigma=args.sigma, x0=args.x0, p0=args.p0, grid=args.grid,
    )
    sys.stdout.write(json.dumps(report) + "\n")
    if args.out:
        halfwidth = args.halfwidth
        n = args.grid
        psi = spectral.gaussian(
            spectral.symmetric_grid(halfwidth, n), args.x0, args.p0, args.sigma, model.hbar
        )
        arm_a = spectral.evolve(Free(model.m, model.hbar), psi, t_a)
        arm_b = spectral.evolve(model, psi, t_b)
        lines = ["x,re_a,im_a,re_b,im_b,intensity"]
        both = arm_a.samples + arm_b.samples
        for xi, a, b, s in zip(arm_a.x, arm_a.samples, arm_b.samples, np.abs(both) ** 2):
            lines.append(",".join(fmt(v) for v in (xi, a.real, a.imag, b.real, b.imag, s)))
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maslov",
        description="Propagators for quadratic Lagrangians with focal-point phase corrections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, need_t):
        p.add_argument("--model", required=True,
                       choices=["free", "osc", "forced", "magnetic", "potential"])
        p.add_argument("--m", type=positive_float, default=1.0, help="mass (default 1)")
        p.add_argument("--omega", type=positive_float, default=1.0,
                       help="frequency; eB/2m for magnetic (default 1)")
        p.add_argument("--f", type=float, default=0.0, help="constant force (forced model)")
        p.add_argument("--hbar", type=positive_float, default=1.0)
        p.add_argument("--potential", default=None,
                       help="potential expression in x for --model potential, e.g. '0.5*x**2'")
        p.add_argument("--x1", type=float, default=0.0)
        p.add_argument("--x2", type=float, default=0.0)
        p.add_argument("--y1", type=float, default=0.0)
        p.add_argument("--y2", type=float, default=0.0)
        if need_t:
            p.add_argument("--t", type=positive_float, required=True, help="elapsed time")
        p.add_argument("--grid", type=int, default=default_grid(),
                       help="inertia / quadrature grid size")
        p.add_argument("--modes", type=int, default=models.DEFAULTS.mode_count,
                       help="mode-product truncation")
        p.add_argument("--hermite", type=int, default=models.DEFAULTS.hermite_terms,
                       help="spectral-sum truncation")
        p.add_argument("--eta", type=positive_float, default=models.DEFAULTS.damping_eta,
                       help="spectral damping")
        p.add_argument("--format", choices=["csv", "json"], default=None,
                       help="output format (informational; each command has a native one)")
        p.add_argument("--out", default=None, help="write output to PATH instead of stdout")

    p_kernel = sub.add_parser("kernel", help="evaluate one propagator (JSON)")
    add_common(p_kernel, need_t=True)
    p_kernel.set_defaults(func=cmd_kernel)

    p_scan = sub.add_parser("scan", help="scan methods over a time range (CSV)")
    add_common(p_scan, need_t=False)
    p_scan.add_argument("--t-min", type=positive_float, default=None)
    p_scan.add_argument("--t-max", type=positive_float, default=None)
    p_scan.add_argument("--steps", type=int, default=64)
    p_scan.add_argument("--methods", default="closed",
                        help="comma list from closed,modes,vanvleck,oracle")
    p_scan.set_defaults(func=cmd_scan)

    p_morse = sub.add_parser("morse", help="conjugate points and index (JSON)")
    add_common(p_morse, need_t=True)
    p_morse.set_defaults(func=cmd_morse)

    p_int = sub.add_parser("interfere", help="two-arm packet interference (JSON [+ CSV])")
    add_common(p_int, need_t=False)
    p_int.add_argument("--t-a", type=positive_float, default=None,
                       help="reference arm duration (default tau/4)")
    p_int.add_argument("--t-b", type=positive_float, default=None,
                       help="oscillator arm duration (default 0.6 tau)")
    p_int.add_argument("--sigma", type=positive_float, default=0.05, help="packet width")
    p_int.add_argument("--x0", type=float, default=0.0)
    p_int.add_argument("--p0", type=float, default=0.0)
    p_int.add_argument("--halfwidth", type=positive_float, default=24.0,
                       help="profile grid halfwidth for --out")
    p_int.set_defaults(func=cmd_interfere)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "scan":
        if args.t_min is None or args.t_max is None:
            parser.error("scan needs --t-min and --t-max")
        if args.steps < 2:
            parser.error("--steps must be >= 2")
        for token in args.methods.split(","):
            if token.strip() not in METHODS:
                parser.error(f"unknown method {token.strip()!r}")
    try:
        return args.func(args)
    except MaslovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
