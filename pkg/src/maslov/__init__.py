"""Propagators for quadratic Lagrangians with focal-point phase corrections.

Four independent evaluation routes (closed form, Fourier-mode product,
endpoint-Hessian semiclassics, exact spectral sum) plus the variational
machinery behind them: second-variation spectra, Jacobi fields,
conjugate points and index counting.
"""

from ._backend import BACKEND
from .errors import (
    CausticTimeError,
    ConfigurationError,
    DomainTooSmallError,
    EndpointConjugateError,
    MaslovError,
    SolverConvergenceError,
    UnsupportedModelError,
    ZeroModeError,
)
from .models import (
    CausticIndex,
    Free,
    ForcedOscillator,
    MagneticPlane,
    NumericConfig,
    Oscillator,
    Potential1D,
    caustic_index,
    dimension,
    frequency,
    period,
)
from .classical import (
    Degenerate,
    NoSolution,
    Path,
    Unique,
    action_closed,
    action_numeric,
    mixed_hessian_analytic,
    principal_function_hessian,
    solve_boundary,
)
from .variation import (
    AssembledOperator,
    SpectrumReport,
    assemble_operator,
    eigenvalues_analytic,
    inertia,
    leading_eigenvalues,
    null_mode,
    spectrum_report,
)
from .morse import JacobiBasis, MorseReport, conjugate_points, jacobi_basis, morse_index
from .modeproduct import (
    ModeProductResult,
    euler_product,
    free_eigenvalues,
    fresnel_factor,
    mode_product_kernel,
    reduced_propagator,
)
from .propagators import (
    CausticDelta,
    Regular,
    as_complex,
    forced_kernel,
    free_kernel,
    kernel_for_model,
    magnetic_kernel,
    naive_kernel,
    oscillator_kernel,
    van_vleck_kernel,
)
from .spectral import (
    WaveFunction,
    continued_kernel,
    default_grid,
    evolve,
    evolve_plane,
    evolve_spectral,
    gaussian,
    generating_function,
    hermite_psi,
    plane_gaussian,
    plane_overlap,
    quarter_period_fourier_check,
    semigroup_check,
    spectral_kernel,
    symmetric_grid,
)

__version__ = "0.1.0"
