"""Select the compiled numeric core at import time, falling back to NumPy.

Set MASLOV_FORCE_PYTHON=1 to skip the compiled extension (used by the
benchmark and the backend equivalence tests).
"""

import os

if os.environ.get("MASLOV_FORCE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

tridiag_count_below = _impl.tridiag_count_below
apply_quadratic_kernel = _impl.apply_quadratic_kernel
rk4_linear_second_order = _impl.rk4_linear_second_order
