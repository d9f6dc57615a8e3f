"""Exception types shared across the package."""


class MaslovError(Exception):
    """Base class for errors raised by this package."""


class UnsupportedModelError(MaslovError):
    """The operation is not defined for the given system."""


class CausticTimeError(MaslovError):
    """A closed-form expression was requested at a focal time where it degenerates."""


class ZeroModeError(MaslovError):
    """A fluctuation mode with vanishing eigenvalue has no Fresnel factor."""


class EndpointConjugateError(MaslovError):
    """The final endpoint is conjugate to the start; the index is ill-defined."""


class SolverConvergenceError(MaslovError):
    """The two-point boundary solver failed to converge."""


class DomainTooSmallError(MaslovError):
    """The wave-function grid does not contain the state to the required accuracy."""


class ConfigurationError(MaslovError):
    """Inconsistent run configuration."""
