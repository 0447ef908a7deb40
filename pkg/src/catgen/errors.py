"""Shared exception and warning types."""


class CatgenError(Exception):
    """Base class for package-specific failures."""


class DomainError(CatgenError, ValueError):
    """Parameter outside the supported domain."""


class TruncationError(CatgenError):
    """Fock-space cutoff too small for the requested tolerance."""


class DegenerateError(CatgenError):
    """Gaussian reduction produced a non-normalizable exponent."""


class ZeroProbability(CatgenError):
    """Conditional quantity requested for an event of probability zero."""


class DimensionError(CatgenError, ValueError):
    """Mismatched or insufficient Hilbert-space dimensions."""


class WindowError(CatgenError, ValueError):
    """Pulse does not fit inside the simulated time window."""


class BondExplosion(CatgenError):
    """MPS bond dimension exceeded the configured ceiling."""


class NoRoot(CatgenError):
    """Root bracketing failed; no solution in the search interval."""


class NoSolution(CatgenError):
    """Target value lies outside the achievable range."""


class ResolutionError(CatgenError, ValueError):
    """Spatial grid too short or too coarse for the requested accuracy."""


class NonFiniteObjective(CatgenError):
    """Objective function returned NaN or infinity."""


class IncompleteEvolution(UserWarning):
    """Residual excitation left behind after a scheduled release."""


class DegenerateSpectrum(UserWarning):
    """Top eigenvalues nearly tied; mode selection may be arbitrary."""
