"""Exception types shared across the package."""


class SolverError(Exception):
    """Base class for all swetbc errors."""


class ConfigurationError(SolverError):
    """Invalid grid, physics, or run configuration."""


class BlowUpError(SolverError):
    """A field became NaN/Inf while advancing the solution.

    Attributes
    ----------
    step : int
        Time index at which the non-finite value was produced.
    """

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"solution blew up (non-finite field) at step {step}")


class DryStateError(SolverError):
    """Total wave height phi dropped to zero or below.

    The model assumes phi > 0 everywhere it divides by phi (interior
    momentum update) and on transmission boundary nodes.
    """

    def __init__(self, step, where, message=None):
        self.step = step
        self.where = where
        super().__init__(message or f"phi <= 0 ({where}) at step {step}")


class UsageError(SolverError):
    """An API was called with inconsistent arguments (e.g. mismatched series)."""
