"""Exception types shared across the package."""


class PeriodRatioError(ValueError):
    """Walking-step and surface-motion periods are not rationally matched.

    Raised when N1 * T_step does not equal N2 * T_drs to within the
    validation tolerance.  ``residual`` carries the relative mismatch.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class InsufficientDataError(ValueError):
    """A trace or window is too short for the requested computation."""


class NotStabilizableError(ValueError):
    """Discrete Lyapunov equation has no solution (spectral radius >= 1)."""


class ConfigError(ValueError):
    """Scenario configuration text failed to parse or validate."""
