"""Exception hierarchy shared by the solver modules and the CLI."""


class DKPError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DKPError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(DKPError):
    """The metric is degenerate at the requested radius."""

    def __init__(self, r, message=None):
        self.r = r
        super().__init__(message or f"metric is degenerate at r={r!r}")


class NoRealRootError(DKPError):
    """The quantization condition has no sign change on the scan window."""

    def __init__(self, window, message=None):
        self.window = window
        lo, hi = window
        super().__init__(message or f"no real root of the quantization condition on E in [{lo:g}, {hi:g}]")


class NumericError(DKPError, ArithmeticError):
    """A numerical procedure (quadrature, bisection) failed to converge."""


class ResolutionError(NumericError):
    """The finite-difference grid does not resolve the requested eigenvalue."""


class OracleDisagreementError(DKPError):
    """The finite-difference oracle found no root near the closed-form energy."""

    def __init__(self, E_guess, message=None):
        self.E_guess = E_guess
        super().__init__(message or f"oracle found no sign change near E={E_guess!r}")
