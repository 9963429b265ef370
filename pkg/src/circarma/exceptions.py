"""Exception hierarchy shared by the solvers and the CLI."""

import numpy as np


class CircArmaError(Exception):
    """Base class for all domain errors raised by circarma."""


class NotPositiveError(CircArmaError, ValueError):
    """A symbol is not positive (definite) at some grid point.

    ``index`` is the grid index j (in -N+1..N) of the first offending point and
    ``point`` the corresponding value of zeta_j.
    """

    def __init__(self, what, index, N, value=None):
        self.index = int(index)
        self.point = complex(np.exp(1j * np.pi * index / N))
        self.value = value
        msg = f"{what} is not positive definite at zeta_{self.index} = {self.point:.6g}"
        if value is not None:
            msg += f" (value {value:.6g})"
        super().__init__(msg)


class InfeasibleError(CircArmaError):
    """The covariance data are not in the dual cone for the given period.

    ``direction`` holds the normalized coefficient vector the dual iterates
    escape along; it approximates a pseudo-polynomial nonnegative on the grid
    with nonpositive pairing against the data.
    """

    def __init__(self, message, direction=None, iterations=None):
        super().__init__(message)
        self.direction = direction
        self.iterations = iterations


class IndeterminateError(CircArmaError):
    """The solver neither converged nor produced an infeasibility certificate."""


class BoundaryError(CircArmaError):
    """An unregularized joint problem terminated on the boundary of the cone."""


class FactorizationOnCircleError(CircArmaError):
    """The symbol has a zero on the continuous unit circle."""


class DiscreteOnlyError(CircArmaError):
    """The symbol is positive on the grid but not on the whole unit circle."""


class DenseCapError(CircArmaError):
    """Dense materialization would exceed the configured size cap."""
