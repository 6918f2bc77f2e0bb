"""Exception types raised by spdgeom."""


class DimensionMismatchError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


class GroupMembershipError(ValueError):
    pass


class BaseMismatchError(ValueError):
    """Tangent vectors attached to different base points were combined."""


class EigenSolverError(ArithmeticError):
    """The Jacobi iteration did not converge.

    ``residual`` is the off-diagonal Frobenius mass left after the last sweep,
    relative to the Frobenius norm of the input.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual
