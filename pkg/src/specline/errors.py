"""Exception and warning types shared across the package."""


class SpeclineError(Exception):
    """Base class for all package-specific errors."""


class EigenSolverError(SpeclineError):
    """Dense eigensolver failed to converge.

    Carries the dimension of the offending matrix for diagnostics.
    """

    def __init__(self, dim):
        self.dim = dim
        super().__init__(f"eigensolver failed to converge on a {dim}x{dim} matrix")


class NotPsdError(SpeclineError):
    """A matrix required to be positive semidefinite is not.

    The most negative eigenvalue is kept on the exception.
    """

    def __init__(self, min_eig, tol):
        self.min_eig = float(min_eig)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not positive semidefinite: eigenvalue {min_eig:.6e} "
            f"below -{tol:.1e}"
        )


class SingularPencilError(SpeclineError):
    """The right-hand matrix of a generalized eigenproblem is numerically singular."""


class InteriorPointError(SpeclineError):
    """Block-Toeplitz matrix is numerically full rank.

    Full-rank (interior) covariance sequences admit infinitely many
    representations, so no decomposition is attempted.
    """


class NonUnimodularError(SpeclineError):
    """A pencil eigenvalue sits too far from the unit circle.

    Signals a degenerate instance where the shift structure of the rank
    factor has broken down.
    """

    def __init__(self, deviation, tol):
        self.deviation = float(deviation)
        self.tol = float(tol)
        super().__init__(
            f"eigenvalue modulus deviates from 1 by {deviation:.3e} "
            f"(tolerance {tol:.1e}); instance appears degenerate"
        )


class NotConvergedError(SpeclineError):
    """Iterative solver hit its iteration cap before reaching its residual targets."""

    def __init__(self, iterations, primal_residual, dual_residual):
        self.iterations = int(iterations)
        self.primal_residual = float(primal_residual)
        self.dual_residual = float(dual_residual)
        super().__init__(
            f"solver stopped after {iterations} iterations with residuals "
            f"primal={primal_residual:.3e}, dual={dual_residual:.3e}"
        )


class DivergedError(SpeclineError):
    """Solver iterates became non-finite."""


class MarginalRankWarning(UserWarning):
    """Numerical rank decision is marginal.

    Raised when a discarded eigenvalue lies within a decade of the rank
    threshold, so the reported atom count may be sensitive to the choice
    of epsilon.
    """
