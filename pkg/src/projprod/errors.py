"""Exception types shared across the library."""


class ProjProdError(Exception):
    """Base class for every library-specific error."""


class MatrixInputError(ProjProdError, ValueError):
    """Input is not a finite numeric matrix of the expected shape."""


class AmbientMismatchError(ProjProdError, ValueError):
    """Operands live in different ambient dimensions."""


class NotPSDError(ProjProdError, ValueError):
    """A matrix required to be Hermitian PSD has an eigenvalue below the floor."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NotProjectionError(ProjProdError, ValueError):
    """A matrix required to be an orthogonal projection fails validation."""


class NotPartialIsometryError(ProjProdError, ValueError):
    """Singular values are too far from {0, 1} to repair."""


class NotInXError(ProjProdError, ValueError):
    """Operator is not a product of two orthogonal projections."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotInYError(ProjProdError, ValueError):
    """Operator is not of the form P*Q*P for orthogonal projections P, Q."""


class NotInJXError(ProjProdError, ValueError):
    """Partial isometry is not the isometric part of any projection product."""


class GeometryError(ProjProdError, ValueError):
    """Subspaces fail a required position (e.g. not complementary)."""

    def __init__(self, message, intersection_dim=None):
        super().__init__(message)
        self.intersection_dim = intersection_dim


class InvalidParametrizationError(ProjProdError, ValueError):
    """Parametrization data violates one of its invariants.

    The message names the failing condition.
    """


class InvariantViolationError(ProjProdError, ValueError):
    """A structured result object fails its own consistency checks."""


class NumericalInconsistencyError(ProjProdError, ArithmeticError):
    """Two independent computations of the same fact disagree.

    Signals a tolerance conflict, not a usage error.
    """
