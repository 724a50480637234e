"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`ComplementEigError`, so callers can catch the whole family at once.
"""


class ComplementEigError(Exception):
    """Base class for all library errors."""


class InvalidPermutationError(ComplementEigError, ValueError):
    """Input is not a bijection on ``range(s)``."""


class InvalidIndexError(ComplementEigError, ValueError):
    """Index out of range, or more indices than the ambient dimension."""


class ShapeError(ComplementEigError, ValueError):
    """Matrix or index-set sizes are incompatible."""


class OrderError(ComplementEigError, ValueError):
    """Complement order outside ``r <= s <= n``."""


class DimensionGuardError(ComplementEigError, ValueError):
    """Matrix too large for the requested (factorial or tensor) path."""


class HermiticityError(ComplementEigError, ValueError):
    """Matrix is not Hermitian within tolerance."""


class ConvergenceError(ComplementEigError, RuntimeError):
    """An iterative step or root polish failed to reach its tolerance."""


class MultiplicityError(ComplementEigError, RuntimeError):
    """Eigenvalue multiplicity inconsistent with the requested extraction path.

    Raised when all adjugate columns vanish on the non-degenerate path, when
    the numerical rank of the reduced complement differs from the expected
    multiplicity, or when no complement survives the vanishing test.
    """


class ParameterError(ComplementEigError, ValueError):
    """Physical parameters outside the domain of a worked example."""
