"""Exception types shared across the package.

All of them subclass ValueError so callers that only care about
"bad input" can catch a single base.
"""


class DimensionError(ValueError):
    """A dimension is out of the supported range."""


class ShapeError(ValueError):
    """An array has the wrong shape, or a required symmetry is violated."""


class SingularMatrixError(ValueError):
    """A matrix that must be invertible is singular to working precision."""


class NotPositiveDefiniteError(ValueError):
    """A Gram matrix is not positive definite."""


class UnsupportedFamilyError(ValueError):
    """The operation is only defined for the two built-in algebra families."""
