"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a basic contract (non-finite values, bad shape, bad kind)."""


class SampleTooSmallError(ValidationError):
    """The sample size is below the minimum the estimator requires."""


class MatrixKindError(ValidationError):
    """A distance matrix of the wrong kind was passed to a centering operation."""
