"""Sample and result containers used by every estimator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

ESTIMATORS = (
    "vstat_dcov2",
    "vstat_dcor2",
    "unbiased_dcov2",
    "bias_corrected_dcor2",
    "sirs",
)
METHODS = ("direct", "fast")


def as_finite_vector(values, name="values") -> np.ndarray:
    """Convert to a 1-d float64 array, rejecting empty or non-finite input."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must contain at least one element")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValidationError(f"{name}[{bad}] is not finite")
    return arr


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Two equal-length sequences of finite reals, paired by index."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = as_finite_vector(self.x, "x")
        y = as_finite_vector(self.y, "y")
        if x.size != y.size:
            raise ValidationError(
                f"x and y must have equal length ({x.size} != {y.size})"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class DependenceEstimate:
    """A scalar dependence statistic together with how it was computed.

    ``estimator`` is one of ``ESTIMATORS`` and ``method`` one of ``METHODS``.
    ``vstat_dcov2`` is nonnegative up to roundoff and ``vstat_dcor2`` lies in
    [0, 1]; ``unbiased_dcov2`` may legitimately be negative.
    """

    value: float
    estimator: str
    method: str
    n: int
