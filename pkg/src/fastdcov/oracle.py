"""Quadratic-time reference estimators built from explicit distance matrices.

Everything here materialises n-by-n matrices and is the ground truth the
O(n log n) implementations in :mod:`fastdcov.fast` are tested against.  To
avoid accidental memory exhaustion the matrix-allocating operations refuse
samples larger than ``DIRECT_SIZE_CAP`` unless ``allow_large=True``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MatrixKindError, SampleTooSmallError, ValidationError
from .sample import DependenceEstimate, PairedSample, as_finite_vector

# Refuse to allocate n*n matrices beyond this size unless explicitly allowed.
DIRECT_SIZE_CAP = 2**14

MATRIX_KINDS = ("raw", "double_centered", "u_centered")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """An n-by-n distance matrix tagged with its centering state."""

    values: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in MATRIX_KINDS:
            raise MatrixKindError(f"unknown matrix kind {self.kind!r}")
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValidationError(f"matrix must be square, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


def _check_cap(n: int, allow_large: bool) -> None:
    if n > DIRECT_SIZE_CAP and not allow_large:
        raise ValidationError(
            f"direct method refuses n={n} > {DIRECT_SIZE_CAP} (it allocates n*n "
            "matrices); pass allow_large=True / --force-direct-large to override"
        )


def _raw_values(v: np.ndarray) -> np.ndarray:
    return np.abs(np.subtract.outer(v, v))


def pairwise_distances(v, *, allow_large: bool = False) -> DistanceMatrix:
    """Matrix of absolute differences |v_i - v_j| (symmetric, zero diagonal)."""
    v = as_finite_vector(v, "v")
    _check_cap(v.size, allow_large)
    return DistanceMatrix(_raw_values(v), "raw")


def _require_raw(m: DistanceMatrix) -> np.ndarray:
    if not isinstance(m, DistanceMatrix):
        raise MatrixKindError("expected a DistanceMatrix")
    if m.kind != "raw":
        raise MatrixKindError(f"expected a raw distance matrix, got kind {m.kind!r}")
    return m.values


def _double_center_values(a: np.ndarray) -> np.ndarray:
    # Row means, column means and the grand mean are subtracted/added for
    # off-diagonal entries; the diagonal is forced to zero by definition.
    n = a.shape[0]
    row = a.sum(axis=1)
    grand = row.sum()
    out = a - row[:, None] / n
    out -= row[None, :] / n
    out += grand / (n * n)
    np.fill_diagonal(out, 0.0)
    return out


def double_center(m: DistanceMatrix) -> DistanceMatrix:
    """Center a raw distance matrix with 1/n row/column weights.

    Off-diagonal entries get row mean and column mean subtracted and the
    grand mean added back; diagonal entries are set to zero.  Note the zeroed
    diagonal means row sums of the result are not exactly zero; the zero-sum
    cancellation holds for the centering formula before the diagonal override.
    """
    a = _require_raw(m)
    return DistanceMatrix(_double_center_values(a), "double_centered")


def _u_center_values(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    row = a.sum(axis=1)
    grand = row.sum()
    out = a - row[:, None] / (n - 2)
    out -= row[None, :] / (n - 2)
    out += grand / ((n - 1) * (n - 2))
    np.fill_diagonal(out, 0.0)
    return out


def u_center(m: DistanceMatrix) -> DistanceMatrix:
    """Center a raw distance matrix with the unbiased 1/(n-2) weights.

    Requires n > 2.  Off-diagonal row sums of the result are zero; the
    diagonal is zero by definition.
    """
    a = _require_raw(m)
    if a.shape[0] <= 2:
        raise SampleTooSmallError("u_center requires n > 2")
    return DistanceMatrix(_u_center_values(a), "u_centered")


def _vstat_terms(x: np.ndarray, y: np.ndarray):
    n = x.size
    a = _double_center_values(_raw_values(x))
    b = _double_center_values(_raw_values(y))
    vxy = float(np.sum(a * b)) / (n * n)
    vxx = float(np.sum(a * a)) / (n * n)
    vyy = float(np.sum(b * b)) / (n * n)
    return vxy, vxx, vyy


def vstat_dcov2_direct(s: PairedSample, *, allow_large: bool = False) -> DependenceEstimate:
    """Squared sample distance covariance (the biased 1/n^2 V-statistic).

    Because the centered matrices carry a zero diagonal, the statistic can
    be slightly negative for independent data at small n; it is always
    nonnegative when x and y are the same sample.
    """
    _check_cap(s.n, allow_large)
    n = s.n
    a = _double_center_values(_raw_values(s.x))
    b = _double_center_values(_raw_values(s.y))
    value = float(np.sum(a * b)) / (n * n)
    return DependenceEstimate(value, "vstat_dcov2", "direct", n)


def vstat_dcor2_direct(s: PairedSample, *, allow_large: bool = False) -> DependenceEstimate:
    """Squared sample distance correlation; 1 at perfect dependence.

    Lies in [-1, 1] by Cauchy-Schwarz (the mild negative range comes from
    the zero-diagonal centering).  Returns 0 when either squared distance
    variance is zero (constant sample); negative variances from roundoff
    are treated as zero in the denominator guard only.
    """
    _check_cap(s.n, allow_large)
    vxy, vxx, vyy = _vstat_terms(s.x, s.y)
    if vxx <= 0.0 or vyy <= 0.0:
        value = 0.0
    else:
        value = vxy / float(np.sqrt(vxx * vyy))
    return DependenceEstimate(value, "vstat_dcor2", "direct", s.n)


def _unbiased_dcov2_value(x: np.ndarray, y: np.ndarray) -> float:
    n = x.size
    a = _u_center_values(_raw_values(x))
    b = _u_center_values(_raw_values(y))
    return float(np.sum(a * b)) / (n * (n - 3))


def unbiased_dcov2_direct(s: PairedSample, *, allow_large: bool = False) -> DependenceEstimate:
    """Unbiased estimator of squared distance covariance (a U-statistic).

    Inner product of the two u-centered distance matrices scaled by
    1/(n(n-3)).  Requires n > 3; the value may be negative.
    """
    if s.n <= 3:
        raise SampleTooSmallError("sample too small (n > 3 required)")
    _check_cap(s.n, allow_large)
    return DependenceEstimate(
        _unbiased_dcov2_value(s.x, s.y), "unbiased_dcov2", "direct", s.n
    )


def unbiased_dcov2_via_sums(s: PairedSample, *, allow_large: bool = False) -> DependenceEstimate:
    """The same unbiased estimator computed from three aggregate sums.

    Uses sum(a_ij*b_ij), sum_i(a_i. * b_i.) and a.. * b.. with their exact
    combinatorial weights instead of u-centering.  Serves as an independent
    route for testing; all three sums are accumulated naively from the raw
    distance matrices.
    """
    if s.n <= 3:
        raise SampleTooSmallError("sample too small (n > 3 required)")
    _check_cap(s.n, allow_large)
    n = s.n
    a = _raw_values(s.x)
    b = _raw_values(s.y)
    sum_ab = float(np.sum(a * b))  # diagonal terms are zero
    arow = a.sum(axis=1)
    brow = b.sum(axis=1)
    sum_rows = float(np.sum(arow * brow))
    grand = float(arow.sum()) * float(brow.sum())
    value = (
        sum_ab / (n * (n - 3))
        - 2.0 * sum_rows / (n * (n - 2) * (n - 3))
        + grand / (n * (n - 1) * (n - 2) * (n - 3))
    )
    return DependenceEstimate(value, "unbiased_dcov2", "direct", n)


def unbiased_dcov2_leave_one_out(
    s: PairedSample, k: int, *, allow_large: bool = False
) -> DependenceEstimate:
    """Unbiased squared distance covariance after dropping pair ``k``.

    ``k`` is a 0-based index.  Computed by a closed form that updates the
    full-sample row and grand sums rather than by rebuilding the reduced
    matrices; it equals ``unbiased_dcov2_direct`` on the sample with pair
    ``k`` removed.  Requires n > 4.
    """
    n = s.n
    if n <= 4:
        raise SampleTooSmallError("leave-one-out requires n > 4")
    if not -n <= k < n:
        raise IndexError(f"pair index {k} out of range for n={n}")
    if k < 0:
        k += n
    _check_cap(n, allow_large)

    a = _raw_values(s.x)
    b = _raw_values(s.y)
    arow = a.sum(axis=1)
    brow = b.sum(axis=1)

    sum_ab = float(np.sum(a * b)) - 2.0 * float(np.sum(a[k] * b[k]))
    arow_k = arow - a[:, k]
    brow_k = brow - b[:, k]
    sum_rows = float(np.sum(arow_k * brow_k)) - arow_k[k] * brow_k[k]
    grand = (float(arow.sum()) - 2.0 * arow[k]) * (float(brow.sum()) - 2.0 * brow[k])

    value = (
        sum_ab / ((n - 1) * (n - 4))
        - 2.0 * sum_rows / ((n - 1) * (n - 3) * (n - 4))
        + grand / ((n - 1) * (n - 2) * (n - 3) * (n - 4))
    )
    return DependenceEstimate(value, "unbiased_dcov2", "direct", n - 1)


def bias_corrected_dcor2_direct(
    s: PairedSample, *, allow_large: bool = False
) -> DependenceEstimate:
    """Bias-corrected squared distance correlation from the direct path.

    Ratio of the unbiased squared covariance to the geometric mean of the
    unbiased squared variances; 0 when either variance is nonpositive.  May
    be negative.  Requires n > 3.
    """
    if s.n <= 3:
        raise SampleTooSmallError("sample too small (n > 3 required)")
    _check_cap(s.n, allow_large)
    oxy = _unbiased_dcov2_value(s.x, s.y)
    oxx = _unbiased_dcov2_value(s.x, s.x)
    oyy = _unbiased_dcov2_value(s.y, s.y)
    if oxx <= 0.0 or oyy <= 0.0:
        value = 0.0
    else:
        value = oxy / float(np.sqrt(oxx * oyy))
    return DependenceEstimate(value, "bias_corrected_dcor2", "direct", s.n)
