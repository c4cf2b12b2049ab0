"""Distance covariance and correlation with O(n log n) fast paths.

Public surface:

* :mod:`fastdcov.oracle` - quadratic-time reference estimators
* :mod:`fastdcov.fast` - the O(n log n) estimators
* :mod:`fastdcov.sirs` - the SIRS dependence utility
* :mod:`fastdcov.datagen` - seeded synthetic data generators
* :mod:`fastdcov.screening` - the replicated feature-screening harness
* :mod:`fastdcov.bench` - timing harness and scaling-slope fits
* :mod:`fastdcov.cli` - the ``fastdcov`` command line tool
"""

from .errors import MatrixKindError, SampleTooSmallError, ValidationError
from .fast import (
    bias_corrected_dcor2_fast,
    dyad_update,
    grand_dist_sum,
    partial_sum_2d,
    row_dist_sums,
    sum_ab_products,
    unbiased_dcov2_fast,
    vstat_dcov2_fast,
    vstat_dcor2_fast,
)
from .oracle import (
    DIRECT_SIZE_CAP,
    DistanceMatrix,
    bias_corrected_dcor2_direct,
    double_center,
    pairwise_distances,
    u_center,
    unbiased_dcov2_direct,
    unbiased_dcov2_leave_one_out,
    unbiased_dcov2_via_sums,
    vstat_dcov2_direct,
    vstat_dcor2_direct,
)
from .sample import DependenceEstimate, PairedSample
from .sirs import sirs_direct, sirs_fast

__version__ = "0.1.0"

__all__ = [
    "DIRECT_SIZE_CAP",
    "DependenceEstimate",
    "DistanceMatrix",
    "MatrixKindError",
    "PairedSample",
    "SampleTooSmallError",
    "ValidationError",
    "bias_corrected_dcor2_direct",
    "bias_corrected_dcor2_fast",
    "double_center",
    "dyad_update",
    "grand_dist_sum",
    "pairwise_distances",
    "partial_sum_2d",
    "row_dist_sums",
    "sirs_direct",
    "sirs_fast",
    "sum_ab_products",
    "u_center",
    "unbiased_dcov2_direct",
    "unbiased_dcov2_fast",
    "unbiased_dcov2_leave_one_out",
    "unbiased_dcov2_via_sums",
    "vstat_dcov2_direct",
    "vstat_dcov2_fast",
    "vstat_dcor2_direct",
    "vstat_dcor2_fast",
]
