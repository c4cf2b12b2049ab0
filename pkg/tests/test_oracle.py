import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

import fastdcov as fd
from fastdcov import oracle
from fastdcov.errors import MatrixKindError, SampleTooSmallError, ValidationError


def finite_vectors(min_size, max_size=24):
    return st.lists(
        st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False),
        min_size=min_size,
        max_size=max_size,
    )


# ---------------------------------------------------------------- pairwise


def test_pairwise_constant_sample_is_zero():
    m = fd.pairwise_distances([0.0, 0.0, 0.0])
    assert m.kind == "raw"
    assert_allclose(m.values, np.zeros((3, 3)))


def test_pairwise_single_pair():
    m = fd.pairwise_distances([1.0, 2.0])
    assert_allclose(m.values, [[0.0, 1.0], [1.0, 0.0]])


def test_pairwise_hand_values():
    m = fd.pairwise_distances([0.0, 1.0, 3.0]).values
    assert m[0, 1] == 1.0 and m[0, 2] == 3.0 and m[1, 2] == 2.0
    assert_allclose(m, m.T)
    assert_allclose(np.diag(m), 0.0)


def test_pairwise_rejects_non_finite():
    with pytest.raises(ValidationError):
        fd.pairwise_distances([0.0, np.nan])
    with pytest.raises(ValidationError):
        fd.pairwise_distances([np.inf, 1.0])


# ---------------------------------------------------------------- centering


def test_double_center_all_zero():
    m = fd.double_center(fd.pairwise_distances([5.0, 5.0, 5.0]))
    assert m.kind == "double_centered"
    assert_allclose(m.values, np.zeros((3, 3)))


def test_double_center_two_points_hand_value():
    # off-diagonal entry: 1 - 1/2 - 1/2 + 2/4 = 1/2; diagonal forced to 0
    m = fd.double_center(fd.pairwise_distances([0.0, 1.0]))
    assert_allclose(m.values, [[0.0, 0.5], [0.5, 0.0]])


def test_double_center_formula_has_zero_row_sums_before_diagonal_override():
    rng = np.random.default_rng(3)
    v = rng.normal(size=17)
    a = np.abs(np.subtract.outer(v, v))
    n = len(v)
    # independent evaluation of the centering formula at every entry,
    # including the diagonal
    full = (
        a
        - a.sum(axis=1, keepdims=True) / n
        - a.sum(axis=0, keepdims=True) / n
        + a.sum() / n**2
    )
    scale = 1e-9 * a.sum()
    assert np.max(np.abs(full.sum(axis=0))) <= scale
    assert np.max(np.abs(full.sum(axis=1))) <= scale
    got = fd.double_center(fd.pairwise_distances(v)).values
    off = ~np.eye(n, dtype=bool)
    assert_allclose(got[off], full[off], atol=1e-12)
    assert_allclose(np.diag(got), 0.0)


def test_double_center_rejects_wrong_kind():
    m = fd.double_center(fd.pairwise_distances([0.0, 1.0, 2.0]))
    with pytest.raises(MatrixKindError):
        fd.double_center(m)


def test_u_center_zero_matrix():
    m = fd.u_center(fd.pairwise_distances([1.0, 1.0, 1.0, 1.0]))
    assert m.kind == "u_centered"
    assert_allclose(m.values, np.zeros((4, 4)))


def test_u_center_off_diagonal_row_sums_vanish():
    rng = np.random.default_rng(4)
    for n in (4, 5, 9, 30):
        v = rng.normal(size=n)
        raw = fd.pairwise_distances(v)
        m = fd.u_center(raw).values
        scale = 1e-9 * raw.values.sum()
        np.fill_diagonal(m, 0.0)
        assert np.max(np.abs(m.sum(axis=1))) <= scale
        assert_allclose(np.diag(m), 0.0)


def test_u_center_boundary_sizes():
    with pytest.raises(SampleTooSmallError):
        fd.u_center(fd.pairwise_distances([0.0, 1.0]))
    # n=3 is defined even though the unbiased estimator needs n > 3
    m = fd.u_center(fd.pairwise_distances([0.0, 1.0, 2.0]))
    assert m.values.shape == (3, 3)


# ---------------------------------------------------------------- V-statistics


def test_vstat_dcov2_constant_x_is_zero():
    s = fd.PairedSample([2.0] * 5, [1.0, 4.0, 2.0, 0.0, 3.0])
    assert fd.vstat_dcov2_direct(s).value == pytest.approx(0.0, abs=1e-15)


def test_vstat_dcov2_two_points_brute_force():
    s = fd.PairedSample([0.0, 1.0], [0.0, 1.0])
    got = fd.vstat_dcov2_direct(s)
    # brute force from the centered 2x2 matrices
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    c = a - a.mean(axis=1, keepdims=True) - a.mean(axis=0, keepdims=True) + a.mean()
    np.fill_diagonal(c, 0.0)
    assert got.value == pytest.approx(float((c * c).sum()) / 4.0)
    assert got.value == pytest.approx(0.125)
    assert got.value >= 0.0


def test_vstat_dcov2_equals_variance_when_x_equals_y():
    rng = np.random.default_rng(5)
    x = rng.normal(size=12)
    sxx = fd.vstat_dcov2_direct(fd.PairedSample(x, x))
    sxy = fd.vstat_dcov2_direct(fd.PairedSample(x, x.copy()))
    assert sxx.value == pytest.approx(sxy.value)
    assert sxx.value > 0.0


def test_vstat_dcor2_perfect_dependence():
    x = np.array([0.3, -1.2, 4.0, 2.2, 0.0])
    s = fd.PairedSample(x, x)
    assert fd.vstat_dcor2_direct(s).value == pytest.approx(1.0, abs=1e-12)


def test_vstat_dcor2_constant_sample_uses_zero_branch():
    s = fd.PairedSample([1.0, 1.0, 1.0], [0.0, 2.0, 5.0])
    assert fd.vstat_dcor2_direct(s).value == 0.0


def test_vstat_dcor2_bounded_and_variances_nonnegative():
    # The zero-diagonal centering allows mildly negative covariances for
    # independent data, but Cauchy-Schwarz still bounds the ratio by 1 and
    # self-covariances stay nonnegative.
    rng = np.random.default_rng(6)
    for _ in range(25):
        n = int(rng.integers(2, 40))
        x = rng.normal(size=n)
        y = rng.normal(size=n)
        v = fd.vstat_dcor2_direct(fd.PairedSample(x, y)).value
        assert -1.0 - 1e-12 <= v <= 1.0 + 1e-12
        assert fd.vstat_dcov2_direct(fd.PairedSample(x, x)).value >= -1e-12
        assert fd.vstat_dcov2_direct(fd.PairedSample(y, y)).value >= -1e-12


# ---------------------------------------------------------------- unbiased


def test_unbiased_dcov2_hand_value():
    s = fd.PairedSample([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 2.0, 3.0])
    assert fd.unbiased_dcov2_direct(s).value == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert fd.unbiased_dcov2_via_sums(s).value == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_unbiased_dcov2_constant_x_is_zero():
    s = fd.PairedSample([7.0] * 4, [0.0, 1.0, 5.0, 2.0])
    assert fd.unbiased_dcov2_direct(s).value == pytest.approx(0.0, abs=1e-15)


def test_unbiased_dcov2_requires_n_greater_than_three():
    s = fd.PairedSample([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
    with pytest.raises(SampleTooSmallError):
        fd.unbiased_dcov2_direct(s)
    with pytest.raises(SampleTooSmallError):
        fd.unbiased_dcov2_via_sums(s)


def test_unbiased_dcov2_reformulation_identity():
    """Inner-product and aggregate-sum evaluations agree on random samples."""
    rng = np.random.default_rng(7)
    for _ in range(500):
        n = int(rng.integers(4, 65))
        x = rng.normal(size=n)
        y = rng.normal(size=n)
        if rng.random() < 0.4:  # inject repeated values
            x = np.round(x)
            y = np.round(y)
        s = fd.PairedSample(x, y)
        a = fd.unbiased_dcov2_direct(s).value
        b = fd.unbiased_dcov2_via_sums(s).value
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


# ---------------------------------------------------------------- leave-one-out


def test_leave_one_out_matches_reduced_sample():
    rng = np.random.default_rng(8)
    x = rng.normal(size=5)
    y = rng.normal(size=5)
    s = fd.PairedSample(x, y)
    for k in range(5):
        got = fd.unbiased_dcov2_leave_one_out(s, k)
        reduced = fd.PairedSample(np.delete(x, k), np.delete(y, k))
        want = fd.unbiased_dcov2_direct(reduced).value
        assert got.n == 4
        assert got.value == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_leave_one_out_hand_value():
    s = fd.PairedSample([0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 2.0, 3.0, 4.0])
    got = fd.unbiased_dcov2_leave_one_out(s, 4)  # drop the last pair
    assert got.value == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_leave_one_out_validation():
    s = fd.PairedSample([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 2.0, 3.0])
    with pytest.raises(SampleTooSmallError):
        fd.unbiased_dcov2_leave_one_out(s, 0)
    s = fd.PairedSample(np.arange(5.0), np.arange(5.0))
    with pytest.raises(IndexError):
        fd.unbiased_dcov2_leave_one_out(s, 5)


def test_jackknife_identity_n8():
    rng = np.random.default_rng(9)
    x = rng.normal(size=8)
    y = 0.4 * x + rng.normal(size=8)
    s = fd.PairedSample(x, y)
    lhs = 8 * fd.unbiased_dcov2_direct(s).value
    rhs = sum(fd.unbiased_dcov2_leave_one_out(s, k).value for k in range(8))
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs), abs(rhs))


# ---------------------------------------------------------------- properties


@settings(max_examples=40, deadline=None)
@given(finite_vectors(min_size=4))
def test_unbiased_dcov2_symmetry(values):
    x = np.asarray(values)
    rng = np.random.default_rng(len(values))
    y = rng.normal(size=x.size)
    a = fd.unbiased_dcov2_direct(fd.PairedSample(x, y)).value
    b = fd.unbiased_dcov2_direct(fd.PairedSample(y, x)).value
    assert a == pytest.approx(b, abs=1e-12 * max(1.0, abs(a)))


@settings(max_examples=40, deadline=None)
@given(
    finite_vectors(min_size=4),
    st.floats(min_value=-4, max_value=4).filter(lambda b: abs(b) > 1e-3),
    st.floats(min_value=-4, max_value=4).filter(lambda d: abs(d) > 1e-3),
)
def test_unbiased_dcov2_scaling_and_translation(values, b, d):
    x = np.asarray(values)
    rng = np.random.default_rng(x.size + 1)
    y = rng.normal(size=x.size)
    base = fd.unbiased_dcov2_direct(fd.PairedSample(x, y)).value
    scaled = fd.unbiased_dcov2_direct(fd.PairedSample(b * x, d * y)).value
    assert scaled == pytest.approx(abs(b) * abs(d) * base, rel=1e-9, abs=1e-9)
    shifted = fd.unbiased_dcov2_direct(fd.PairedSample(x + 3.5, y - 1.25)).value
    assert shifted == pytest.approx(base, rel=1e-9, abs=1e-9)


# ---------------------------------------------------------------- memory cap


def test_size_cap_refuses_large_direct_computations():
    n = oracle.DIRECT_SIZE_CAP + 1
    v = np.linspace(0.0, 1.0, n)
    with pytest.raises(ValidationError, match="force-direct-large"):
        fd.pairwise_distances(v)
    s = fd.PairedSample(v, v)
    with pytest.raises(ValidationError):
        fd.unbiased_dcov2_direct(s)


def test_size_cap_override_flag():
    v = np.arange(10.0)
    m = fd.pairwise_distances(v, allow_large=True)
    assert m.n == 10
