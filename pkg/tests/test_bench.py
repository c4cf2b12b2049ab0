import numpy as np
import pytest

from fastdcov.bench import (
    BenchRecord,
    bench_run,
    fit_scaling_slope,
    loglog_table,
    records_to_csv,
)
from fastdcov.errors import ValidationError
from fastdcov.oracle import DIRECT_SIZE_CAP


def _synthetic(times_by_n, method="fast"):
    return [
        BenchRecord(n=n, method=method, reps=5, mean_seconds=t, stderr_seconds=0.0)
        for n, t in times_by_n
    ]


def test_slope_linear_times():
    records = _synthetic([(n, float(n)) for n in (64, 128, 256, 512)])
    assert fit_scaling_slope(records) == pytest.approx(1.0, abs=1e-9)


def test_slope_quadratic_times():
    records = _synthetic([(n, float(n) ** 2) for n in (64, 128, 256, 512)])
    assert fit_scaling_slope(records) == pytest.approx(2.0, abs=1e-9)


def test_slope_validation():
    records = _synthetic([(64, 1.0), (128, 2.0)])
    with pytest.raises(ValidationError):
        fit_scaling_slope(records)
    mixed = _synthetic([(64, 1.0), (128, 2.0)]) + _synthetic(
        [(256, 3.0)], method="direct"
    )
    with pytest.raises(ValidationError):
        fit_scaling_slope(mixed)


def test_bench_run_smoke_and_agreement_check():
    records = bench_run([16, 32], methods=("direct", "fast"), reps=3, seed=1)
    assert len(records) == 4
    for r in records:
        assert r.reps == 3
        assert r.mean_seconds > 0.0
        assert r.stderr_seconds >= 0.0
    csv_text = records_to_csv(records)
    assert csv_text.splitlines()[0] == "n,method,reps,mean_s,stderr_s"
    assert len(csv_text.splitlines()) == 5
    table = loglog_table(records)
    assert "log2_n" in table


def test_bench_run_skips_direct_beyond_cap():
    big = DIRECT_SIZE_CAP + 4
    with pytest.warns(UserWarning, match="memory cap"):
        records = bench_run([big], methods=("direct", "fast"), reps=1, seed=2)
    assert [r.method for r in records] == ["fast"]


def test_bench_run_validates_inputs():
    with pytest.raises(ValidationError):
        bench_run([2], reps=1)
    with pytest.raises(ValidationError):
        bench_run([16], methods=("warp",), reps=1)
