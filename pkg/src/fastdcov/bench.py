"""Timing harness for the direct and fast estimators plus log-log slope fits.

Measurements are strictly sequential (one estimator call at a time), use a
monotonic wall clock, and discard one warm-up repetition per size so JIT
compilation and cache effects do not pollute the recorded means.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .datagen import DEFAULT_SEED, rng_stream
from .errors import ValidationError
from .fast import _unbiased_dcov2_fast_value
from .oracle import DIRECT_SIZE_CAP, _unbiased_dcov2_value

#: Tolerance for the fast-versus-direct agreement check inside bench_run.
CHECK_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BenchRecord:
    """One timing row: repetitions of one method at one sample size."""

    n: int
    method: str
    reps: int
    mean_seconds: float
    stderr_seconds: float


def default_reps(n: int) -> int:
    """Default repetition counts, sized for desk-scale runs."""
    return 100 if n <= 2**11 else 10


_ESTIMATORS = {"direct": _unbiased_dcov2_value, "fast": _unbiased_dcov2_fast_value}


def bench_run(
    sizes,
    methods=("direct", "fast"),
    reps=None,
    seed: int = DEFAULT_SEED,
    allow_large: bool = False,
) -> list:
    """Time the unbiased squared distance covariance estimators.

    Per (size, method) pair: fresh standard-normal samples are drawn for
    every repetition, only the estimator call is timed, and a warm-up
    repetition is discarded.  When both methods run on a size their values
    are compared within ``CHECK_TOLERANCE`` on every repetition.  Sizes the
    direct method cannot afford are skipped with a warning unless
    ``allow_large`` is set.
    """
    for method in methods:
        if method not in _ESTIMATORS:
            raise ValidationError(f"unknown bench method {method!r}")
    records = []
    for n in sizes:
        n = int(n)
        if n < 4:
            raise ValidationError("bench sizes must be at least 4")
        active = list(methods)
        if "direct" in active and n > DIRECT_SIZE_CAP and not allow_large:
            warnings.warn(
                f"skipping direct method at n={n}: exceeds the {DIRECT_SIZE_CAP} "
                "memory cap (pass allow_large to override)",
                stacklevel=2,
            )
            active.remove("direct")
        if not active:
            continue
        rng = rng_stream(seed, n)
        rep_count = default_reps(n) if reps is None else int(reps)
        times = {method: [] for method in active}
        for rep in range(rep_count + 1):  # rep 0 is the discarded warm-up
            x = rng.standard_normal(n)
            y = rng.standard_normal(n)
            values = {}
            for method in active:
                start = time.perf_counter()
                values[method] = _ESTIMATORS[method](x, y)
                elapsed = time.perf_counter() - start
                if rep > 0:
                    times[method].append(elapsed)
            if len(values) == 2:
                delta = abs(values["fast"] - values["direct"])
                limit = CHECK_TOLERANCE * max(1.0, abs(values["direct"]))
                if delta > limit:
                    raise RuntimeError(
                        f"fast/direct disagreement at n={n}: |{values['fast']} - "
                        f"{values['direct']}| = {delta} > {limit}"
                    )
        for method in active:
            t = np.asarray(times[method])
            stderr = float(t.std(ddof=1) / math.sqrt(t.size)) if t.size > 1 else 0.0
            records.append(
                BenchRecord(
                    n=n,
                    method=method,
                    reps=t.size,
                    mean_seconds=float(t.mean()),
                    stderr_seconds=stderr,
                )
            )
    return records


def fit_scaling_slope(records) -> float:
    """Least-squares slope of log(mean seconds) against log(n).

    Requires at least three records, all of the same method.
    """
    records = list(records)
    if len(records) < 3:
        raise ValidationError("slope fit needs at least three records")
    methods = {r.method for r in records}
    if len(methods) != 1:
        raise ValidationError(f"slope fit mixes methods {sorted(methods)}")
    log_n = np.log([r.n for r in records])
    log_t = np.log([r.mean_seconds for r in records])
    slope, _ = np.polyfit(log_n, log_t, 1)
    return float(slope)


def records_to_csv(records) -> str:
    lines = ["n,method,reps,mean_s,stderr_s"]
    for r in records:
        lines.append(f"{r.n},{r.method},{r.reps},{r.mean_seconds!r},{r.stderr_seconds!r}")
    return "\n".join(lines) + "\n"


def loglog_table(records) -> str:
    """Plot-ready log-log coordinates, one row per record."""
    lines = [f"{'method':>8} {'n':>9} {'log2_n':>8} {'log10_mean_s':>12}"]
    for r in records:
        lines.append(
            f"{r.method:>8} {r.n:>9} {math.log2(r.n):>8.2f} "
            f"{math.log10(r.mean_seconds):>12.4f}"
        )
    return "\n".join(lines) + "\n"
