"""Feature-screening harness: marginal utilities, rankings and report tables.

Three marginal utilities are supported: absolute Pearson correlation (SIS),
the SIRS statistic, and bias-corrected squared distance correlation (DC-SIS).
For each replication the harness ranks all predictors by utility and records
the minimum model size covering the active set plus top-d membership at three
cutoffs; reports aggregate quantiles and selection proportions.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .datagen import (
    DEFAULT_SEED,
    ScreeningDesign,
    gen_coefficients,
    gen_predictors,
    gen_response,
    rng_stream,
)
from .errors import ValidationError
from .fast import _unbiased_dcov2_fast_value
from .sample import as_finite_vector
from .sirs import _sirs_fast_value

SCREENING_METHODS = ("SIS", "SIRS", "DC-SIS")

#: 0-based columns of the predictors that enter every response model
#: (labelled X1, X2, X12, X22 in reports).
ACTIVE_PREDICTORS = (0, 1, 11, 21)
ACTIVE_LABELS = ("X1", "X2", "X12", "X22")

QUANTILE_LEVELS = (0.05, 0.25, 0.50, 0.75, 0.95)


def pearson(x, y) -> float:
    """Sample correlation coefficient; 0 when either variance is zero."""
    x = as_finite_vector(x, "x")
    y = as_finite_vector(y, "y")
    if x.size != y.size:
        raise ValidationError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValidationError("pearson requires n >= 2")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(np.sum(xc * xc))
    syy = float(np.sum(yc * yc))
    if sxx <= 0.0 or syy <= 0.0:
        return 0.0
    return float(np.sum(xc * yc)) / math.sqrt(sxx * syy)


def _abs_pearson_columns(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    yc = y - y.mean()
    syy = float(np.sum(yc * yc))
    Xc = X - X.mean(axis=0, keepdims=True)
    sxx = np.sum(Xc * Xc, axis=0)
    num = Xc.T @ yc
    out = np.zeros(X.shape[1], dtype=np.float64)
    if syy <= 0.0:
        return out
    ok = sxx > 0.0
    out[ok] = np.abs(num[ok]) / np.sqrt(sxx[ok] * syy)
    return out


def marginal_utilities(X, y, method: str, standardize: bool = False) -> np.ndarray:
    """Per-column dependence utility between each predictor and the response.

    ``standardize`` z-scores the predictor columns first; it only changes the
    SIRS utility since the other two are scale and location invariant.
    Constant columns get utility 0 for every method.
    """
    if method not in SCREENING_METHODS:
        raise ValidationError(f"unknown screening method {method!r}")
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError("X must be a 2-d matrix")
    y = as_finite_vector(y, "y")
    n, p = X.shape
    if y.size != n:
        raise ValidationError(f"X has {n} rows but y has {y.size}")
    minimum = {"SIS": 2, "SIRS": 3, "DC-SIS": 4}[method]
    if n < minimum:
        raise ValidationError(f"{method} requires n >= {minimum}")

    variances = X.var(axis=0)
    if standardize:
        safe = np.where(variances > 0.0, np.sqrt(variances), 1.0)
        X = (X - X.mean(axis=0, keepdims=True)) / safe

    if method == "SIS":
        utilities = _abs_pearson_columns(X, y)
    elif method == "SIRS":
        utilities = np.array([_sirs_fast_value(X[:, k], y) for k in range(p)])
    else:  # DC-SIS: ranking floor at zero
        oyy = _unbiased_dcov2_fast_value(y, y)
        utilities = np.empty(p, dtype=np.float64)
        for k in range(p):
            col = np.ascontiguousarray(X[:, k])
            oxx = _unbiased_dcov2_fast_value(col, col)
            if oxx <= 0.0 or oyy <= 0.0:
                utilities[k] = 0.0
            else:
                value = _unbiased_dcov2_fast_value(col, y) / math.sqrt(oxx * oyy)
                utilities[k] = max(0.0, value)
    utilities[variances <= 0.0] = 0.0
    return utilities


def utility_ranks(utilities) -> np.ndarray:
    """1-based rank of every predictor under descending utility.

    Ties are broken by ascending predictor index (the stable sort order), so
    rankings are deterministic.
    """
    u = np.asarray(utilities, dtype=np.float64)
    order = np.argsort(-u, kind="stable")
    ranks = np.empty(u.size, dtype=np.int64)
    ranks[order] = np.arange(1, u.size + 1)
    return ranks


def min_model_size(utilities, active_set) -> int:
    """Smallest d such that all active predictors rank in the top d."""
    active = np.asarray(list(active_set), dtype=np.int64)
    if active.size == 0:
        raise ValidationError("active set must not be empty")
    u = np.asarray(utilities, dtype=np.float64)
    if active.min() < 0 or active.max() >= u.size:
        raise ValidationError("active set indices out of range")
    return int(utility_ranks(u)[active].max())


def selection_proportions(active_ranks, cutoffs):
    """Selection proportions from per-replication ranks of active predictors.

    ``active_ranks`` has one row per replication and one column per active
    predictor (1-based ranks).  Returns ``(p_s, p_a)`` where ``p_s[d]`` is the
    per-predictor proportion of replications ranked within d and ``p_a[d]``
    the proportion where all active predictors are.
    """
    ranks = np.asarray(active_ranks, dtype=np.int64)
    if ranks.ndim != 2 or ranks.shape[0] == 0:
        raise ValidationError("need at least one replication of ranks")
    p_s = {int(d): (ranks <= d).mean(axis=0) for d in cutoffs}
    p_a = {int(d): float(np.all(ranks <= d, axis=1).mean()) for d in cutoffs}
    return p_s, p_a


def quantile(values, q: float) -> float:
    """Order-statistic quantile with linear interpolation at (m-1)q + 1."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValidationError("quantile of empty values")
    if not 0.0 <= q <= 1.0:
        raise ValidationError("q must lie in [0, 1]")
    return float(np.quantile(arr, q))


def model_size_cutoffs(p: int, n: int) -> tuple:
    """The three report cutoffs: d1 = integer part of p/(10 ln n), 2*d1, 3*d1."""
    d1 = int(p / (10.0 * math.log(n)))
    return (d1, 2 * d1, 3 * d1)


@dataclass(frozen=True)
class ScreeningReport:
    """Aggregated screening results for one method on one design."""

    method: str
    model: str
    p: int
    n: int
    rho: float
    replications: int
    cutoffs: tuple
    s_quantiles: tuple  # at the 5/25/50/75/95 percent levels
    p_s: tuple  # [cutoff][active predictor]
    p_a: tuple  # [cutoff]
    active_labels: tuple = ACTIVE_LABELS

    def median_s(self) -> float:
        return self.s_quantiles[2]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "model": self.model,
            "p": self.p,
            "n": self.n,
            "rho": self.rho,
            "replications": self.replications,
            "cutoffs": list(self.cutoffs),
            "quantile_levels": [round(q * 100) for q in QUANTILE_LEVELS],
            "s_quantiles": list(self.s_quantiles),
            "p_s": {
                f"d{i + 1}": {
                    label: value
                    for label, value in zip(self.active_labels, self.p_s[i])
                }
                for i in range(len(self.cutoffs))
            },
            "p_a": {f"d{i + 1}": self.p_a[i] for i in range(len(self.cutoffs))},
        }


def _replication_task(args):
    design, methods, seed, rep = args
    rng = rng_stream(seed, rep)
    betas = gen_coefficients(design.n, rng)
    X = gen_predictors(design, rng)
    y = gen_response(design, X, betas, rng)
    active = np.asarray(ACTIVE_PREDICTORS, dtype=np.int64)
    out = {}
    for method in methods:
        ranks = utility_ranks(marginal_utilities(X, y, method))
        out[method] = ranks[active]
    return out


def run_screening_experiment(
    design: ScreeningDesign,
    methods=SCREENING_METHODS,
    replications: int = 100,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> dict:
    """Run the replicated screening study and aggregate one report per method.

    Each replication draws fresh coefficients, predictors and response from
    its own RNG stream (keyed by the replication index), so the result is a
    pure function of ``(design, methods, replications, seed)`` no matter how
    many workers execute the replications.
    """
    for method in methods:
        if method not in SCREENING_METHODS:
            raise ValidationError(f"unknown screening method {method!r}")
    if replications < 1:
        raise ValidationError("need at least one replication")

    tasks = [(design, tuple(methods), seed, rep) for rep in range(replications)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replication_task, tasks, chunksize=8))
    else:
        results = [_replication_task(t) for t in tasks]

    cutoffs = model_size_cutoffs(design.p, design.n)
    reports = {}
    for method in methods:
        active_ranks = np.vstack([r[method] for r in results])
        s_values = active_ranks.max(axis=1)
        s_quantiles = tuple(quantile(s_values, q) for q in QUANTILE_LEVELS)
        p_s, p_a = selection_proportions(active_ranks, cutoffs)
        reports[method] = ScreeningReport(
            method=method,
            model=design.model,
            p=design.p,
            n=design.n,
            rho=design.rho,
            replications=replications,
            cutoffs=cutoffs,
            s_quantiles=s_quantiles,
            p_s=tuple(tuple(float(v) for v in p_s[d]) for d in cutoffs),
            p_a=tuple(p_a[d] for d in cutoffs),
        )
    return reports


def reports_to_json(reports: dict) -> str:
    """Canonical JSON for a method-to-report mapping (byte reproducible)."""
    payload = {method: report.to_dict() for method, report in reports.items()}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def reports_to_text(reports: dict) -> str:
    """Aligned text tables: minimum-model-size quantiles, then P_s and P_a."""
    methods = list(reports)
    first = reports[methods[0]]
    lines = []
    lines.append(
        f"model {first.model}  p={first.p} n={first.n} rho={first.rho} "
        f"replications={first.replications}"
    )
    lines.append("")
    header = ["method"] + [f"{round(q * 100)}%" for q in QUANTILE_LEVELS]
    lines.append("minimum model size S, quantiles")
    lines.append("  " + "".join(f"{h:>8}" for h in header))
    for method in methods:
        row = [method] + [f"{v:.1f}" for v in reports[method].s_quantiles]
        lines.append("  " + "".join(f"{v:>8}" for v in row))
    lines.append("")
    d_names = [f"d{i + 1}={d}" for i, d in enumerate(first.cutoffs)]
    lines.append("selection proportions P_s and P_a at cutoffs " + ", ".join(d_names))
    header = ["method", "size"] + list(first.active_labels) + ["All"]
    lines.append("  " + "".join(f"{h:>8}" for h in header))
    for method in methods:
        report = reports[method]
        for i in range(len(report.cutoffs)):
            row = [method, f"d{i + 1}"]
            row += [f"{v:.2f}" for v in report.p_s[i]]
            row += [f"{report.p_a[i]:.2f}"]
            lines.append("  " + "".join(f"{v:>8}" for v in row))
    return "\n".join(lines) + "\n"
