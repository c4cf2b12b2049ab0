"""Command line entry point: CSV ingestion and subcommand dispatch.

Text output prints values with six significant digits; JSON output keeps
full precision (parsing the JSON recovers the computed floats exactly).
All randomised subcommands default to a fixed seed so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import bench as bench_mod
from . import fast, oracle, screening, sirs
from .datagen import (
    DEFAULT_SEED,
    ScreeningDesign,
    gen_coefficients,
    gen_predictors,
    gen_response,
    gen_showcase,
    rng_stream,
)
from .errors import ValidationError
from .sample import PairedSample


def ingest_csv(source, columns=None):
    """Read numeric columns from a CSV file (or '-' for standard input).

    A header row is auto-detected: if any cell of the first row does not
    parse as a number the row is treated as column names.  ``columns`` is a
    list of selectors, each a column name (requires a header) or a 0-based
    integer index; ``None`` selects the first one or two columns.  Returns a
    (rows, selected) float array.  Unparseable or non-finite cells raise a
    ValidationError naming the offending row and column.
    """
    if source == "-":
        rows = list(csv.reader(sys.stdin))
    else:
        with open(source, newline="") as handle:
            rows = list(csv.reader(handle))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ValidationError("input contains no data rows")

    def parses(cell):
        try:
            float(cell)
        except ValueError:
            return False
        return True

    header = None
    if not all(parses(cell) for cell in rows[0]):
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ValidationError("input contains a header but no data rows")

    width = len(rows[0])
    if columns is None:
        indices = list(range(min(2, width)))
    else:
        indices = []
        for selector in columns:
            selector = str(selector).strip()
            if selector.lstrip("+-").isdigit():
                indices.append(int(selector))
            elif header is not None and selector in header:
                indices.append(header.index(selector))
            else:
                raise ValidationError(
                    f"unknown column {selector!r}"
                    + ("" if header else " (file has no header row)")
                )

    offset = 2 if header is not None else 1  # human line number of first data row
    data = np.empty((len(rows), len(indices)), dtype=np.float64)
    for r, row in enumerate(rows):
        for c, idx in enumerate(indices):
            name = header[idx] if header else str(idx)
            if idx >= len(row):
                raise ValidationError(f"row {r + offset} has no column {name!r}")
            cell = row[idx].strip()
            try:
                value = float(cell)
            except ValueError:
                raise ValidationError(
                    f"row {r + offset}, column {name!r}: cannot parse {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise ValidationError(
                    f"row {r + offset}, column {name!r}: value {cell!r} is not finite"
                )
            data[r, c] = value
    return data


def _parse_columns(selection):
    if selection is None:
        return None
    parts = [part.strip() for part in str(selection).split(",") if part.strip()]
    if not parts:
        raise ValidationError("empty --columns selection")
    return parts


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w") as handle:
            handle.write(text)


def _format_report(report: dict, fmt: str, order) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True) + "\n"
    if fmt == "csv":
        keys = [k for k in order if k in report]
        row = ",".join(_text_value(report[k]) for k in keys)
        return ",".join(keys) + "\n" + row + "\n"
    lines = [f"{key}: {_text_value(report[key])}" for key in order if key in report]
    return "\n".join(lines) + "\n"


def _text_value(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


_ESTIMATOR_CHOICES = ("unbiased", "vstat", "dcor", "bias-corrected-dcor")


def _estimate(sample, estimator, method, allow_large):
    if method == "fast":
        table = {
            "unbiased": fast.unbiased_dcov2_fast,
            "vstat": fast.vstat_dcov2_fast,
            "dcor": fast.vstat_dcor2_fast,
            "bias-corrected-dcor": fast.bias_corrected_dcor2_fast,
        }
        return table[estimator](sample)
    table = {
        "unbiased": oracle.unbiased_dcov2_direct,
        "vstat": oracle.vstat_dcov2_direct,
        "dcor": oracle.vstat_dcor2_direct,
        "bias-corrected-dcor": oracle.bias_corrected_dcor2_direct,
    }
    return table[estimator](sample, allow_large=allow_large)


def _cmd_dcov(args) -> int:
    data = ingest_csv(args.input, _parse_columns(args.columns))
    x = data[:, 0]
    y = data[:, 1] if data.shape[1] > 1 else data[:, 0]
    sample = PairedSample(x, y)
    estimate = _estimate(sample, args.estimator, args.method, args.force_direct_large)
    report = {
        "command": "dcov",
        "estimator": estimate.estimator,
        "method": estimate.method,
        "n": estimate.n,
        "value": estimate.value,
    }
    order = ["command", "estimator", "method", "n", "value"]
    if args.check:
        other_method = "direct" if args.method == "fast" else "fast"
        if other_method == "direct" and sample.n > oracle.DIRECT_SIZE_CAP and not args.force_direct_large:
            report["check"] = "skipped (direct infeasible at this n)"
            order += ["check"]
        else:
            other = _estimate(sample, args.estimator, other_method, args.force_direct_large)
            delta = abs(estimate.value - other.value)
            report["check_method"] = other.method
            report["check_value"] = other.value
            report["check_delta"] = delta
            report["check_ok"] = bool(delta <= 1e-9 * max(1.0, abs(other.value)))
            order += ["check_method", "check_value", "check_delta", "check_ok"]
    _emit(_format_report(report, args.format, order), args.output)
    return 0


def _cmd_sirs(args) -> int:
    data = ingest_csv(args.input, _parse_columns(args.columns))
    if data.shape[1] < 2:
        raise ValidationError("sirs needs two columns (predictor, response)")
    sample = PairedSample(data[:, 0], data[:, 1])
    fn = sirs.sirs_fast if args.method == "fast" else sirs.sirs_direct
    estimate = fn(sample)
    report = {
        "command": "sirs",
        "estimator": estimate.estimator,
        "method": estimate.method,
        "n": estimate.n,
        "value": estimate.value,
    }
    _emit(
        _format_report(report, args.format, ["command", "estimator", "method", "n", "value"]),
        args.output,
    )
    return 0


def showcase_statistics(case: int, n: int, seed: int):
    """Pearson and bias-corrected distance correlation for one showcase case.

    The distance correlation is reported on the unsquared scale (square root
    of the nonnegative part of the bias-corrected squared correlation), the
    same scale the Pearson coefficient uses.
    """
    sample = gen_showcase(case, n, rng_stream(seed, case))
    r = screening.pearson(sample.x, sample.y)
    dcor2 = fast.bias_corrected_dcor2_fast(sample).value
    dcor = math.sqrt(max(0.0, dcor2))
    return sample, r, dcor2, dcor


def _cmd_showcase(args) -> int:
    _, r, dcor2, dcor = showcase_statistics(args.case, args.n, args.seed)
    report = {
        "command": "showcase",
        "case": args.case,
        "n": args.n,
        "seed": args.seed,
        "pearson": r,
        "dcor": dcor,
        "bias_corrected_dcor2": dcor2,
    }
    order = ["command", "case", "n", "seed", "pearson", "dcor", "bias_corrected_dcor2"]
    _emit(_format_report(report, args.format, order), args.output)
    return 0


def _cmd_screen(args) -> int:
    design = ScreeningDesign(p=args.p, n=args.n, rho=args.rho, model=args.model)
    reports = screening.run_screening_experiment(
        design, replications=args.reps, seed=args.seed
    )
    if args.format == "json":
        text = screening.reports_to_json(reports)
    else:
        text = screening.reports_to_text(reports)
    _emit(text, args.output)
    return 0


def _cmd_bench(args) -> int:
    sizes = [int(part) for part in str(args.n).split(",") if part.strip()]
    methods = ("direct", "fast") if args.method == "both" else (args.method,)
    records = bench_mod.bench_run(
        sizes,
        methods=methods,
        reps=args.reps,
        seed=args.seed,
        allow_large=args.force_direct_large,
    )
    if args.format == "json":
        payload = [record.__dict__ for record in records]
        text = json.dumps(payload, sort_keys=True) + "\n"
    elif args.format == "csv":
        text = bench_mod.records_to_csv(records)
    else:
        text = bench_mod.records_to_csv(records) + "\n" + bench_mod.loglog_table(records)
    _emit(text, args.output)
    return 0


def _cmd_gen(args) -> int:
    if args.case is not None:
        sample = gen_showcase(args.case, args.n, rng_stream(args.seed, args.case))
        lines = ["x,y"]
        lines += [f"{float(x)!r},{float(y)!r}" for x, y in zip(sample.x, sample.y)]
        _emit("\n".join(lines) + "\n", args.output)
        return 0
    design = ScreeningDesign(p=args.p, n=args.n, rho=args.rho, model=args.model)
    rng = rng_stream(args.seed, 0)
    betas = gen_coefficients(design.n, rng)
    X = gen_predictors(design, rng)
    y = gen_response(design, X, betas, rng)
    header = ["y"] + [f"x{k + 1}" for k in range(design.p)]
    lines = [",".join(header)]
    for i in range(design.n):
        lines.append(",".join([repr(float(y[i]))] + [repr(float(v)) for v in X[i]]))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastdcov",
        description=(
            "Distance covariance and correlation estimators with O(n log n) "
            "fast paths, a SIRS utility, data generators, a feature-screening "
            "harness and a scaling benchmark."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--output", default=None, help="output path (default stdout)")

    dcov = sub.add_parser("dcov", help="distance covariance/correlation of a CSV sample")
    dcov.add_argument("--input", default="-", help="CSV path or '-' for stdin")
    dcov.add_argument("--columns", default=None, help="comma-separated names or 0-based indices")
    dcov.add_argument("--method", choices=("fast", "direct"), default="fast")
    dcov.add_argument("--estimator", choices=_ESTIMATOR_CHOICES, default="unbiased")
    dcov.add_argument("--check", action="store_true", help="also run the other method and report the delta")
    dcov.add_argument("--force-direct-large", action="store_true",
                      help="allow the direct method beyond its memory cap")
    add_io(dcov)
    dcov.set_defaults(fn=_cmd_dcov)

    sirs_p = sub.add_parser("sirs", help="SIRS dependence utility of a CSV sample")
    sirs_p.add_argument("--input", default="-")
    sirs_p.add_argument("--columns", default=None)
    sirs_p.add_argument("--method", choices=("fast", "direct"), default="fast")
    add_io(sirs_p)
    sirs_p.set_defaults(fn=_cmd_sirs)

    showcase = sub.add_parser("showcase", help="Pearson vs distance correlation on a synthetic case")
    showcase.add_argument("--case", type=int, required=True, help="case id, 1..9")
    showcase.add_argument("--n", type=int, default=10_000)
    showcase.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_io(showcase)
    showcase.set_defaults(fn=_cmd_showcase)

    screen = sub.add_parser("screen", help="replicated feature-screening study")
    screen.add_argument("--model", default="1a", help="response model, 1a..1d")
    screen.add_argument("--p", type=int, default=500)
    screen.add_argument("--n", type=int, default=200)
    screen.add_argument("--rho", type=float, default=0.5)
    screen.add_argument("--reps", type=int, default=100)
    screen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_io(screen)
    screen.set_defaults(fn=_cmd_screen)

    bench = sub.add_parser("bench", help="timing study of the direct and fast estimators")
    bench.add_argument("--n", default="32,64,128,256,512,1024,2048",
                       help="comma-separated sample sizes")
    bench.add_argument("--method", choices=("both", "fast", "direct"), default="both")
    bench.add_argument("--reps", type=int, default=None,
                       help="repetitions per size (default 100 up to n=2048, else 10)")
    bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    bench.add_argument("--force-direct-large", action="store_true")
    add_io(bench)
    bench.set_defaults(fn=_cmd_bench)

    gen = sub.add_parser("gen", help="write a synthetic dataset as CSV")
    gen.add_argument("--case", type=int, default=None, help="showcase case id (two columns)")
    gen.add_argument("--model", default="1a", help="screening model when no --case is given")
    gen.add_argument("--n", type=int, default=1000)
    gen.add_argument("--p", type=int, default=500)
    gen.add_argument("--rho", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_io(gen)
    gen.set_defaults(fn=_cmd_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, OSError, RuntimeError) as exc:
        print(f"fastdcov: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
