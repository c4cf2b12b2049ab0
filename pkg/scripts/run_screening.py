#!/usr/bin/env python3
"""Desk-scale screening study: compare SIS, SIRS and DC-SIS on one design."""

import argparse

from fastdcov.datagen import DEFAULT_SEED, ScreeningDesign
from fastdcov.screening import (
    reports_to_json,
    reports_to_text,
    run_screening_experiment,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", default="1b")
    parser.add_argument("--p", type=int, default=500)
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--rho", type=float, default=0.5)
    parser.add_argument("--reps", type=int, default=100)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    args = parser.parse_args()

    design = ScreeningDesign(p=args.p, n=args.n, rho=args.rho, model=args.model)
    reports = run_screening_experiment(
        design, replications=args.reps, seed=args.seed, workers=args.workers
    )
    if args.json:
        print(reports_to_json(reports), end="")
    else:
        print(reports_to_text(reports), end="")


if __name__ == "__main__":
    main()
