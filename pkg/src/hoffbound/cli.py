"""Command-line entry point.

``hoffbound compute --input matrix.csv`` loads a matrix, certifies the upper
bound, optionally runs the sampling oracle, and prints either a text summary
or a JSON payload.  Exit codes: 0 on success (including an intentionally
skipped oracle), 2 when the sampled lower bound contradicts the certified
upper bound, 1 on input or solver errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import bound_h0
from .core import HoffboundError, ProblemInstance
from .io import RunConfig, canonical_report_json, load_matrix, report_to_dict
from .oracle import lower_bound_monte_carlo
from .solvers import SolverConfig

__all__ = ["build_parser", "main", "run"]

SANDWICH_RTOL = 1e-6

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SANDWICH = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoffbound",
        description=(
            "Certified upper bound on the homogeneous error constant of the "
            "system A x <= 0, with an optional sampling lower bound."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser(
        "compute", help="bound one matrix loaded from a file"
    )
    compute.add_argument("--input", required=True, help="path to the matrix file")
    compute.add_argument(
        "--format",
        default="auto",
        choices=("auto", "csv", "mtx"),
        help="input format (default: detect from extension/header)",
    )
    compute.add_argument(
        "--samples",
        type=int,
        default=64,
        help="number of Gaussian oracle samples; 0 disables the oracle (default 64)",
    )
    compute.add_argument("--seed", type=int, default=0, help="oracle seed")
    compute.add_argument(
        "--skip-oracle",
        action="store_true",
        help="skip the sampling lower bound entirely",
    )
    compute.add_argument(
        "--output",
        default="text",
        choices=("text", "json"),
        help="output format (default text)",
    )
    compute.add_argument(
        "--canonical",
        action="store_true",
        help="with --output json, print the canonical byte-stable form",
    )
    compute.add_argument("--feas-tol", type=float, default=1e-9)
    compute.add_argument("--opt-tol", type=float, default=1e-8)
    return parser


def run(config: RunConfig, canonical: bool = False) -> int:
    """Execute one run described by ``config``; returns the exit code."""
    A = load_matrix(config.matrix_path, config.fmt)
    instance = ProblemInstance.from_matrix(A)
    cfg = SolverConfig(feas_tol=config.feas_tol, opt_tol=config.opt_tol)

    report = bound_h0(instance, cfg)
    oracle = None
    if not config.skip_oracle and config.num_samples > 0:
        x_hat = report.partition.x_hat if report.partition is not None else None
        oracle = lower_bound_monte_carlo(
            instance,
            num_samples=config.num_samples,
            seed=config.seed,
            x_hat=x_hat,
            cfg=cfg,
        )

    payload = report_to_dict(report, oracle, sandwich_rtol=SANDWICH_RTOL)

    if config.output == "json":
        if canonical:
            print(canonical_report_json(payload))
        else:
            print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _print_text(payload)

    if payload["sandwich"] is not None and not payload["sandwich"]["ok"]:
        print(
            "error: sampled lower bound exceeds the certified upper bound",
            file=sys.stderr,
        )
        return EXIT_SANDWICH
    return EXIT_OK


def _print_text(payload: dict) -> None:
    part = payload["partition"]
    bounds = payload["bounds"]
    print(f"branch: {payload['branch']}")
    if part is not None:
        print(f"tight rows B: {part['B']}")
        print(f"slack rows N: {part['N']}")
        print(f"margin t: {part['t']:.6e}")
    for key, label in (("case_N", "slack-block bound"),
                       ("case_B", "tight-block bound"),
                       ("stitch", "restriction factor")):
        block = bounds[key]
        if block is not None:
            print(f"{label}: {block['value']:.12g}")
    print(f"total upper bound: {bounds['total']:.12g}")
    oracle = payload["oracle"]
    if oracle is not None:
        print(f"sampled lower bound: {oracle['lower_bound']:.12g} "
              f"({oracle['samples_used']} candidates, seed {oracle['seed']})")
        sandwich = payload["sandwich"]
        verdict = "consistent" if sandwich["ok"] else "VIOLATED"
        print(f"sandwich check: {verdict}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            matrix_path=args.input,
            fmt=args.format,
            num_samples=args.samples,
            seed=args.seed,
            feas_tol=args.feas_tol,
            opt_tol=args.opt_tol,
            output=args.output,
            skip_oracle=args.skip_oracle,
        )
        return run(config, canonical=args.canonical)
    except (HoffboundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
