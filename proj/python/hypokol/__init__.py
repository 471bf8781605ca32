"""Parametrix solver for a degenerate Kolmogorov-type boundary value problem."""

from ._hypokol import (
    HypokolError,
    Probe,
    Problem,
    chi,
    kernel,
    load_problem,
    operator_matrix,
    oracle,
    parse_problem,
    run_cli,
    run_suite,
    solve,
    suite_names,
)

__all__ = [
    "HypokolError",
    "Probe",
    "Problem",
    "chi",
    "kernel",
    "load_problem",
    "operator_matrix",
    "oracle",
    "parse_problem",
    "run_cli",
    "run_suite",
    "solve",
    "suite_names",
]
