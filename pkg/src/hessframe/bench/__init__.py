"""Benchmark runner for domain-transformation sweeps."""

from hessframe.bench.lines import LineSlice, line_slice, random_lines, run_lines
from hessframe.bench.output import emit, emit_lines
from hessframe.bench.runner import (
    ExperimentResult,
    Problem,
    RmseRecord,
    build_domain,
    make_problem,
    rmse,
    run_experiment,
    shape_variance,
    summarize,
)
from hessframe.bench.spec import ExperimentSpec, preset, quick

__all__ = [
    "ExperimentResult",
    "ExperimentSpec",
    "LineSlice",
    "Problem",
    "RmseRecord",
    "build_domain",
    "emit",
    "emit_lines",
    "line_slice",
    "make_problem",
    "preset",
    "quick",
    "random_lines",
    "rmse",
    "run_experiment",
    "run_lines",
    "shape_variance",
    "summarize",
]
