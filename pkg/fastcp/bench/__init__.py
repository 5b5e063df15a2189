"""
Benchmark harness, problem generators and self-checks.
"""

from .checks import GradCheckReport, run_gradcheck
from .harness import (
    BenchCell,
    BenchConfig,
    BenchRecord,
    count_ratio,
    render_records,
    run_benchmark,
    speed_ratio,
    write_records,
)
from .problems import generate_problem, synthetic_problem

__all__ = [
    "BenchCell",
    "BenchConfig",
    "BenchRecord",
    "GradCheckReport",
    "count_ratio",
    "generate_problem",
    "render_records",
    "run_benchmark",
    "run_gradcheck",
    "speed_ratio",
    "synthetic_problem",
    "write_records",
]
