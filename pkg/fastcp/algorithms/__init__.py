"""
CP solvers built on the direct and fast gradient kernels.
"""

from .als import als_sweep, als_update_mode
from .gradient_descent import gd_step
from .nonneg import mu_sweep
from .options import Algorithm, RunTrace, SolveOptions, UpdateOrder
from .runner import run

__all__ = [
    "Algorithm",
    "RunTrace",
    "SolveOptions",
    "UpdateOrder",
    "als_sweep",
    "als_update_mode",
    "gd_step",
    "mu_sweep",
    "run",
]
