"""
fastcp: dense N-way tensors, fast CP gradients and fast ALS.
"""

__version__ = "0.1.0"

from .algorithms import Algorithm, RunTrace, SolveOptions, run
from .core import (
    CostCounter,
    DenseTensor,
    KruskalModel,
    Shape,
    cp_gradient_all,
    mttkrp_direct,
)

__all__ = [
    "Algorithm",
    "CostCounter",
    "DenseTensor",
    "KruskalModel",
    "RunTrace",
    "Shape",
    "SolveOptions",
    "cp_gradient_all",
    "mttkrp_direct",
    "run",
    "__version__",
]
