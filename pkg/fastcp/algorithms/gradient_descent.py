"""
Plain gradient descent on the stacked factor vector.
"""

from __future__ import annotations

import math
import time
from typing import Optional

from ..config import settings
from ..core.counting import CostCounter
from ..core.errors import ArgumentError
from ..core.kruskal import KruskalModel, cp_gradient_set, stack_gradient
from ..core.mttkrp import cp_gradient_all, mttkrp_all_direct
from ..core.tensor import DenseTensor
from .options import RunTrace


def gd_step(
    y: DenseTensor,
    model: KruskalModel,
    eta: Optional[float] = None,
    variant: str = "fast",
    counter: Optional[CostCounter] = None,
    trace: Optional[RunTrace] = None,
    strict: bool = True,
) -> KruskalModel:
    """a <- a - eta * g, with every factor moved from the same pre-step gradient.

    ``strict=False`` also accepts eta = 0, which leaves the model unchanged.
    """
    eta = settings.GD_STEP if eta is None else float(eta)
    if not math.isfinite(eta) or eta < 0 or (strict and eta == 0):
        raise ArgumentError(f"step size must be positive, got {eta}")
    if variant not in ("direct", "fast"):
        raise ArgumentError(f"unknown gradient variant {variant!r} (expected direct or fast)")
    start = time.perf_counter()
    if variant == "fast" and model.ndims >= 2:
        products = cp_gradient_all(y, model.factors, counter)
    else:
        products = mttkrp_all_direct(y, model.factors, counter)
    g = stack_gradient(cp_gradient_set(y, model, products))
    updated = KruskalModel.from_vector(model.to_vector() - eta * g, model.dims, model.rank)
    elapsed = time.perf_counter() - start
    if trace is not None:
        trace.record(y, updated, elapsed, counter)
    return updated
