"""
Alternating least squares, with the direct or the fast CP gradient.

The fast sweep runs the least-squares update inside the all-mode gradient
kernel, so modes are updated in pivot order and every update already sees the
factors replaced earlier in the same sweep.
"""

from __future__ import annotations

import logging
import time
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.linalg import pinvh

from ..config import settings
from ..core.counting import CostCounter
from ..core.errors import ArgumentError, NumericError
from ..core.kron import gram_hadamard_skip
from ..core.kruskal import KruskalModel
from ..core.mttkrp import check_conformable, cp_gradient_all, mttkrp_direct, pivot_order
from ..core.tensor import DenseTensor
from .options import RunTrace, SolveOptions, UpdateOrder

logger = logging.getLogger(__name__)

FactorsLike = Union[KruskalModel, Sequence[np.ndarray]]


def _factors(model: FactorsLike) -> List[np.ndarray]:
    return list(model.factors) if isinstance(model, KruskalModel) else list(model)


def als_update_mode(
    y: DenseTensor,
    model: FactorsLike,
    n: int,
    gradient_matrix: np.ndarray,
    rtol: Optional[float] = None,
) -> np.ndarray:
    """Least-squares update A(n) = M Gamma(n)^+ for M = Y(n) KR_{k != n} A(k)."""
    factors = _factors(model)
    check_conformable(y, factors)
    m = np.asarray(gradient_matrix, dtype=np.float64)
    if m.shape != factors[n - 1].shape:
        raise ArgumentError(
            f"gradient for mode {n} has shape {m.shape}, expected {factors[n - 1].shape}"
        )
    gram = gram_hadamard_skip(factors, n)
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(gram))):
        raise NumericError(f"non-finite values in the mode-{n} least-squares problem")
    rtol = settings.PINV_RTOL if rtol is None else rtol
    updated = m @ pinvh(gram, rtol=rtol)
    if not np.all(np.isfinite(updated)):
        raise NumericError(f"mode-{n} update produced non-finite values")
    return updated


def standard_order(model: KruskalModel, opts: SolveOptions) -> List[int]:
    if opts.mode_order is not None:
        if len(opts.mode_order) != model.ndims:
            raise ArgumentError(
                f"mode order {opts.mode_order} does not cover {model.ndims} modes"
            )
        return list(opts.mode_order)
    if opts.order is UpdateOrder.PIVOT:
        return pivot_order(model.dims)
    return list(range(1, model.ndims + 1))


def als_sweep(
    y: DenseTensor,
    model: KruskalModel,
    opts: Optional[SolveOptions] = None,
    variant: str = "fast",
    counter: Optional[CostCounter] = None,
    trace: Optional[RunTrace] = None,
) -> KruskalModel:
    """One ALS pass over all modes; ``variant`` is "direct" or "fast"."""
    opts = opts or SolveOptions()
    if variant not in ("direct", "fast"):
        raise ArgumentError(f"unknown ALS variant {variant!r} (expected direct or fast)")
    current = _factors(model)
    start = time.perf_counter()
    if variant == "direct":
        for n in standard_order(model, opts):
            grad = mttkrp_direct(y, current, n, counter)
            current[n - 1] = als_update_mode(y, current, n, grad, opts.pinv_rtol)
    else:

        def update(n: int, grad: np.ndarray) -> np.ndarray:
            current[n - 1] = als_update_mode(y, current, n, grad, opts.pinv_rtol)
            return current[n - 1]

        cp_gradient_all(y, model.factors, counter, mode_hook=update)
    elapsed = time.perf_counter() - start
    logger.debug("als sweep variant=%s dims=%s took %.6fs", variant, list(model.dims), elapsed)
    updated = KruskalModel(current)
    if trace is not None:
        trace.record(y, updated, elapsed, counter)
    return updated
