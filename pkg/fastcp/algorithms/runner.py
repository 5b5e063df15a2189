"""
Iteration driver shared by all solvers.
"""

from __future__ import annotations

import logging
from typing import Any, Optional, Tuple

import numpy as np

from ..core.counting import CostCounter
from ..core.errors import ShapeError
from ..core.kruskal import KruskalModel
from ..core.tensor import DenseTensor
from .als import als_sweep
from .gradient_descent import gd_step
from .nonneg import mu_sweep
from .options import Algorithm, RunTrace, SolveOptions

logger = logging.getLogger(__name__)

_COST_FLOOR = float(np.finfo(np.float64).eps)


def _sweep(
    algorithm: Algorithm,
    y: DenseTensor,
    model: KruskalModel,
    opts: SolveOptions,
    counter: CostCounter,
    trace: RunTrace,
) -> KruskalModel:
    if algorithm is Algorithm.ALS_DIRECT:
        return als_sweep(y, model, opts, "direct", counter, trace)
    if algorithm is Algorithm.ALS_FAST:
        return als_sweep(y, model, opts, "fast", counter, trace)
    if algorithm is Algorithm.MU:
        return mu_sweep(y, model, opts, "fast", counter, trace)
    return gd_step(y, model, opts.step, "fast", counter, trace)


def run(
    y: DenseTensor,
    init: KruskalModel,
    opts: Optional[SolveOptions] = None,
    algorithm: Any = Algorithm.ALS_FAST,
    counter: Optional[CostCounter] = None,
) -> Tuple[KruskalModel, RunTrace]:
    """Iterate ``algorithm`` from ``init`` until max_iters or the cost settles.

    A run stops early when |D_t - D_(t-1)| / max(D_(t-1), eps) < opts.tol;
    tol = 0 always performs max_iters sweeps.
    """
    algorithm = Algorithm.parse(algorithm)
    opts = opts or SolveOptions()
    if tuple(y.dims) != init.dims:
        raise ShapeError(f"tensor shape {list(y.dims)} does not match model {list(init.dims)}")
    counter = counter if counter is not None else CostCounter()
    trace = RunTrace.start(algorithm.value, y, init)
    logger.debug(
        "run %s dims=%s R=%d max_iters=%d tol=%g",
        algorithm.value, list(y.dims), init.rank, opts.max_iters, opts.tol,
    )

    model = init
    previous = trace.initial_cost
    for it in range(1, opts.max_iters + 1):
        model = _sweep(algorithm, y, model, opts, counter, trace)
        current = trace.costs[-1]
        logger.debug(
            "%s sweep %d: cost=%.6g rel_error=%.3e %.4fs",
            algorithm.value, it, current, trace.rel_errors[-1], trace.seconds[-1],
        )
        if opts.tol > 0 and abs(current - previous) / max(previous, _COST_FLOOR) < opts.tol:
            trace.converged = True
            break
        previous = current

    logger.info(
        "%s finished after %d sweeps: rel_error=%.3e (%.3fs)",
        algorithm.value, trace.iterations, trace.rel_errors[-1], trace.total_seconds,
    )
    return model, trace
