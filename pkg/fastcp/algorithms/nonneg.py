"""
Multiplicative updates for nonnegative CP.
"""

from __future__ import annotations

import time
from typing import List, Optional

import numpy as np

from ..core.counting import CostCounter
from ..core.errors import ArgumentError, DomainError
from ..core.kron import gram_hadamard_skip
from ..core.kruskal import KruskalModel
from ..core.mttkrp import check_conformable, cp_gradient_all, mttkrp_direct
from ..core.tensor import DenseTensor
from .options import RunTrace, SolveOptions


def check_nonnegative(y: DenseTensor, model: KruskalModel) -> None:
    if np.any(y.values < 0):
        raise DomainError("multiplicative updates need a nonnegative tensor")
    for n, a in enumerate(model.factors, start=1):
        if np.any(a < 0):
            raise DomainError(f"factor {n} has negative entries")


def mu_update_mode(
    factors: List[np.ndarray], n: int, numerator: np.ndarray, epsilon: float
) -> np.ndarray:
    """A(n) * M / (A(n) Gamma(n) + epsilon), elementwise."""
    a = factors[n - 1]
    denominator = a @ gram_hadamard_skip(factors, n) + epsilon
    return a * numerator / denominator


def mu_sweep(
    y: DenseTensor,
    model: KruskalModel,
    opts: Optional[SolveOptions] = None,
    variant: str = "fast",
    counter: Optional[CostCounter] = None,
    trace: Optional[RunTrace] = None,
) -> KruskalModel:
    """One multiplicative-update pass.

    The fast variant updates inside the all-mode kernel (pivot order); the
    direct variant goes through modes 1..N with the unfolding kernel.
    """
    opts = opts or SolveOptions()
    if variant not in ("direct", "fast"):
        raise ArgumentError(f"unknown MU variant {variant!r} (expected direct or fast)")
    check_conformable(y, model.factors)
    check_nonnegative(y, model)
    current = list(model.factors)
    start = time.perf_counter()
    if variant == "direct" or model.ndims < 2:
        for n in range(1, model.ndims + 1):
            numerator = mttkrp_direct(y, current, n, counter)
            current[n - 1] = mu_update_mode(current, n, numerator, opts.mu_epsilon)
    else:

        def update(n: int, numerator: np.ndarray) -> np.ndarray:
            current[n - 1] = mu_update_mode(current, n, numerator, opts.mu_epsilon)
            return current[n - 1]

        cp_gradient_all(y, model.factors, counter, mode_hook=update)
    elapsed = time.perf_counter() - start
    updated = KruskalModel(current)
    if trace is not None:
        trace.record(y, updated, elapsed, counter)
    return updated
