"""
Self-checks behind ``fastcp gradcheck``.

Each trial draws a random problem and compares the all-mode kernel with the
direct kernel and an einsum brute force, the stacked gradient with central
finite differences of the cost, and the instrumented multiplication counts
with the closed-form counts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.counting import CostCounter, CountVariant, predicted_mult_count
from ..core.kruskal import KruskalModel, cost, cp_gradient_set, stack_gradient
from ..core.mttkrp import cp_gradient_all, mttkrp_all_direct
from ..core.tensor import DenseTensor
from .problems import generate_problem

logger = logging.getLogger(__name__)

ORACLE_TOL = 1e-12
FD_TOL = 1e-5
# Finite differences are skipped above this many factor entries.
FD_MAX_PARAMS = 400


def brute_force_mttkrp(y: DenseTensor, factors: Sequence[np.ndarray], n: int) -> np.ndarray:
    """sum over i_-n of y(i) prod_{k != n} A(k)[i_k, r], via einsum."""
    N = y.ndims
    rank_axis = N
    operands: list = [y.to_array(), list(range(N))]
    for k, a in enumerate(factors):
        if k != n - 1:
            operands += [np.asarray(a), [k, rank_axis]]
    return np.einsum(*operands, [n - 1, rank_axis])


def finite_difference_gradient(
    y: DenseTensor, model: KruskalModel, step: float = 1e-6
) -> np.ndarray:
    """Central differences of D over the stacked factor vector."""
    base = model.to_vector()
    grad = np.empty_like(base)
    for i in range(base.size):
        h = step * max(1.0, abs(base[i]))
        plus, minus = base.copy(), base.copy()
        plus[i] += h
        minus[i] -= h
        d_plus = cost(y, KruskalModel.from_vector(plus, model.dims, model.rank))
        d_minus = cost(y, KruskalModel.from_vector(minus, model.dims, model.rank))
        grad[i] = (d_plus - d_minus) / (2.0 * h)
    return grad


def relative_difference(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - b| / max |b| (absolute when b is zero)."""
    scale = float(np.max(np.abs(b))) if np.size(b) else 0.0
    diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(b) else 0.0
    return diff / scale if scale > 0 else diff


@dataclass
class CountComparison:
    mode: int
    executed: int
    table: int
    derived: int

    @property
    def matches_table(self) -> bool:
        return self.executed == self.table


@dataclass
class TrialResult:
    dims: List[int]
    rank: int
    oracle_error: float
    fd_error: float
    direct_counts_ok: bool
    fast_counts: List[CountComparison] = field(default_factory=list)

    @property
    def fast_counts_ok(self) -> bool:
        return all(c.executed == c.derived for c in self.fast_counts)

    @property
    def table_mismatches(self) -> List[CountComparison]:
        return [c for c in self.fast_counts if not c.matches_table]

    def passed(self, oracle_tol: float = ORACLE_TOL, fd_tol: float = FD_TOL) -> bool:
        fd_ok = np.isnan(self.fd_error) or self.fd_error <= fd_tol
        return (
            self.oracle_error <= oracle_tol
            and bool(fd_ok)
            and self.direct_counts_ok
            and self.fast_counts_ok
        )


@dataclass
class GradCheckReport:
    trials: List[TrialResult]
    oracle_tol: float = ORACLE_TOL
    fd_tol: float = FD_TOL

    @property
    def passed(self) -> bool:
        return all(t.passed(self.oracle_tol, self.fd_tol) for t in self.trials)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "trial": i + 1,
                    "dims": "x".join(str(d) for d in t.dims),
                    "R": t.rank,
                    "oracle_error": t.oracle_error,
                    "fd_error": t.fd_error,
                    "direct_counts": "ok" if t.direct_counts_ok else "MISMATCH",
                    "fast_counts": "ok" if t.fast_counts_ok else "MISMATCH",
                    "table_mismatch_modes": ",".join(str(c.mode) for c in t.table_mismatches),
                    "passed": t.passed(self.oracle_tol, self.fd_tol),
                }
                for i, t in enumerate(self.trials)
            ]
        )


def check_trial(y: DenseTensor, model: KruskalModel, fd: bool = True) -> TrialResult:
    factors = model.factors
    N = y.ndims
    direct_counter, fast_counter = CostCounter(), CostCounter()
    direct = mttkrp_all_direct(y, factors, direct_counter)
    fast = cp_gradient_all(y, factors, fast_counter)
    oracle_error = 0.0
    for n in range(1, N + 1):
        brute = brute_force_mttkrp(y, factors, n)
        oracle_error = max(
            oracle_error,
            relative_difference(direct[n - 1], brute),
            relative_difference(fast[n - 1], brute),
        )

    fd_error = float("nan")
    if fd and model.rank * sum(model.dims) <= FD_MAX_PARAMS:
        g = stack_gradient(cp_gradient_set(y, model, fast))
        numeric = finite_difference_gradient(y, model)
        fd_error = relative_difference(g, numeric)

    direct_ok = all(
        direct_counter.mode_total(n) == predicted_mult_count(y.dims, model.rank, n, "direct")
        for n in range(1, N + 1)
    )

    order = sorted(range(1, N + 1), key=lambda m: y.shape.dim(m))
    sorted_shape = [y.shape.dim(m) for m in order]
    comparisons = [
        CountComparison(
            mode=original,
            executed=fast_counter.mode_total(original),
            table=predicted_mult_count(sorted_shape, model.rank, k, CountVariant.FAST),
            derived=predicted_mult_count(sorted_shape, model.rank, k, CountVariant.FAST_DERIVED),
        )
        for k, original in enumerate(order, start=1)
    ]
    return TrialResult(list(y.dims), model.rank, oracle_error, fd_error, direct_ok, comparisons)


def run_gradcheck(
    dims: Optional[Sequence[int]] = None,
    rank: Optional[int] = None,
    trials: int = 10,
    seed: int = 0,
    fd: bool = True,
) -> GradCheckReport:
    """Run ``trials`` random checks; dims and rank are drawn when not given."""
    rng = np.random.default_rng(seed)
    results: List[TrialResult] = []
    for t in range(trials):
        trial_dims = list(dims) if dims else list(rng.integers(1, 6, size=int(rng.integers(3, 5))))
        trial_rank = rank if rank else int(rng.integers(1, 4))
        y, model = generate_problem(trial_dims, trial_rank, seed + t)
        result = check_trial(y, model, fd)
        for c in result.table_mismatches:
            logger.warning(
                "trial %d dims=%s mode %d: executed %d, table %d, derived %d",
                t + 1, result.dims, c.mode, c.executed, c.table, c.derived,
            )
        logger.debug("trial %d: oracle=%.2e fd=%.2e", t + 1, result.oracle_error, result.fd_error)
        results.append(result)
    return GradCheckReport(results)
