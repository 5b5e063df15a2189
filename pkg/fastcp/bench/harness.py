"""
Timing harness comparing ordinary and fast ALS on identical random problems.

Each cell (dims, R) is run ``reps`` times; every repetition draws a fresh
problem from ``seed + rep`` and runs both algorithms from the same initial
factors for ``iters`` sweeps with no stopping rule. Only the sweeps are timed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import psutil
from pydantic import BaseModel, Field, ValidationError, validator

from ..algorithms.options import Algorithm, SolveOptions, UpdateOrder
from ..algorithms.runner import run
from ..config import settings
from ..core.counting import CostCounter, CountVariant, predicted_mult_count
from ..core.errors import ArgumentError, BenchOutputError, FastCPError
from ..core.utils.helpers import format_dims
from .problems import equal_dims, estimate_bytes, generate_problem, grid_ranks, sorted_dims

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "N",
    "dims",
    "R",
    "iters",
    "reps",
    "t_direct",
    "t_fast",
    "rho",
    "mults_direct",
    "mults_fast",
    "count_ratio",
    "rho_runs",
    "rho_ref",
    "factor_diff",
    "status",
]

# Reference per-iteration speed-ups for equal dims, keyed by (N, I, R).
REFERENCE_RHO: Dict[Tuple[int, int, int], float] = {
    (5, 20, 1): 33.1,
    (5, 20, 10): 19.3,
    (5, 20, 20): 19.6,
    (5, 30, 1): 62.1,
    (5, 30, 10): 21.9,
    (5, 30, 20): 21.2,
    (5, 30, 30): 17.3,
    (5, 40, 1): 83.1,
    (5, 40, 10): 21.6,
    (5, 40, 20): 20.1,
    (5, 40, 30): 17.6,
    (5, 40, 40): 31.6,
    (6, 20, 1): 102.9,
    (6, 20, 10): 24.2,
    (6, 20, 20): 34.7,
    (7, 10, 10): 42.2,
}


class BenchCell(BaseModel):
    dims: List[int]
    rank: int = Field(..., ge=1)

    @validator("dims")
    def _check_dims(cls, value: List[int]) -> List[int]:
        if len(value) < 2:
            raise ValueError("benchmark tensors need at least two modes")
        if any(d < 1 for d in value):
            raise ValueError(f"dims must be >= 1, got {value}")
        return value


class BenchConfig(BaseModel):
    """One benchmark invocation: the cells to time and how to time them."""

    cells: List[BenchCell]
    iters: int = Field(default_factory=lambda: settings.DEFAULT_ITERS, ge=1)
    reps: Optional[int] = Field(None, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    algos: Tuple[str, str] = ("als-direct", "als-fast")
    # Run the baseline ALS in the fast kernel's mode order so final models match.
    match_order: bool = False
    mem_budget: int = Field(default_factory=lambda: settings.BENCH_MEM_BUDGET, ge=1)
    out: Optional[Path] = None
    output_format: str = "table"

    class Config:
        extra = "forbid"

    @validator("algos")
    def _check_algos(cls, value: Tuple[str, str]) -> Tuple[str, str]:
        for name in value:
            Algorithm(name)
        if value[0] == value[1]:
            raise ValueError(f"algorithms must differ, got {value[0]!r} twice")
        return value

    @validator("output_format")
    def _check_format(cls, value: str) -> str:
        if value not in ("csv", "table"):
            raise ValueError(f"format must be csv or table, got {value!r}")
        return value

    @classmethod
    def create(cls, **kwargs) -> "BenchConfig":
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise ArgumentError(f"invalid benchmark configuration: {exc}") from exc

    @classmethod
    def single(cls, dims: List[int], rank: int, **kwargs) -> "BenchConfig":
        return cls.create(cells=[{"dims": list(dims), "rank": rank}], **kwargs)

    @classmethod
    def default_grid(cls, **kwargs) -> "BenchConfig":
        """Equal-dims grid N x I from settings, R in {1, 10, ..., I}."""
        cells = [
            {"dims": list(equal_dims(n, size)), "rank": rank}
            for n in settings.BENCH_GRID_NDIMS
            for size in settings.BENCH_GRID_SIZES
            for rank in grid_ranks(size)
        ]
        return cls.create(cells=cells, **kwargs)

    @property
    def effective_reps(self) -> int:
        if self.reps is not None:
            return self.reps
        return max(1, math.ceil(settings.BENCH_MIN_MEASURED_ITERS / self.iters))


@dataclass
class BenchRecord:
    N: int
    dims: str
    R: int
    iters: int
    reps: int
    t_direct: float
    t_fast: float
    rho: float
    mults_direct: float
    mults_fast: float
    count_ratio: float
    rho_runs: float
    rho_ref: float
    factor_diff: float
    status: str


def speed_ratio(t_als: float, t_fast: float) -> float:
    """rho = per-iteration time of ordinary ALS / per-iteration time of fast ALS."""
    for name, value in (("t_als", t_als), ("t_fast", t_fast)):
        if not (math.isfinite(value) and value > 0):
            raise ArgumentError(f"{name} must be a positive time, got {value}")
    return t_als / t_fast


def count_ratio(dims: List[int], rank: int) -> float:
    """Sum over modes of predicted direct counts / predicted fast counts, on sorted dims."""
    shape = sorted_dims(dims)
    modes = range(1, len(shape) + 1)
    direct = sum(predicted_mult_count(shape, rank, n, CountVariant.DIRECT) for n in modes)
    fast = sum(predicted_mult_count(shape, rank, n, CountVariant.FAST) for n in modes)
    return direct / fast


def reference_rho(dims: List[int], rank: int) -> float:
    if len(set(dims)) != 1:
        return math.nan
    return REFERENCE_RHO.get((len(dims), dims[0], rank), math.nan)


def _max_factor_diff(a, b) -> float:
    diffs = [
        np.linalg.norm(x - y) / max(np.linalg.norm(x), np.finfo(np.float64).tiny)
        for x, y in zip(a.factors, b.factors)
    ]
    return float(max(diffs))


def _solve_options(cfg: BenchConfig, algorithm: Algorithm) -> SolveOptions:
    order = UpdateOrder.STANDARD
    if cfg.match_order and algorithm is Algorithm.ALS_DIRECT:
        order = UpdateOrder.PIVOT
    return SolveOptions.create(max_iters=cfg.iters, tol=0.0, order=order, seed=cfg.seed)


def _empty_record(cell: BenchCell, cfg: BenchConfig, status: str) -> BenchRecord:
    nan = math.nan
    return BenchRecord(
        N=len(cell.dims),
        dims=format_dims(cell.dims),
        R=cell.rank,
        iters=cfg.iters,
        reps=cfg.effective_reps,
        t_direct=nan,
        t_fast=nan,
        rho=nan,
        mults_direct=nan,
        mults_fast=nan,
        count_ratio=count_ratio(cell.dims, cell.rank),
        rho_runs=nan,
        rho_ref=reference_rho(cell.dims, cell.rank),
        factor_diff=nan,
        status=status,
    )


def run_cell(cell: BenchCell, cfg: BenchConfig) -> BenchRecord:
    """Time both algorithms on one (dims, R) cell."""
    needed = estimate_bytes(cell.dims, cell.rank)
    available = psutil.virtual_memory().available
    if needed > cfg.mem_budget or needed > available:
        logger.warning(
            "skipping %s R=%d: needs ~%d bytes (budget %d, available %d)",
            format_dims(cell.dims), cell.rank, needed, cfg.mem_budget, available,
        )
        return _empty_record(cell, cfg, "skipped-memory")

    baseline, candidate = (Algorithm(a) for a in cfg.algos)
    reps = cfg.effective_reps
    per_iter = {baseline: [], candidate: []}
    mults = {}
    diff = math.nan
    for rep in range(reps):
        y, init = generate_problem(cell.dims, cell.rank, cfg.seed + rep)
        finals = {}
        for algorithm in (baseline, candidate):
            counter = CostCounter()
            model, trace = run(y, init, _solve_options(cfg, algorithm), algorithm, counter)
            per_iter[algorithm].append(trace.total_seconds / trace.iterations)
            mults.setdefault(algorithm, counter.total / trace.iterations)
            finals[algorithm] = model
        if rep == 0 and cfg.match_order:
            diff = _max_factor_diff(finals[baseline], finals[candidate])

    t_direct = float(np.mean(per_iter[baseline]))
    t_fast = float(np.mean(per_iter[candidate]))
    runs = [speed_ratio(a, b) for a, b in zip(per_iter[baseline], per_iter[candidate])]
    record = BenchRecord(
        N=len(cell.dims),
        dims=format_dims(cell.dims),
        R=cell.rank,
        iters=cfg.iters,
        reps=reps,
        t_direct=t_direct,
        t_fast=t_fast,
        rho=speed_ratio(t_direct, t_fast),
        mults_direct=mults[baseline],
        mults_fast=mults[candidate],
        count_ratio=count_ratio(cell.dims, cell.rank),
        rho_runs=float(np.mean(runs)),
        rho_ref=reference_rho(cell.dims, cell.rank),
        factor_diff=diff,
        status="ok",
    )
    logger.info(
        "cell %s R=%d: t_direct=%.3es t_fast=%.3es rho=%.2f count_ratio=%.2f",
        record.dims, record.R, t_direct, t_fast, record.rho, record.count_ratio,
    )
    return record


def run_benchmark(cfg: BenchConfig) -> List[BenchRecord]:
    """Run every cell in order; write the table when ``cfg.out`` is set."""
    vm = psutil.virtual_memory()
    logger.info(
        "benchmark: %d cells, iters=%d reps=%d seed=%d on %s logical CPUs, %.1f GiB RAM",
        len(cfg.cells), cfg.iters, cfg.effective_reps, cfg.seed,
        psutil.cpu_count(), vm.total / float(1 << 30),
    )
    records: List[BenchRecord] = []
    for cell in cfg.cells:
        try:
            records.append(run_cell(cell, cfg))
        except (FastCPError, np.linalg.LinAlgError) as exc:
            logger.error("cell %s R=%d failed: %s", format_dims(cell.dims), cell.rank, exc)
            records.append(_empty_record(cell, cfg, f"failed: {exc}"))
    if cfg.out is not None:
        write_records(records, cfg.out, cfg.output_format)
    return records


def records_frame(records: List[BenchRecord]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in records], columns=CSV_COLUMNS)


def render_records(records: List[BenchRecord], output_format: str = "table") -> str:
    frame = records_frame(records)
    if output_format == "csv":
        return frame.to_csv(index=False)
    return frame.to_string(index=False, float_format=lambda v: f"{v:.4g}") + "\n"


def write_records(records: List[BenchRecord], path: Path, output_format: str = "csv") -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_records(records, output_format), encoding="utf-8")
    except OSError as exc:
        raise BenchOutputError(f"cannot write benchmark results ({exc.strerror})", str(path)) from exc
    logger.info("wrote %d records to %s", len(records), path)
    return path
