"""
Solver options and per-run traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, validator

from ..config import settings
from ..core.counting import CostCounter
from ..core.errors import ArgumentError
from ..core.kruskal import KruskalModel, cost
from ..core.tensor import DenseTensor


class Algorithm(str, Enum):
    ALS_DIRECT = "als-direct"
    ALS_FAST = "als-fast"
    MU = "mu"
    GD = "gd"

    @classmethod
    def parse(cls, value: Any) -> "Algorithm":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(a.value for a in cls)
            raise ArgumentError(f"unknown algorithm {value!r} (expected one of {choices})")


class UpdateOrder(str, Enum):
    """Mode order of the direct ALS sweep: 1..N, or the fast kernel's pivot order."""

    STANDARD = "standard"
    PIVOT = "pivot"


class SolveOptions(BaseModel):
    """Options shared by every solver; defaults come from ``settings``."""

    max_iters: int = Field(default_factory=lambda: settings.DEFAULT_ITERS, ge=1)
    # Relative cost change below which a run stops; 0 runs all max_iters sweeps.
    tol: float = Field(0.0, ge=0.0)
    pinv_rtol: float = Field(default_factory=lambda: settings.PINV_RTOL, ge=0.0)
    order: UpdateOrder = UpdateOrder.STANDARD
    mode_order: Optional[List[int]] = None
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    step: float = Field(default_factory=lambda: settings.GD_STEP, gt=0.0)
    mu_epsilon: float = Field(default_factory=lambda: settings.MU_EPSILON, gt=0.0)

    class Config:
        extra = "forbid"
        allow_mutation = False

    @validator("mode_order")
    def _check_mode_order(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None and sorted(value) != list(range(1, len(value) + 1)):
            raise ValueError(f"{value} is not a permutation of 1..{len(value)}")
        return value

    @classmethod
    def create(cls, **kwargs: Any) -> "SolveOptions":
        """Build options, reporting invalid values as ArgumentError."""
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise ArgumentError(f"invalid solver options: {exc}") from exc


@dataclass
class RunTrace:
    """Per-sweep record of a run. Every list has one entry per completed sweep."""

    algorithm: str
    initial_cost: float
    data_norm: float
    costs: List[float] = field(default_factory=list)
    rel_errors: List[float] = field(default_factory=list)
    fits: List[float] = field(default_factory=list)
    seconds: List[float] = field(default_factory=list)
    mults: List[int] = field(default_factory=list)
    converged: bool = False

    @classmethod
    def start(cls, algorithm: str, y: DenseTensor, init: KruskalModel) -> "RunTrace":
        return cls(algorithm=algorithm, initial_cost=cost(y, init), data_norm=y.norm())

    @property
    def iterations(self) -> int:
        return len(self.costs)

    @property
    def total_seconds(self) -> float:
        return float(sum(self.seconds))

    def record(
        self,
        y: DenseTensor,
        model: KruskalModel,
        seconds: float,
        counter: Optional[CostCounter] = None,
    ) -> None:
        d = cost(y, model)
        if self.data_norm > 0:
            rel = math.sqrt(d) / self.data_norm
        else:
            rel = 0.0 if d == 0.0 else math.inf
        self.costs.append(d)
        self.rel_errors.append(rel)
        self.fits.append(1.0 - rel)
        self.seconds.append(float(seconds))
        self.mults.append(counter.total if counter is not None else 0)

    def to_records(self) -> List[Dict[str, Any]]:
        return [
            {
                "iteration": i + 1,
                "cost": self.costs[i],
                "rel_error": self.rel_errors[i],
                "fit": self.fits[i],
                "seconds": self.seconds[i],
                "mults": self.mults[i],
            }
            for i in range(self.iterations)
        ]
