"""
Random benchmark and test problems.
"""

from __future__ import annotations

from typing import Sequence, Tuple, Union

import numpy as np

from ..core.errors import ShapeError
from ..core.kruskal import KruskalModel, full
from ..core.tensor import DenseTensor, Shape


def generate_problem(
    dims: Union[Shape, Sequence[int]], rank: int, seed: int
) -> Tuple[DenseTensor, KruskalModel]:
    """Uniform(0, 1) tensor and initial factors from one seeded generator.

    The tensor is drawn first, then the factors mode by mode, so a seed fixes
    the problem bit for bit.
    """
    shape = Shape.of(dims)
    if rank < 1:
        raise ShapeError(f"rank must be >= 1, got {rank}")
    rng = np.random.default_rng(seed)
    tensor = DenseTensor(rng.uniform(0.0, 1.0, size=shape.size), shape)
    return tensor, KruskalModel.random(shape, rank, rng)


def synthetic_problem(
    dims: Union[Shape, Sequence[int]], rank: int, seed: int
) -> Tuple[DenseTensor, KruskalModel, KruskalModel]:
    """Exactly rank-``rank`` tensor: (full(truth), truth, independent init)."""
    rng = np.random.default_rng(seed)
    truth = KruskalModel.random(dims, rank, rng)
    init = KruskalModel.random(dims, rank, rng)
    return full(truth), truth, init


def estimate_bytes(dims: Union[Shape, Sequence[int]], rank: int) -> int:
    """Rough peak memory of one ALS comparison cell.

    Counts the tensor, one unfolded copy and the largest Khatri-Rao product
    and partial-contraction buffers.
    """
    shape = Shape.of(dims)
    largest_kr = max(shape.without(n) for n in range(1, shape.ndims + 1))
    largest_partial = max(
        max(shape.prefix(n), shape.suffix(n)) for n in range(1, shape.ndims + 1)
    )
    return 8 * (2 * shape.size + rank * (largest_kr + largest_partial) + rank * sum(shape))


def sorted_dims(dims: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted(int(d) for d in dims))


def equal_dims(ndims: int, size: int) -> Tuple[int, ...]:
    if ndims < 1 or size < 1:
        raise ShapeError(f"invalid grid cell N={ndims}, I={size}")
    return (size,) * ndims


def grid_ranks(size: int) -> Tuple[int, ...]:
    """R in {1, 10, 20, ..., I}."""
    return (1,) + tuple(range(10, size + 1, 10))
