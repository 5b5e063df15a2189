"""
Kruskal (CP) models: reconstruction, least-squares cost and gradients.

The gradient matrices follow the "MTTKRP of the error" form
G(n) = Y(n) KR_{k != n} A(k) - A(n) Gamma(n); the optimizer-facing gradient of
D = ||Y - Yhat||^2 is -2 G(n), stacked mode by mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import settings
from .errors import ShapeError
from .kron import check_factors, gram_hadamard_skip, khatri_rao_range, khatri_rao_skip
from .tensor import DenseTensor, Shape, unfold_prefix


class KruskalModel:
    """Immutable list of N factor matrices A(n) of size I_n x R.

    There are no separate weights; column scaling lives inside the factors.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[np.ndarray]) -> None:
        mats = []
        for n, a in enumerate(factors, start=1):
            m = np.array(a, dtype=np.float64)
            if m.ndim != 2:
                raise ShapeError(f"factor {n} must be a matrix, got {m.ndim} dimensions")
            m.setflags(write=False)
            mats.append(m)
        check_factors(mats)
        self.factors: Tuple[np.ndarray, ...] = tuple(mats)

    @classmethod
    def random(
        cls,
        dims: Union[Shape, Sequence[int]],
        rank: int,
        rng: Optional[np.random.Generator] = None,
    ) -> "KruskalModel":
        """Factors with independent uniform(0, 1) entries, drawn mode by mode."""
        if rank < 1:
            raise ShapeError(f"rank must be >= 1, got {rank}")
        rng = rng if rng is not None else np.random.default_rng(settings.DEFAULT_SEED)
        return cls([rng.uniform(0.0, 1.0, size=(d, rank)) for d in Shape.of(dims)])

    @classmethod
    def zeros(cls, dims: Union[Shape, Sequence[int]], rank: int) -> "KruskalModel":
        return cls([np.zeros((d, rank)) for d in Shape.of(dims)])

    @classmethod
    def from_vector(
        cls, vector: np.ndarray, dims: Union[Shape, Sequence[int]], rank: int
    ) -> "KruskalModel":
        """Inverse of ``to_vector``."""
        dims = Shape.of(dims).dims
        vector = np.asarray(vector, dtype=np.float64).ravel()
        expected = rank * sum(dims)
        if vector.size != expected:
            raise ShapeError(f"vector of length {vector.size}, expected {expected}")
        factors, offset = [], 0
        for d in dims:
            factors.append(vector[offset : offset + d * rank].reshape((d, rank), order="F"))
            offset += d * rank
        return cls(factors)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(a.shape[0] for a in self.factors)

    @property
    def ndims(self) -> int:
        return len(self.factors)

    @property
    def rank(self) -> int:
        return self.factors[0].shape[1]

    def to_vector(self) -> np.ndarray:
        """[vec(A(1)); ...; vec(A(N))] with column-major vec."""
        return np.concatenate([a.ravel(order="F") for a in self.factors])

    def with_factor(self, n: int, a: np.ndarray) -> "KruskalModel":
        """Copy of the model with factor n (1-based) replaced."""
        factors = list(self.factors)
        if np.shape(a) != factors[n - 1].shape:
            raise ShapeError(
                f"replacement for mode {n} has shape {np.shape(a)}, "
                f"expected {factors[n - 1].shape}"
            )
        factors[n - 1] = a
        return KruskalModel(factors)

    def full(self) -> DenseTensor:
        return full(self)

    def __repr__(self) -> str:
        return f"KruskalModel(dims={list(self.dims)}, rank={self.rank})"


@dataclass(frozen=True)
class GradientSet:
    """Per-mode gradient matrices G(n) of size I_n x R."""

    matrices: Tuple[np.ndarray, ...]

    @property
    def stacked(self) -> np.ndarray:
        return stack_gradient(self)

    def __len__(self) -> int:
        return len(self.matrices)


def _check_same_shape(y: DenseTensor, model: KruskalModel) -> None:
    if tuple(y.dims) != model.dims:
        raise ShapeError(f"tensor shape {list(y.dims)} does not match model {list(model.dims)}")


def full(model: KruskalModel) -> DenseTensor:
    """Dense tensor sum_r a_r(1) o ... o a_r(N)."""
    mode1 = model.factors[0] @ khatri_rao_skip(model.factors, 1).T
    return DenseTensor(mode1.ravel(order="F"), model.dims)


def _inner_with_model(y: DenseTensor, model: KruskalModel) -> float:
    N = model.ndims
    lead = khatri_rao_range(model.factors, 1, N - 1)
    partial = lead.T @ unfold_prefix(y, N - 1)
    return float(np.sum(partial * model.factors[-1].T))


def model_norm_squared(model: KruskalModel) -> float:
    gram = np.ones((model.rank, model.rank))
    for a in model.factors:
        gram *= a.T @ a
    return float(gram.sum())


def cost(y: DenseTensor, model: KruskalModel, limit: Optional[int] = None) -> float:
    """D = ||Y - Yhat||_F^2.

    Tensors up to ``limit`` entries (default COST_MATERIALIZE_LIMIT) are
    reconstructed; larger ones use ||Y||^2 - 2<Y, Yhat> + ||Yhat||^2.
    """
    _check_same_shape(y, model)
    limit = settings.COST_MATERIALIZE_LIMIT if limit is None else limit
    if y.size <= limit:
        diff = y.values - full(model).values
        return float(diff @ diff)
    value = y.norm() ** 2 - 2.0 * _inner_with_model(y, model) + model_norm_squared(model)
    return max(value, 0.0)


def relative_error(y: DenseTensor, model: KruskalModel, limit: Optional[int] = None) -> float:
    """||Y - Yhat|| / ||Y||; a zero Y gives 0 for a zero residual and inf otherwise."""
    d = cost(y, model, limit)
    norm = y.norm()
    if norm == 0.0:
        return 0.0 if d == 0.0 else math.inf
    return math.sqrt(d) / norm


def fit(y: DenseTensor, model: KruskalModel, limit: Optional[int] = None) -> float:
    return 1.0 - relative_error(y, model, limit)


def cp_gradient_set(
    y: DenseTensor, model: KruskalModel, mttkrp_results: Sequence[np.ndarray]
) -> GradientSet:
    """G(n) = mttkrp_results[n] - A(n) Gamma(n); the error tensor is never formed."""
    _check_same_shape(y, model)
    if len(mttkrp_results) != model.ndims:
        raise ShapeError(f"{len(mttkrp_results)} MTTKRP results for {model.ndims} modes")
    matrices: List[np.ndarray] = []
    for n, (m, a) in enumerate(zip(mttkrp_results, model.factors), start=1):
        m = np.asarray(m, dtype=np.float64)
        if m.shape != a.shape:
            raise ShapeError(f"MTTKRP result for mode {n} has shape {m.shape}, expected {a.shape}")
        matrices.append(m - a @ gram_hadamard_skip(model.factors, n))
    return GradientSet(tuple(matrices))


def stack_gradient(gs: GradientSet) -> np.ndarray:
    """g = dD/da = -2 [vec(G(1)); ...; vec(G(N))]."""
    return -2.0 * np.concatenate([g.ravel(order="F") for g in gs.matrices])


def unstack_gradient(g: np.ndarray, model: KruskalModel) -> GradientSet:
    g = np.asarray(g, dtype=np.float64).ravel()
    expected = model.rank * sum(model.dims)
    if g.size != expected:
        raise ShapeError(f"stacked gradient of length {g.size}, expected {expected}")
    matrices, offset = [], 0
    for d in model.dims:
        block = g[offset : offset + d * model.rank]
        matrices.append((block / -2.0).reshape((d, model.rank), order="F"))
        offset += d * model.rank
    return GradientSet(tuple(matrices))


def rebalance(model: KruskalModel) -> KruskalModel:
    """Give every column the same norm in all modes; full(model) is unchanged.

    Columns with a zero factor column are left alone.
    """
    norms = np.stack([np.linalg.norm(a, axis=0) for a in model.factors])
    target = np.prod(norms, axis=0) ** (1.0 / model.ndims)
    ok = np.all(norms > 0, axis=0)
    factors = []
    for a, nrm in zip(model.factors, norms):
        scale = np.where(ok, target / np.where(ok, nrm, 1.0), 1.0)
        factors.append(a * scale)
    return KruskalModel(factors)
