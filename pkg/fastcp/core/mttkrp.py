"""
CP gradients Y(n) (KR_{k != n} A(k)) for dense tensors.

``mttkrp_direct`` unfolds the tensor along mode n and multiplies by the full
Khatri-Rao product. ``cp_gradient_all`` computes every mode at once from the
prefix unfoldings only: it sorts the modes ascending, starts at the pivot
n* = max{n : J_n <= K_n}, walks right partials down to mode 1 and left partials
up to mode N, reusing each partial for the next mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .counting import CostCounter, select_pivot
from .errors import ShapeError, UnsupportedOrderError
from .kron import check_factors, khatri_rao_range, khatri_rao_skip
from .tensor import DenseTensor, Shape, permute, unfold_prefix

logger = logging.getLogger(__name__)

# Called as hook(mode, gradient) with the original 1-based mode number; a
# non-None return value replaces that mode's factor before the sweep continues.
ModeHook = Callable[[int, np.ndarray], Optional[np.ndarray]]


# ─── Mode bookkeeping ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class ModePermutation:
    """Sorted position k (1-based) holds original mode ``perm[k - 1]``."""

    perm: Tuple[int, ...]

    @classmethod
    def identity(cls, ndims: int) -> "ModePermutation":
        return cls(tuple(range(1, ndims + 1)))

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(1, len(self.perm) + 1))

    def to_original(self, sorted_mode: int) -> int:
        return self.perm[sorted_mode - 1]

    def to_sorted(self, original_mode: int) -> int:
        return self.perm.index(original_mode) + 1

    def apply(self, items: Sequence) -> list:
        """Reorder per-mode items from original into sorted order."""
        return [items[p - 1] for p in self.perm]

    def restore(self, items: Sequence) -> list:
        """Reorder per-mode items from sorted back into original order."""
        out: list = [None] * len(self.perm)
        for k, p in enumerate(self.perm):
            out[p - 1] = items[k]
        return out


def sort_modes(
    y: DenseTensor, factors: Sequence[np.ndarray]
) -> Tuple[DenseTensor, List[np.ndarray], ModePermutation]:
    """Stable-sort modes by ascending dimension; ties keep their original order."""
    order = sorted(range(1, y.ndims + 1), key=lambda m: y.shape.dim(m))
    perm = ModePermutation(tuple(order))
    if perm.is_identity:
        return y, list(factors), perm
    return permute(y, perm.perm), perm.apply(factors), perm


def pivot_order(dims: Union[Shape, Sequence[int]]) -> List[int]:
    """Processing order n*, n*-1, ..., 1, n*+1, ..., N in original mode numbers."""
    dims = tuple(Shape.of(dims).dims)
    order = sorted(range(1, len(dims) + 1), key=lambda m: dims[m - 1])
    perm = ModePermutation(tuple(order))
    pivot = select_pivot([dims[m - 1] for m in order])
    steps = list(range(pivot, 0, -1)) + list(range(pivot + 1, len(dims) + 1))
    return [perm.to_original(k) for k in steps]


def check_conformable(y: DenseTensor, factors: Sequence[np.ndarray]) -> int:
    """Check factor n has I_n rows and all share R columns; return R."""
    if len(factors) != y.ndims:
        raise ShapeError(f"{len(factors)} factors given for a {y.ndims}-way tensor")
    rank = check_factors(factors)
    for n, a in enumerate(factors, start=1):
        if a.shape[0] != y.shape.dim(n):
            raise ShapeError(
                f"factor {n} has {a.shape[0]} rows, mode {n} has size {y.shape.dim(n)}"
            )
    return rank


# ─── Direct computation ──────────────────────────────────────────────────────


def mttkrp_direct(
    y: DenseTensor,
    factors: Sequence[np.ndarray],
    n: int,
    counter: Optional[CostCounter] = None,
) -> np.ndarray:
    """Y(n) (KR_{k != n} A(k)) by permuting mode n to the front and multiplying."""
    rank = check_conformable(y, factors)
    if not 1 <= n <= y.ndims:
        raise ShapeError(f"mode {n} outside 1..{y.ndims}")
    front = [n] + [m for m in range(1, y.ndims + 1) if m != n]
    y_n = unfold_prefix(permute(y, front), 1)
    kr = khatri_rao_skip(factors, n, counter)
    if counter is not None:
        counter.charge_matmul(y_n.shape[0], y_n.shape[1], rank, n)
    return y_n @ kr


def mttkrp_all_direct(
    y: DenseTensor,
    factors: Sequence[np.ndarray],
    counter: Optional[CostCounter] = None,
) -> List[np.ndarray]:
    return [mttkrp_direct(y, factors, n, counter) for n in range(1, y.ndims + 1)]


# ─── Projection partials ─────────────────────────────────────────────────────


@dataclass
class ProjectionCache:
    """Per-column partial contractions reused across neighbouring modes.

    ``columns[r]`` is vec of the right partial (modes 1..mode kept, length J_mode)
    or of the left partial (modes mode..N kept, length K_(mode-1)).
    """

    side: str
    mode: int
    columns: np.ndarray

    @property
    def rank(self) -> int:
        return self.columns.shape[0]


def _charge(counter: Optional[CostCounter], m: int, k: int, p: int, mode: int) -> None:
    if counter is not None:
        counter.charge_matmul(m, k, p, mode)


def _right_start(y, factors, pivot, rank, counter, mode) -> ProjectionCache:
    shape = y.shape
    kr = khatri_rao_range(factors, pivot + 1, shape.ndims, counter, mode)
    _charge(counter, shape.prefix(pivot), shape.suffix(pivot), rank, mode)
    partial = unfold_prefix(y, pivot) @ kr
    return ProjectionCache("right", pivot, np.ascontiguousarray(partial.T))


def _right_step(cache, factors, shape, counter, mode) -> ProjectionCache:
    n = cache.mode
    m = n - 1
    blocks = cache.columns.reshape(cache.rank, shape.dim(n), shape.prefix(m))
    _charge(counter, shape.prefix(m), shape.dim(n), cache.rank, mode)
    a = factors[n - 1]
    columns = (a.T[:, None, :] @ blocks)[:, 0, :]
    return ProjectionCache("right", m, columns)


def _right_gradient(cache, factors, shape, counter, mode) -> np.ndarray:
    n = cache.mode
    lead = khatri_rao_range(factors, 1, n - 1, counter, mode)
    blocks = cache.columns.reshape(cache.rank, shape.dim(n), shape.prefix(n - 1))
    _charge(counter, shape.dim(n), shape.prefix(n - 1), cache.rank, mode)
    return (blocks @ lead.T[:, :, None])[:, :, 0].T


def _left_start(y, factors, pivot, rank, counter, mode) -> ProjectionCache:
    shape = y.shape
    kr = khatri_rao_range(factors, 1, pivot, counter, mode)
    _charge(counter, rank, shape.prefix(pivot), shape.suffix(pivot), mode)
    columns = np.ascontiguousarray(kr.T @ unfold_prefix(y, pivot))
    return ProjectionCache("left", pivot + 1, columns)


def _left_step(cache, factors, shape, counter, mode) -> ProjectionCache:
    n = cache.mode
    blocks = cache.columns.reshape(cache.rank, shape.suffix(n), shape.dim(n))
    _charge(counter, shape.suffix(n), shape.dim(n), cache.rank, mode)
    a = factors[n - 1]
    columns = (blocks @ a.T[:, :, None])[:, :, 0]
    return ProjectionCache("left", n + 1, columns)


def _left_gradient(cache, factors, shape, counter, mode) -> np.ndarray:
    n = cache.mode
    trail = khatri_rao_range(factors, n + 1, shape.ndims, counter, mode)
    blocks = cache.columns.reshape(cache.rank, shape.suffix(n), shape.dim(n))
    _charge(counter, shape.dim(n), shape.suffix(n), cache.rank, mode)
    return (trail.T[:, None, :] @ blocks)[:, 0, :].T


# ─── All-mode computation ────────────────────────────────────────────────────


def cp_gradient_all(
    y: DenseTensor,
    factors: Sequence[np.ndarray],
    counter: Optional[CostCounter] = None,
    mode_hook: Optional[ModeHook] = None,
) -> List[np.ndarray]:
    """Every Y(n) (KR_{k != n} A(k)), n = 1..N, without unfolding 1 < n < N.

    Modes are processed in ``pivot_order``. ``mode_hook`` runs right after each
    mode's gradient and may return a replacement factor; later modes then see
    the replaced factor, which turns one call into an ALS sweep.
    """
    if y.ndims < 2:
        raise UnsupportedOrderError("the all-mode gradient needs at least two modes")
    rank = check_conformable(y, factors)
    ys, sorted_factors, perm = sort_modes(y, factors)
    work = [np.asarray(a, dtype=np.float64) for a in sorted_factors]
    shape = ys.shape
    N = shape.ndims
    pivot = select_pivot(shape)
    logger.debug("cp_gradient_all dims=%s pivot=%d perm=%s", list(shape.dims), pivot, perm.perm)

    gradients: List[Optional[np.ndarray]] = [None] * N

    def finish(k: int, grad: np.ndarray) -> None:
        original = perm.to_original(k)
        gradients[original - 1] = grad
        if mode_hook is None:
            return
        replacement = mode_hook(original, grad)
        if replacement is None:
            return
        replacement = np.asarray(replacement, dtype=np.float64)
        if replacement.shape != work[k - 1].shape:
            raise ShapeError(
                f"replacement for mode {original} has shape {replacement.shape}, "
                f"expected {work[k - 1].shape}"
            )
        work[k - 1] = replacement

    cache = _right_start(ys, work, pivot, rank, counter, perm.to_original(pivot))
    finish(pivot, _right_gradient(cache, work, shape, counter, perm.to_original(pivot)))
    for k in range(pivot - 1, 0, -1):
        mode = perm.to_original(k)
        cache = _right_step(cache, work, shape, counter, mode)
        if k == 1:
            # The mode-1 right partial is the gradient itself.
            finish(k, cache.columns.T.copy())
        else:
            finish(k, _right_gradient(cache, work, shape, counter, mode))

    cache = _left_start(ys, work, pivot, rank, counter, perm.to_original(pivot + 1))
    finish(pivot + 1, _left_gradient(cache, work, shape, counter, perm.to_original(pivot + 1)))
    for k in range(pivot + 2, N + 1):
        mode = perm.to_original(k)
        cache = _left_step(cache, work, shape, counter, mode)
        finish(k, _left_gradient(cache, work, shape, counter, mode))

    return gradients  # type: ignore[return-value]
