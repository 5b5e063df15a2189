"""
Kronecker, Khatri-Rao and Hadamard kernels.

Every Kronecker accumulation runs left to right, t <- a(k) (x) t, so the lowest
mode varies fastest and entries line up with the tensor's vec order. Passing a
CostCounter charges the multiplications to ``mode``.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from .counting import CostCounter
from .errors import ShapeError


def check_factors(factors: Sequence[np.ndarray]) -> int:
    """Validate a factor list and return the common column count R."""
    if len(factors) == 0:
        raise ShapeError("at least one factor matrix is required")
    ranks = set()
    for n, a in enumerate(factors, start=1):
        if np.ndim(a) != 2:
            raise ShapeError(f"factor {n} must be a matrix, got {np.ndim(a)} dimensions")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ShapeError(f"factor {n} has empty shape {a.shape}")
        ranks.add(a.shape[1])
    if len(ranks) != 1:
        raise ShapeError(f"factors disagree on column count: {sorted(ranks)}")
    return ranks.pop()


def kron_vec(
    a: np.ndarray, b: np.ndarray, counter: Optional[CostCounter] = None, mode: int = 0
) -> np.ndarray:
    """kron(a, b): a[0]*b, a[1]*b, ... stacked."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise ShapeError("Kronecker product of an empty vector")
    if counter is not None:
        counter.charge_kron(a.size, b.size, mode)
    return np.outer(a, b).ravel()


def kron_chain(
    vectors: Sequence[np.ndarray],
    counter: Optional[CostCounter] = None,
    mode: int = 0,
) -> np.ndarray:
    """v_last (x) ... (x) v_first for vectors given in ascending mode order.

    The first vector seeds the chain for free; an empty chain is ones(1).
    """
    if len(vectors) == 0:
        return np.ones(1)
    t = np.asarray(vectors[0], dtype=np.float64).ravel()
    for v in vectors[1:]:
        t = kron_vec(v, t, counter, mode)
    return t


def skip_kron_column(
    factors: Sequence[np.ndarray],
    n: int,
    r: int,
    counter: Optional[CostCounter] = None,
    mode: Optional[int] = None,
) -> np.ndarray:
    """Column r (0-based) of the Khatri-Rao product of every factor except mode n.

    When n = 1 the chain starts from ones(1) and every fold is charged.
    """
    check_factors(factors)
    if not 1 <= n <= len(factors):
        raise ShapeError(f"mode {n} outside 1..{len(factors)}")
    mode = n if mode is None else mode
    columns = [np.asarray(a[:, r], dtype=np.float64) for a in factors]
    if n == 1:
        return kron_chain([np.ones(1)] + columns[1:], counter, mode)
    return kron_chain(columns[: n - 1] + columns[n:], counter, mode)


def khatri_rao(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Column-wise Kronecker product X (.) Y of a p x R and a q x R matrix."""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[1] != Y.shape[1]:
        raise ShapeError(
            f"Khatri-Rao needs matrices with equal column counts, got {X.shape} and {Y.shape}"
        )
    p, R = X.shape
    q = Y.shape[0]
    return (X[:, None, :] * Y[None, :, :]).reshape(p * q, R)


def _fold(
    t: np.ndarray, a: np.ndarray, counter: Optional[CostCounter], mode: int
) -> np.ndarray:
    if counter is not None:
        counter.charge(a.shape[0] * t.shape[0] * a.shape[1], mode)
    return khatri_rao(a, t)


def khatri_rao_range(
    factors: Sequence[np.ndarray],
    first: int,
    last: int,
    counter: Optional[CostCounter] = None,
    mode: int = 0,
) -> np.ndarray:
    """A(last) (.) ... (.) A(first) for 1-based modes first..last.

    An empty range (first > last) yields a 1 x R row of ones.
    """
    R = check_factors(factors)
    if first > last:
        return np.ones((1, R))
    if first < 1 or last > len(factors):
        raise ShapeError(f"mode range {first}..{last} outside 1..{len(factors)}")
    t = np.asarray(factors[first - 1], dtype=np.float64)
    for k in range(first + 1, last + 1):
        t = _fold(t, np.asarray(factors[k - 1], dtype=np.float64), counter, mode)
    return t


def khatri_rao_skip(
    factors: Sequence[np.ndarray],
    n: int,
    counter: Optional[CostCounter] = None,
    mode: Optional[int] = None,
) -> np.ndarray:
    """A(N) (.) ... (.) A(n+1) (.) A(n-1) (.) ... (.) A(1), a J_-n x R matrix.

    Column r equals skip_kron_column(factors, n, r) and is charged the same way.
    """
    R = check_factors(factors)
    if not 1 <= n <= len(factors):
        raise ShapeError(f"mode {n} outside 1..{len(factors)}")
    mode = n if mode is None else mode
    mats: List[np.ndarray] = [np.asarray(a, dtype=np.float64) for a in factors]
    if n == 1:
        t = np.ones((1, R))
        rest = mats[1:]
    else:
        t = mats[0]
        rest = mats[1 : n - 1] + mats[n:]
    for a in rest:
        t = _fold(t, a, counter, mode)
    return t


def hadamard(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.shape != Y.shape:
        raise ShapeError(f"Hadamard product of mismatched shapes {X.shape} and {Y.shape}")
    return X * Y


def gram_hadamard_skip(factors: Sequence[np.ndarray], n: int) -> np.ndarray:
    """R x R matrix of the Hadamard product of A(k)^T A(k) over k != n."""
    R = check_factors(factors)
    if not 1 <= n <= len(factors):
        raise ShapeError(f"mode {n} outside 1..{len(factors)}")
    gram = np.ones((R, R))
    for k, a in enumerate(factors, start=1):
        if k != n:
            gram *= a.T @ a
    return gram
