"""
Multiplication counting for the MTTKRP kernels.

Counting convention: a matrix product (m x k)(k x p) costs m*k*p, a Kronecker
product of a p-vector and a q-vector costs p*q, additions are free. A
Kronecker chain seeds itself with its first vector at no cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Sequence, Union

from .errors import ArgumentError, UnsupportedOrderError
from .tensor import Shape


class CountVariant(str, Enum):
    """Which closed-form multiplication count to evaluate."""

    DIRECT = "direct"
    FAST = "fast"
    # What the fast kernel actually executes; differs from FAST at n = 1 < n*,
    # at n = n* + 1 when J_n < K_(n-1), and in the trailing-mode term for n > n* + 1.
    FAST_DERIVED = "fast-derived"

    @classmethod
    def parse(cls, value: Union[str, "CountVariant"]) -> "CountVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(v.value for v in cls)
            raise ArgumentError(f"unknown count variant {value!r} (expected one of {choices})")


@dataclass
class CostCounter:
    """Tally of scalar multiplications, keyed by the mode they were spent on.

    Mode 0 collects work not attributed to a particular mode.
    """

    by_mode: Dict[int, int] = field(default_factory=dict)

    def charge(self, mults: int, mode: int = 0) -> None:
        if mults < 0:
            raise ArgumentError(f"cannot charge a negative count ({mults})")
        self.by_mode[mode] = self.by_mode.get(mode, 0) + int(mults)

    def charge_matmul(self, m: int, k: int, p: int, mode: int = 0) -> None:
        self.charge(m * k * p, mode)

    def charge_kron(self, p: int, q: int, mode: int = 0) -> None:
        self.charge(p * q, mode)

    @property
    def total(self) -> int:
        return sum(self.by_mode.values())

    def mode_total(self, mode: int) -> int:
        return self.by_mode.get(mode, 0)

    def reset(self) -> None:
        self.by_mode.clear()

    def snapshot(self) -> Dict[int, int]:
        return dict(self.by_mode)


def select_pivot(shape: Union[Shape, Sequence[int]]) -> int:
    """Return n* = max{n : J_n <= K_n}, searched over 1..N-1.

    For ascending dims J_1 <= K_1 always holds; other inputs fall back to 1.
    """
    shape = Shape.of(shape)
    if shape.ndims < 2:
        raise UnsupportedOrderError(
            f"pivot selection needs at least two modes, got {shape.ndims}"
        )
    pivot = 1
    for n in range(1, shape.ndims):
        if shape.prefix(n) <= shape.suffix(n):
            pivot = n
    return pivot


def predicted_mult_count(
    shape: Union[Shape, Sequence[int]],
    rank: int,
    n: int,
    variant: Union[str, CountVariant] = CountVariant.DIRECT,
) -> int:
    """Closed-form multiplication count for the mode-n CP gradient.

    ``direct`` is the per-mode cost of the unfold-and-multiply kernel,
    ``fast`` the closed-form three-case table for the all-mode kernel and
    ``fast-derived`` the count that kernel executes under this module's
    counting convention.
    """
    shape = Shape.of(shape)
    variant = CountVariant.parse(variant)
    N = shape.ndims
    if not 1 <= n <= N:
        raise ArgumentError(f"mode {n} outside 1..{N}")
    if rank < 1:
        raise ArgumentError(f"rank must be >= 1, got {rank}")

    J = [shape.prefix(k) for k in range(N + 1)]
    K = [shape.suffix(k) for k in range(N + 1)]

    def prefix_sum(lo: int, hi: int) -> int:
        return sum(J[k] for k in range(lo, hi + 1))

    if variant is CountVariant.DIRECT:
        trailing = sum(J[k] // shape.dim(n) for k in range(n + 1, N + 1))
        return rank * (J[N] + prefix_sum(2, n - 1) + trailing)

    if N < 2:
        raise UnsupportedOrderError("the all-mode kernel needs at least two modes")
    derived = variant is CountVariant.FAST_DERIVED
    pivot = select_pivot(shape)
    trailing = sum(J[k] // J[n] for k in range(n + 2, N + 1))

    if n == pivot:
        middle = J[n] if derived else min(J[n], K[n - 1])
        return rank * (prefix_sum(2, n - 1) + middle + trailing + J[N])
    if n == pivot + 1:
        middle = K[n - 1] if derived else min(J[n], K[n - 1])
        return rank * (prefix_sum(2, n - 1) + middle + trailing + J[N])
    if n < pivot:
        return rank * prefix_sum(2, n + 1)
    if not derived:
        trailing = prefix_sum(n + 2, N)
    return rank * (K[n - 2] + K[n - 1] + trailing)
