"""
Dense N-way tensors stored as a single first-index-fastest value sequence.

Modes and indices are 1-based at the API surface: the element at multi-index
(i1, ..., iN) sits at linear position 1 + sum((in - 1) * J(n-1)). Prefix
unfoldings Y(1:n) are therefore metadata-only reshapes of the stored vector;
every other unfolding materializes a copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ArgumentError, ShapeError, TensorIndexError


@dataclass(frozen=True)
class Shape:
    """Dimension vector I1..IN with prefix products Jn and suffix products Kn."""

    dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1:
            raise ShapeError("a tensor needs at least one mode")
        for n, d in enumerate(dims, start=1):
            if d < 1:
                raise ShapeError(f"dimension of mode {n} must be >= 1, got {d}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, dims: Union["Shape", Sequence[int]]) -> "Shape":
        return dims if isinstance(dims, Shape) else cls(tuple(dims))

    @property
    def ndims(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        """J_N, the number of entries."""
        return math.prod(self.dims)

    def dim(self, n: int) -> int:
        """I_n for a 1-based mode n."""
        return self.dims[n - 1]

    def prefix(self, n: int) -> int:
        """J_n = I1 * ... * In, with J_0 = 1."""
        return math.prod(self.dims[:n])

    def suffix(self, n: int) -> int:
        """K_n = I(n+1) * ... * IN, with K_N = 1."""
        return math.prod(self.dims[n:])

    def without(self, n: int) -> int:
        """J_-n = J_N / I_n."""
        return self.prefix(n - 1) * self.suffix(n)

    def permuted(self, perm: Sequence[int]) -> "Shape":
        return Shape(tuple(self.dims[p - 1] for p in perm))

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


class DenseTensor:
    """Immutable dense tensor: a Shape plus its vec(Y) as a float64 array.

    Examples
    --------
    >>> t = DenseTensor(np.arange(1, 9), [2, 2, 2])
    >>> t.to_array()[1, 0, 1]
    6.0
    """

    __slots__ = ("shape", "values")

    def __init__(
        self,
        values: Union[Sequence[float], np.ndarray],
        shape: Union[Shape, Sequence[int]],
    ) -> None:
        shape = Shape.of(shape)
        data = np.array(values, dtype=np.float64)
        if data.ndim != 1:
            data = data.reshape(-1, order="F")
        if data.size != shape.size:
            raise ShapeError(
                f"{data.size} values given for shape {list(shape.dims)} "
                f"({shape.size} entries)"
            )
        data.setflags(write=False)
        self.shape: Shape = shape
        self.values: np.ndarray = data

    @classmethod
    def _wrap(cls, values: np.ndarray, shape: Shape) -> "DenseTensor":
        # Shares ``values``; callers guarantee it is a read-only vec.
        t = cls.__new__(cls)
        t.shape = shape
        t.values = values
        return t

    @classmethod
    def from_array(cls, array: np.ndarray) -> "DenseTensor":
        """Build a tensor from a numpy array indexed as array[i1-1, ..., iN-1]."""
        array = np.asarray(array, dtype=np.float64)
        if array.ndim == 0:
            raise ShapeError("cannot build a tensor from a 0-d array")
        return cls(array.ravel(order="F"), array.shape)

    @classmethod
    def zeros(cls, dims: Union[Shape, Sequence[int]]) -> "DenseTensor":
        shape = Shape.of(dims)
        return cls(np.zeros(shape.size), shape)

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.shape.dims

    @property
    def ndims(self) -> int:
        return self.shape.ndims

    @property
    def size(self) -> int:
        return self.shape.size

    def to_array(self) -> np.ndarray:
        """N-d view indexed by 0-based (i1-1, ..., iN-1)."""
        return self.values.reshape(self.dims, order="F")

    def __getitem__(self, multi: Sequence[int]) -> float:
        return float(self.values[linear_index(multi, self.shape) - 1])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def inner(self, other: "DenseTensor") -> float:
        if other.dims != self.dims:
            raise ShapeError(f"shape mismatch: {list(self.dims)} vs {list(other.dims)}")
        return float(np.dot(self.values, other.values))

    def __repr__(self) -> str:
        return f"DenseTensor(shape={list(self.dims)})"


# ─── Index arithmetic ────────────────────────────────────────────────────────


def linear_index(multi: Sequence[int], shape: Union[Shape, Sequence[int]]) -> int:
    """Return ivec(multi, I): the 1-based linear position of a 1-based multi-index."""
    shape = Shape.of(shape)
    if len(multi) != shape.ndims:
        raise TensorIndexError(
            f"index has {len(multi)} components, tensor has {shape.ndims} modes"
        )
    linear = 1
    stride = 1
    for n, (i, d) in enumerate(zip(multi, shape.dims), start=1):
        if not 1 <= i <= d:
            raise TensorIndexError(f"index {i} out of range 1..{d} in mode {n}", mode=n)
        linear += (int(i) - 1) * stride
        stride *= d
    return linear


def multi_index(linear: int, shape: Union[Shape, Sequence[int]]) -> Tuple[int, ...]:
    """Inverse of linear_index."""
    shape = Shape.of(shape)
    if not 1 <= linear <= shape.size:
        raise TensorIndexError(f"linear index {linear} out of range 1..{shape.size}")
    rest = int(linear) - 1
    out: List[int] = []
    for d in shape.dims:
        rest, i = divmod(rest, d)
        out.append(i + 1)
    return tuple(out)


# ─── Reshape, permute, unfold ────────────────────────────────────────────────


def reshape(t: DenseTensor, new_dims: Union[Shape, Sequence[int]]) -> DenseTensor:
    """Reinterpret vec(t) with a new shape; the value sequence is shared."""
    shape = Shape.of(new_dims)
    if shape.size != t.size:
        raise ShapeError(
            f"cannot reshape {t.size} entries (product of {list(t.dims)}) into "
            f"{shape.size} (product of {list(shape.dims)})"
        )
    return DenseTensor._wrap(t.values, shape)


def _check_permutation(perm: Sequence[int], n: int, what: str = "perm") -> List[int]:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise ArgumentError(f"{what} {perm} is not a permutation of 1..{n}")
    return perm


def permute(t: DenseTensor, perm: Sequence[int]) -> DenseTensor:
    """Tensor transposition: result(i_perm[1], ..., i_perm[N]) = t(i1, ..., iN)."""
    perm = _check_permutation(perm, t.ndims)
    if perm == list(range(1, t.ndims + 1)):
        return t
    moved = np.transpose(t.to_array(), [p - 1 for p in perm])
    return DenseTensor(moved.ravel(order="F"), t.shape.permuted(perm))


def unfold(
    t: DenseTensor, row_modes: Sequence[int], col_modes: Sequence[int]
) -> np.ndarray:
    """Matrix Y_{r x c} with rows indexed by ivec(i_r) and columns by ivec(i_c)."""
    row_modes = list(row_modes)
    col_modes = list(col_modes)
    _check_permutation(row_modes + col_modes, t.ndims, what="[row_modes, col_modes]")
    n = len(row_modes)
    if row_modes == list(range(1, n + 1)) and col_modes == list(
        range(n + 1, t.ndims + 1)
    ):
        return unfold_prefix(t, n)
    rows = math.prod(t.shape.dim(m) for m in row_modes)
    cols = math.prod(t.shape.dim(m) for m in col_modes)
    moved = np.transpose(t.to_array(), [m - 1 for m in row_modes + col_modes])
    return np.array(moved.reshape((rows, cols), order="F"))


def unfold_prefix(t: DenseTensor, n: int) -> np.ndarray:
    """Y(1:n) = reshape(Y, [Jn, Kn]), a zero-copy view of vec(Y)."""
    if not 0 <= n <= t.ndims:
        raise ArgumentError(f"prefix length {n} outside 0..{t.ndims}")
    return t.values.reshape((t.shape.prefix(n), t.shape.suffix(n)), order="F")


def unfold_mode(t: DenseTensor, n: int) -> np.ndarray:
    """Mode-n unfolding Y(n) of size In x J-n.

    Modes 1 and N are views of vec(Y); 1 < n < N reorders entries.
    """
    if not 1 <= n <= t.ndims:
        raise ArgumentError(f"mode {n} outside 1..{t.ndims}")
    if n == 1:
        return unfold_prefix(t, 1)
    if n == t.ndims:
        return unfold_prefix(t, t.ndims - 1).T
    others = [m for m in range(1, t.ndims + 1) if m != n]
    return unfold(t, [n], others)


# ─── Tensor-vector products ──────────────────────────────────────────────────


def ttv(t: DenseTensor, v: Sequence[float], n: int) -> Union[DenseTensor, float]:
    """Mode-n tensor-vector product; vec(result) = Y(n)^T v.

    Contracting the only mode of a vector returns a float.
    """
    if not 1 <= n <= t.ndims:
        raise ArgumentError(f"mode {n} outside 1..{t.ndims}")
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size != t.shape.dim(n):
        raise ShapeError(
            f"vector of length {v.size} does not match mode {n} of size {t.shape.dim(n)}"
        )
    blocks = t.values.reshape(
        (t.shape.prefix(n - 1), t.shape.dim(n), t.shape.suffix(n)), order="F"
    )
    out = np.einsum("aib,i->ab", blocks, v)
    if t.ndims == 1:
        return float(out[0, 0])
    dims = t.dims[: n - 1] + t.dims[n:]
    return DenseTensor(out.ravel(order="F"), dims)


def ttv_multi(
    t: DenseTensor,
    vectors: Sequence[Sequence[float]],
    modes: Optional[Sequence[int]] = None,
) -> Union[DenseTensor, float]:
    """Apply ttv for several distinct modes (all modes when ``modes`` is None)."""
    if modes is None:
        modes = list(range(1, t.ndims + 1))
    modes = [int(m) for m in modes]
    if len(vectors) != len(modes):
        raise ShapeError(f"{len(vectors)} vectors given for {len(modes)} modes")
    if len(set(modes)) != len(modes):
        raise ArgumentError(f"modes {modes} are not distinct")
    result: Union[DenseTensor, float] = t
    # Highest mode first so the remaining mode numbers stay valid.
    for mode, vec in sorted(zip(modes, vectors), key=lambda pair: -pair[0]):
        result = ttv(result, vec, mode)  # type: ignore[arg-type]
    return result
