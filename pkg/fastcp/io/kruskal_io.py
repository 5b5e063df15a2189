"""
Factor files: ``KRUS <N> <R> <I1> ... <IN>`` then each factor matrix in
column-major order, mode by mode.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

from ..core.kruskal import KruskalModel
from .tensor_io import TokenReader, format_values

KRUSKAL_MAGIC = b"KRUS"


def dumps_kruskal(model: KruskalModel) -> str:
    header = " ".join(
        ["KRUS", str(model.ndims), str(model.rank)] + [str(d) for d in model.dims]
    )
    return header + "\n" + format_values(model.to_vector())


def loads_kruskal(data: Union[str, bytes], path: Optional[str] = None) -> KruskalModel:
    if isinstance(data, str):
        data = data.encode("utf-8")
    reader = TokenReader(data, path)
    magic, offset = reader.next("magic")
    if magic != KRUSKAL_MAGIC:
        raise reader.error(f"expected {KRUSKAL_MAGIC!r}, found {magic[:8]!r}", offset)
    ndims = reader.next_int("mode count")
    rank = reader.next_int("rank")
    dims = [reader.next_int(f"dimension of mode {n}") for n in range(1, ndims + 1)]
    values = reader.next_floats(rank * sum(dims), what="factor entry")
    reader.expect_end()
    return KruskalModel.from_vector(values, dims, rank)


def write_kruskal(path: Union[str, Path], model: KruskalModel) -> Path:
    path = Path(path)
    path.write_text(dumps_kruskal(model), encoding="ascii")
    return path


def read_kruskal(path: Union[str, Path]) -> KruskalModel:
    path = Path(path)
    return loads_kruskal(path.read_bytes(), str(path))
