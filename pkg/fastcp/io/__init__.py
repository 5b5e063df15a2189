"""
Tensor (TDNS / TDNB) and factor (KRUS) file formats.
"""

from .kruskal_io import dumps_kruskal, loads_kruskal, read_kruskal, write_kruskal
from .tensor_io import (
    dumps_binary,
    dumps_text,
    loads_binary,
    loads_text,
    read_tensor,
    write_tensor,
)

__all__ = [
    "dumps_binary",
    "dumps_kruskal",
    "dumps_text",
    "loads_binary",
    "loads_kruskal",
    "loads_text",
    "read_kruskal",
    "read_tensor",
    "write_kruskal",
    "write_tensor",
]
