"""
Dense tensor files.

Text form ``TDNS``: a header ``TDNS <N> <I1> ... <IN>`` followed by J_N
whitespace-separated values in vec order. Binary form ``TDNB``: the magic, N as
little-endian uint32, N dims as little-endian uint32, then J_N little-endian
float64 values in vec order. Readers either return a complete tensor or raise
TensorFormatError carrying the byte offset of the problem.
"""

from __future__ import annotations

import io
import logging
import math
import re
import struct
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from ..core.errors import TensorFormatError
from ..core.tensor import DenseTensor

logger = logging.getLogger(__name__)

TEXT_MAGIC = b"TDNS"
BINARY_MAGIC = b"TDNB"

PathLike = Union[str, Path]

_TOKEN = re.compile(rb"\S+")


class TokenReader:
    """Whitespace tokenizer over a byte buffer that remembers token offsets."""

    def __init__(self, data: bytes, path: Optional[str] = None) -> None:
        self.data = data
        self.path = path
        self._tokens: Iterator[re.Match] = _TOKEN.finditer(data)
        # End of the last token read.
        self.position = 0

    def error(self, message: str, offset: int) -> TensorFormatError:
        return TensorFormatError(message, self.path, offset)

    def next(self, what: str) -> Tuple[bytes, int]:
        match = next(self._tokens, None)
        if match is None:
            raise self.error(f"unexpected end of file while reading {what}", len(self.data))
        self.position = match.end()
        return match.group(), match.start()

    def next_int(self, what: str, minimum: int = 1) -> int:
        token, offset = self.next(what)
        try:
            value = int(token.decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise self.error(f"{what}: {token[:32]!r} is not an integer", offset)
        if value < minimum:
            raise self.error(f"{what} must be >= {minimum}, got {value}", offset)
        return value

    def next_floats(self, count: int, what: str = "value") -> np.ndarray:
        # Each value takes a separator and at least one digit.
        remaining = len(self.data) - self.position
        if 2 * count > remaining:
            raise self.error(
                f"header declares {count} values but only {remaining} bytes remain "
                "before end of file",
                self.position,
            )
        out = np.empty(count, dtype=np.float64)
        for i in range(count):
            token, offset = self.next(f"{what} {i + 1} of {count}")
            try:
                out[i] = float(token.decode("ascii"))
            except (UnicodeDecodeError, ValueError):
                raise self.error(f"{what} {i + 1}: {token[:32]!r} is not a number", offset)
        return out

    def expect_end(self) -> None:
        match = next(self._tokens, None)
        if match is not None:
            raise self.error("unexpected trailing data", match.start())


def format_values(values: np.ndarray) -> str:
    buf = io.StringIO()
    # 17 significant digits round-trip every float64.
    np.savetxt(buf, np.asarray(values, dtype=np.float64).reshape(-1, 1), fmt="%.17g")
    return buf.getvalue()


# ─── Text ────────────────────────────────────────────────────────────────────


def dumps_text(tensor: DenseTensor) -> str:
    header = " ".join(["TDNS", str(tensor.ndims)] + [str(d) for d in tensor.dims])
    return header + "\n" + format_values(tensor.values)


def loads_text(data: Union[str, bytes], path: Optional[str] = None) -> DenseTensor:
    if isinstance(data, str):
        data = data.encode("utf-8")
    reader = TokenReader(data, path)
    magic, offset = reader.next("magic")
    if magic != TEXT_MAGIC:
        raise reader.error(f"expected {TEXT_MAGIC!r}, found {magic[:8]!r}", offset)
    ndims = reader.next_int("mode count")
    dims = [reader.next_int(f"dimension of mode {n}") for n in range(1, ndims + 1)]
    values = reader.next_floats(math.prod(dims))
    reader.expect_end()
    return DenseTensor(values, dims)


# ─── Binary ──────────────────────────────────────────────────────────────────


def dumps_binary(tensor: DenseTensor) -> bytes:
    header = BINARY_MAGIC + struct.pack(f"<I{tensor.ndims}I", tensor.ndims, *tensor.dims)
    return header + tensor.values.astype("<f8").tobytes()


def loads_binary(data: bytes, path: Optional[str] = None) -> DenseTensor:
    def fail(message: str, offset: int) -> TensorFormatError:
        return TensorFormatError(message, path, offset)

    if data[:4] != BINARY_MAGIC:
        raise fail(f"expected {BINARY_MAGIC!r}, found {data[:4]!r}", 0)
    if len(data) < 8:
        raise fail("truncated header: missing mode count", len(data))
    (ndims,) = struct.unpack_from("<I", data, 4)
    if ndims < 1:
        raise fail("mode count must be >= 1", 4)
    dims_end = 8 + 4 * ndims
    if len(data) < dims_end:
        raise fail(f"truncated header: expected {ndims} dimensions", len(data))
    dims: List[int] = list(struct.unpack_from(f"<{ndims}I", data, 8))
    for n, d in enumerate(dims, start=1):
        if d < 1:
            raise fail(f"dimension of mode {n} must be >= 1", 8 + 4 * (n - 1))
    expected_end = dims_end + 8 * math.prod(dims)
    if len(data) < expected_end:
        raise fail(
            f"truncated payload: {len(data) - dims_end} of {expected_end - dims_end} bytes",
            len(data),
        )
    if len(data) > expected_end:
        raise fail("unexpected trailing data", expected_end)
    values = np.frombuffer(data, dtype="<f8", offset=dims_end, count=math.prod(dims))
    return DenseTensor(values.astype(np.float64), dims)


# ─── Files ───────────────────────────────────────────────────────────────────


def write_tensor(path: PathLike, tensor: DenseTensor, binary: bool = False) -> Path:
    path = Path(path)
    if binary:
        path.write_bytes(dumps_binary(tensor))
    else:
        path.write_text(dumps_text(tensor), encoding="ascii")
    logger.debug("wrote %s tensor %s to %s", "binary" if binary else "text", list(tensor.dims), path)
    return path


def read_tensor(path: PathLike) -> DenseTensor:
    """Read a TDNS or TDNB file, chosen by its first four bytes."""
    path = Path(path)
    data = path.read_bytes()
    if data[:4] == BINARY_MAGIC:
        return loads_binary(data, str(path))
    if data.lstrip()[:4] == TEXT_MAGIC:
        return loads_text(data, str(path))
    raise TensorFormatError("not a TDNS or TDNB tensor file", str(path), 0)
