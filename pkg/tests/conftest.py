import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure the project root (containing the fastcp package) is on sys.path
THIS_FILE = Path(__file__).resolve()
for parent in [THIS_FILE.parent, *THIS_FILE.parents]:
    if (parent / "fastcp").is_dir():
        root = parent
        break
else:
    root = THIS_FILE.parents[1]

if str(root) not in sys.path:
    sys.path.insert(0, str(root))

from fastcp.core.tensor import DenseTensor  # noqa: E402


def einsum_mttkrp(y, factors, n):
    """sum over i_-n of y(i) prod_{k != n} A(k)[i_k, r]."""
    N = y.ndims
    operands = [y.to_array(), list(range(N))]
    for k, a in enumerate(factors):
        if k != n - 1:
            operands += [np.asarray(a), [k, N]]
    return np.einsum(*operands, [n - 1, N])


def loop_mttkrp(y, factors, n):
    """Entry-by-entry triple sum; only for tiny tensors."""
    rank = factors[0].shape[1]
    out = np.zeros((y.shape.dim(n), rank))
    for idx in itertools.product(*[range(d) for d in y.dims]):
        value = y.to_array()[idx]
        for r in range(rank):
            prod = value
            for k, i in enumerate(idx):
                if k != n - 1:
                    prod *= factors[k][i, r]
            out[idx[n - 1], r] += prod
    return out


@pytest.fixture
def t8() -> DenseTensor:
    """Shape [2, 2, 2], values 1..8 in vec order."""
    return DenseTensor(np.arange(1, 9), [2, 2, 2])


@pytest.fixture
def t24() -> DenseTensor:
    """Shape [2, 3, 4], values 1..24 in vec order."""
    return DenseTensor(np.arange(1, 25), [2, 3, 4])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def oracle():
    return einsum_mttkrp


@pytest.fixture
def loop_oracle():
    return loop_mttkrp
