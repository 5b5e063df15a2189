"""
Core numerics: dense tensors, Khatri-Rao kernels, CP models and gradients.
"""

from .counting import CostCounter, CountVariant, predicted_mult_count, select_pivot
from .errors import (
    ArgumentError,
    BenchOutputError,
    DomainError,
    FastCPError,
    NumericError,
    ShapeError,
    TensorFormatError,
    TensorIndexError,
    UnsupportedOrderError,
)
from .kron import (
    gram_hadamard_skip,
    hadamard,
    khatri_rao,
    khatri_rao_range,
    khatri_rao_skip,
    kron_chain,
    kron_vec,
    skip_kron_column,
)
from .kruskal import (
    GradientSet,
    KruskalModel,
    cost,
    cp_gradient_set,
    fit,
    full,
    rebalance,
    relative_error,
    stack_gradient,
    unstack_gradient,
)
from .mttkrp import (
    ModePermutation,
    ProjectionCache,
    cp_gradient_all,
    mttkrp_all_direct,
    mttkrp_direct,
    pivot_order,
    sort_modes,
)
from .tensor import (
    DenseTensor,
    Shape,
    linear_index,
    multi_index,
    permute,
    reshape,
    ttv,
    ttv_multi,
    unfold,
    unfold_mode,
    unfold_prefix,
)

__all__ = [
    "ArgumentError",
    "BenchOutputError",
    "CostCounter",
    "CountVariant",
    "DenseTensor",
    "DomainError",
    "FastCPError",
    "GradientSet",
    "KruskalModel",
    "ModePermutation",
    "NumericError",
    "ProjectionCache",
    "Shape",
    "ShapeError",
    "TensorFormatError",
    "TensorIndexError",
    "UnsupportedOrderError",
    "cost",
    "cp_gradient_all",
    "cp_gradient_set",
    "fit",
    "full",
    "gram_hadamard_skip",
    "hadamard",
    "khatri_rao",
    "khatri_rao_range",
    "khatri_rao_skip",
    "kron_chain",
    "kron_vec",
    "linear_index",
    "mttkrp_all_direct",
    "mttkrp_direct",
    "multi_index",
    "permute",
    "pivot_order",
    "predicted_mult_count",
    "rebalance",
    "relative_error",
    "reshape",
    "select_pivot",
    "skip_kron_column",
    "sort_modes",
    "stack_gradient",
    "ttv",
    "ttv_multi",
    "unfold",
    "unfold_mode",
    "unfold_prefix",
    "unstack_gradient",
]
