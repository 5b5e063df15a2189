"""Tests for the direct and all-mode CP gradient kernels."""

import numpy as np
import pytest

from fastcp.bench.checks import relative_difference
from fastcp.core.counting import CostCounter, CountVariant, predicted_mult_count, select_pivot
from fastcp.core.errors import ShapeError, UnsupportedOrderError
from fastcp.core.mttkrp import (
    ModePermutation,
    cp_gradient_all,
    mttkrp_all_direct,
    mttkrp_direct,
    pivot_order,
    sort_modes,
)
from fastcp.core.tensor import DenseTensor

SHAPES = [
    [2, 2, 2],
    [2, 3, 4],
    [4, 3, 2],
    [3, 5],
    [5, 3],
    [2, 3, 4, 5],
    [5, 2, 4, 3],
    [1, 3, 1, 2],
    [3, 3, 3, 3, 3],
    [2, 2, 3, 2, 2, 3],
]


def _problem(rng, dims, rank):
    y = DenseTensor(rng.standard_normal(int(np.prod(dims))), dims)
    factors = [rng.standard_normal((d, rank)) for d in dims]
    return y, factors


class TestMttkrpDirect:
    def test_all_ones_factors_give_row_sums(self, t8: DenseTensor) -> None:
        ones = [np.ones((2, 1))] * 3
        expected = {1: [16, 20], 2: [14, 22], 3: [10, 26]}
        for n, rows in expected.items():
            np.testing.assert_allclose(mttkrp_direct(t8, ones, n)[:, 0], rows)

    @pytest.mark.parametrize("dims", SHAPES)
    def test_matches_einsum(self, rng, oracle, dims) -> None:
        y, factors = _problem(rng, dims, 3)
        for n in range(1, len(dims) + 1):
            np.testing.assert_allclose(
                mttkrp_direct(y, factors, n), oracle(y, factors, n), rtol=1e-12, atol=1e-12
            )

    def test_matches_entry_loop(self, t24: DenseTensor, rng, loop_oracle) -> None:
        factors = [rng.standard_normal((d, 2)) for d in t24.dims]
        for n in (1, 2, 3):
            np.testing.assert_allclose(
                mttkrp_direct(t24, factors, n), loop_oracle(t24, factors, n), rtol=1e-12
            )

    def test_counts_match_closed_form(self, rng) -> None:
        dims = [10, 10, 10]
        y, factors = _problem(rng, dims, 1)
        counter = CostCounter()
        mttkrp_all_direct(y, factors, counter)
        assert [counter.mode_total(n) for n in (1, 2, 3)] == [1110, 1100, 1100]

    @pytest.mark.parametrize("dims", SHAPES)
    def test_counts_match_closed_form_everywhere(self, rng, dims) -> None:
        y, factors = _problem(rng, dims, 2)
        counter = CostCounter()
        mttkrp_all_direct(y, factors, counter)
        for n in range(1, len(dims) + 1):
            assert counter.mode_total(n) == predicted_mult_count(dims, 2, n, "direct")

    def test_counts_match_closed_form_on_random_shapes(self) -> None:
        rng = np.random.default_rng(3)
        for _ in range(30):
            dims = [int(d) for d in rng.integers(1, 7, size=int(rng.integers(2, 7)))]
            rank = int(rng.integers(1, 5))
            y, factors = _problem(rng, dims, rank)
            counter = CostCounter()
            mttkrp_all_direct(y, factors, counter)
            for n in range(1, len(dims) + 1):
                assert counter.mode_total(n) == predicted_mult_count(dims, rank, n, "direct")

    def test_vector_tensor(self) -> None:
        y = DenseTensor([1.0, 2.0, 3.0], [3])
        out = mttkrp_direct(y, [np.ones((3, 2))], 1)
        np.testing.assert_allclose(out, [[1, 1], [2, 2], [3, 3]])

    def test_row_mismatch(self, t8: DenseTensor) -> None:
        with pytest.raises(ShapeError, match="factor 2"):
            mttkrp_direct(t8, [np.ones((2, 1)), np.ones((3, 1)), np.ones((2, 1))], 1)

    def test_wrong_factor_count(self, t8: DenseTensor) -> None:
        with pytest.raises(ShapeError):
            mttkrp_direct(t8, [np.ones((2, 1))] * 2, 1)


class TestCpGradientAll:
    @pytest.mark.parametrize("dims", SHAPES)
    def test_matches_direct(self, rng, dims) -> None:
        y, factors = _problem(rng, dims, 3)
        fast = cp_gradient_all(y, factors)
        direct = mttkrp_all_direct(y, factors)
        for f, d in zip(fast, direct):
            np.testing.assert_allclose(f, d, rtol=1e-12, atol=1e-12)

    def test_all_ones_factors(self, t8: DenseTensor) -> None:
        grads = cp_gradient_all(t8, [np.ones((2, 1))] * 3)
        np.testing.assert_allclose(grads[0][:, 0], [16, 20])
        np.testing.assert_allclose(grads[1][:, 0], [14, 22])
        np.testing.assert_allclose(grads[2][:, 0], [10, 26])

    def test_rank_one(self, rng, oracle) -> None:
        y, factors = _problem(rng, [3, 4, 5, 2], 1)
        for n, g in enumerate(cp_gradient_all(y, factors), start=1):
            np.testing.assert_allclose(g, oracle(y, factors, n), rtol=1e-12, atol=1e-12)

    def test_random_shapes_and_ranks(self, oracle) -> None:
        rng = np.random.default_rng(7)
        for _ in range(100):
            N = int(rng.integers(3, 7))
            dims = [int(d) for d in rng.integers(1, 7, size=N)]
            rank = int(rng.integers(1, 5))
            y, factors = _problem(rng, dims, rank)
            fast = cp_gradient_all(y, factors)
            for n in range(1, N + 1):
                brute = oracle(y, factors, n)
                assert relative_difference(fast[n - 1], brute) <= 1e-12, (dims, rank, n)
                assert relative_difference(mttkrp_direct(y, factors, n), brute) <= 1e-12

    @pytest.mark.parametrize("dims", [[2, 3, 4], [2, 3, 4, 5], [10, 10, 10, 10], [3, 3, 5, 7, 8]])
    def test_executed_counts_match_derived_closed_form(self, rng, dims) -> None:
        y, factors = _problem(rng, dims, 2)
        counter = CostCounter()
        cp_gradient_all(y, factors, counter)
        for n in range(1, len(dims) + 1):
            assert counter.mode_total(n) == predicted_mult_count(
                dims, 2, n, CountVariant.FAST_DERIVED
            )

    @pytest.mark.parametrize("dims", [[2, 3, 4, 5], [10, 10, 10, 10], [3, 3, 5, 7, 8], [2] * 7])
    def test_counts_before_and_at_pivot_match_table(self, rng, dims) -> None:
        y, factors = _problem(rng, dims, 2)
        counter = CostCounter()
        cp_gradient_all(y, factors, counter)
        p = select_pivot(dims)
        for n in range(1, p + 1):
            assert counter.mode_total(n) == predicted_mult_count(dims, 2, n, CountVariant.FAST)
        if y.shape.suffix(p) <= y.shape.prefix(p + 1):
            assert counter.mode_total(p + 1) == predicted_mult_count(
                dims, 2, p + 1, CountVariant.FAST
            )

    def test_first_mode_before_pivot_is_not_charged_twice(self, rng) -> None:
        dims = [10, 10, 10, 10]
        y, factors = _problem(rng, dims, 2)
        counter = CostCounter()
        grads = cp_gradient_all(y, factors, counter)
        assert counter.mode_total(1) == 200
        np.testing.assert_allclose(grads[0], mttkrp_direct(y, factors, 1), rtol=1e-12, atol=1e-12)

    def test_counts_follow_original_modes(self, rng) -> None:
        dims = [5, 2, 4, 3]
        y, factors = _problem(rng, dims, 2)
        counter = CostCounter()
        cp_gradient_all(y, factors, counter)
        order = [2, 4, 3, 1]
        sorted_dims = [dims[m - 1] for m in order]
        for k, original in enumerate(order, start=1):
            assert counter.mode_total(original) == predicted_mult_count(
                sorted_dims, 2, k, CountVariant.FAST_DERIVED
            )

    def test_cheaper_than_direct_for_equal_dims(self, rng) -> None:
        y, factors = _problem(rng, [6] * 5, 3)
        fast, direct = CostCounter(), CostCounter()
        cp_gradient_all(y, factors, fast)
        mttkrp_all_direct(y, factors, direct)
        assert fast.total < direct.total

    def test_hook_sees_pivot_order_and_updates_later_modes(self, rng) -> None:
        dims = [5, 3, 4]
        y, factors = _problem(rng, dims, 2)
        current = list(factors)
        visited = []

        def hook(n, grad):
            expected = mttkrp_direct(y, current, n)
            np.testing.assert_allclose(grad, expected, rtol=1e-12, atol=1e-12)
            visited.append(n)
            current[n - 1] = rng.standard_normal(current[n - 1].shape)
            return current[n - 1]

        cp_gradient_all(y, factors, mode_hook=hook)
        assert visited == pivot_order(dims)

    def test_hook_returning_none_keeps_factors(self, rng) -> None:
        y, factors = _problem(rng, [2, 3, 4], 2)
        with_hook = cp_gradient_all(y, factors, mode_hook=lambda n, g: None)
        plain = cp_gradient_all(y, factors)
        for a, b in zip(with_hook, plain):
            np.testing.assert_array_equal(a, b)

    def test_hook_replacement_shape_checked(self, rng) -> None:
        y, factors = _problem(rng, [2, 3, 4], 2)
        with pytest.raises(ShapeError, match="replacement"):
            cp_gradient_all(y, factors, mode_hook=lambda n, g: np.ones((1, 1)))

    def test_factors_not_modified(self, rng) -> None:
        y, factors = _problem(rng, [3, 2, 4], 2)
        before = [a.copy() for a in factors]
        cp_gradient_all(y, factors, mode_hook=lambda n, g: g)
        for a, b in zip(factors, before):
            np.testing.assert_array_equal(a, b)

    def test_vector_rejected(self) -> None:
        y = DenseTensor([1.0, 2.0], [2])
        with pytest.raises(UnsupportedOrderError):
            cp_gradient_all(y, [np.ones((2, 1))])


class TestModeOrdering:
    def test_pivot_order(self) -> None:
        assert pivot_order([5, 3, 4]) == [2, 3, 1]
        assert pivot_order([10, 10, 10, 10]) == [2, 1, 3, 4]
        assert pivot_order([10, 10, 10]) == [1, 2, 3]

    def test_pivot_order_is_a_permutation(self) -> None:
        for dims in SHAPES:
            assert sorted(pivot_order(dims)) == list(range(1, len(dims) + 1))

    def test_sort_modes_is_stable(self, rng) -> None:
        y, factors = _problem(rng, [3, 2, 3, 2], 1)
        ys, fs, perm = sort_modes(y, factors)
        assert perm.perm == (2, 4, 1, 3)
        assert ys.dims == (2, 2, 3, 3)
        assert [a.shape[0] for a in fs] == [2, 2, 3, 3]

    def test_sorted_input_is_untouched(self, t24: DenseTensor) -> None:
        ys, _, perm = sort_modes(t24, [np.ones((d, 1)) for d in t24.dims])
        assert perm.is_identity
        assert ys is t24

    def test_permutation_round_trip(self) -> None:
        perm = ModePermutation((3, 1, 2))
        items = ["a", "b", "c"]
        assert perm.apply(items) == ["c", "a", "b"]
        assert perm.restore(perm.apply(items)) == items
        assert perm.to_sorted(perm.to_original(2)) == 2
