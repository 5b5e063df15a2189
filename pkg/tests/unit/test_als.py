"""Tests for the ALS update and sweeps."""

import numpy as np
import pytest

from fastcp.algorithms.als import als_sweep, als_update_mode, standard_order
from fastcp.algorithms.options import RunTrace, SolveOptions, UpdateOrder
from fastcp.bench.checks import relative_difference
from fastcp.bench.problems import generate_problem, synthetic_problem
from fastcp.core.counting import CostCounter
from fastcp.core.errors import ArgumentError, NumericError
from fastcp.core.kruskal import KruskalModel, cost
from fastcp.core.mttkrp import mttkrp_direct, pivot_order


class TestAlsUpdateMode:
    def test_recovers_true_factor(self) -> None:
        y, truth, _ = synthetic_problem([4, 5, 6], 2, seed=3)
        grad = mttkrp_direct(y, truth.factors, 2)
        updated = als_update_mode(y, truth, 2, grad)
        np.testing.assert_allclose(updated, truth.factors[1], rtol=1e-8, atol=1e-10)

    def test_never_increases_cost(self) -> None:
        y, model = generate_problem([3, 4, 5], 2, seed=1)
        for n in (1, 2, 3):
            grad = mttkrp_direct(y, model.factors, n)
            candidate = model.with_factor(n, als_update_mode(y, model, n, grad))
            assert cost(y, candidate) <= cost(y, model) + 1e-12
            model = candidate

    def test_gradient_shape_checked(self) -> None:
        y, model = generate_problem([3, 4], 2, seed=0)
        with pytest.raises(ArgumentError):
            als_update_mode(y, model, 1, np.zeros((4, 2)))

    def test_non_finite_input(self) -> None:
        y, model = generate_problem([3, 4], 2, seed=0)
        bad = np.full((3, 2), np.nan)
        with pytest.raises(NumericError, match="mode-1"):
            als_update_mode(y, model, 1, bad)

    def test_rank_deficient_gram(self) -> None:
        y, model = generate_problem([3, 4, 2], 2, seed=0)
        # Identical columns in every other mode make Gamma(1) singular.
        factors = list(model.factors)
        factors[1] = np.ones((4, 2))
        factors[2] = np.ones((2, 2))
        grad = mttkrp_direct(y, factors, 1)
        updated = als_update_mode(y, factors, 1, grad)
        assert np.all(np.isfinite(updated))


class TestStandardOrder:
    def test_default_is_ascending(self, rng) -> None:
        model = KruskalModel.random([5, 3, 4], 1, rng)
        assert standard_order(model, SolveOptions()) == [1, 2, 3]

    def test_pivot_order(self, rng) -> None:
        model = KruskalModel.random([5, 3, 4], 1, rng)
        opts = SolveOptions(order=UpdateOrder.PIVOT)
        assert standard_order(model, opts) == pivot_order([5, 3, 4])

    def test_explicit_order(self, rng) -> None:
        model = KruskalModel.random([5, 3, 4], 1, rng)
        assert standard_order(model, SolveOptions(mode_order=[3, 1, 2])) == [3, 1, 2]
        with pytest.raises(ArgumentError):
            standard_order(model, SolveOptions(mode_order=[2, 1]))


class TestAlsSweep:
    @pytest.mark.parametrize("seed", range(10))
    def test_fast_matches_direct_in_same_order(self, seed) -> None:
        y, model = generate_problem([6, 3, 5, 4], 2, seed=seed)
        opts = SolveOptions(order=UpdateOrder.PIVOT)
        direct, fast = model, model
        for _ in range(5):
            direct = als_sweep(y, direct, opts, "direct")
            fast = als_sweep(y, fast, opts, "fast")
        for a, b in zip(direct.factors, fast.factors):
            assert relative_difference(b, a) <= 1e-12

    @pytest.mark.parametrize("dims", [[4, 5, 6], [3, 3, 3, 3, 3]])
    def test_same_order_agreement_on_other_shapes(self, dims) -> None:
        y, model = generate_problem(dims, 3, seed=11)
        opts = SolveOptions(order=UpdateOrder.PIVOT)
        direct, fast = model, model
        for _ in range(3):
            direct = als_sweep(y, direct, opts, "direct")
            fast = als_sweep(y, fast, opts, "fast")
        for a, b in zip(direct.factors, fast.factors):
            np.testing.assert_allclose(a, b, rtol=1e-8, atol=1e-10)

    @pytest.mark.parametrize("variant", ["direct", "fast"])
    def test_cost_non_increasing(self, variant) -> None:
        rng = np.random.default_rng(2)
        for seed in range(20):
            dims = [int(d) for d in rng.integers(2, 7, size=int(rng.integers(3, 5)))]
            y, model = generate_problem(dims, int(rng.integers(1, 4)), seed=seed)
            previous = cost(y, model)
            for _ in range(10):
                model = als_sweep(y, model, variant=variant)
                current = cost(y, model)
                assert current <= previous * (1 + 1e-10), (dims, seed)
                previous = current

    def test_fast_sweep_counts_fewer_mults(self) -> None:
        y, model = generate_problem([6, 6, 6, 6], 2, seed=4)
        direct, fast = CostCounter(), CostCounter()
        als_sweep(y, model, variant="direct", counter=direct)
        als_sweep(y, model, variant="fast", counter=fast)
        assert fast.total < direct.total

    def test_records_trace(self) -> None:
        y, model = generate_problem([3, 4, 5], 2, seed=0)
        trace = RunTrace.start("als-fast", y, model)
        counter = CostCounter()
        updated = als_sweep(y, model, variant="fast", counter=counter, trace=trace)
        assert trace.iterations == 1
        assert trace.costs[0] == pytest.approx(cost(y, updated))
        assert trace.mults[0] == counter.total
        assert trace.seconds[0] >= 0.0

    def test_input_model_unchanged(self) -> None:
        y, model = generate_problem([3, 4, 5], 2, seed=0)
        before = model.to_vector().copy()
        als_sweep(y, model, variant="fast")
        np.testing.assert_array_equal(model.to_vector(), before)

    def test_unknown_variant(self) -> None:
        y, model = generate_problem([3, 4], 1, seed=0)
        with pytest.raises(ArgumentError):
            als_sweep(y, model, variant="fastest")
