"""
Tests for value distributions, monotone rearrangements, top level sets and
quasi-inner products.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.graphlim.exceptions import BudgetExceededError, ValidationError
from scripts.graphlim.graphon import StepGraphon
from scripts.graphlim.rearrangement import (
    InnerProductBound,
    ValueDistribution,
    are_aligned,
    inner_product,
    monotone_rearrangement,
    quasi_inner_product_bounds,
    rearranged_inner_product,
    same_distribution_check,
    top_lambda,
    value_distribution,
)

CHECKER = StepGraphon([0.5, 0.5], [[1.0, -1.0], [-1.0, 1.0]])
CORNER = StepGraphon([0.5, 0.5], [[1.0, 0.0], [0.0, 0.0]])
OPPOSITE_CORNER = StepGraphon([0.5, 0.5], [[0.0, 0.0], [0.0, 1.0]])


def random_step_graphon(rng: np.random.Generator, k: int) -> StepGraphon:
    lengths = rng.dirichlet(np.ones(k))
    lengths[-1] = 1.0 - lengths[:-1].sum()
    upper = np.triu(rng.uniform(-1.0, 1.0, size=(k, k)))
    return StepGraphon(lengths, upper + np.triu(upper, 1).T)


class TestValueDistribution:
    """Test level distributions of step graphons."""

    def test_exact_levels(self):
        """Should list distinct values with their masses."""
        distribution = value_distribution(CHECKER)
        np.testing.assert_allclose(distribution.values, [-1.0, 1.0])
        np.testing.assert_allclose(distribution.masses, [0.5, 0.5])
        assert distribution.tail(0.0) == pytest.approx(0.5)

    def test_merging_with_tolerance(self):
        """Should merge nearby values into their mass-weighted mean."""
        W = StepGraphon([0.5, 0.5], [[0.0, 0.1], [0.1, 1.0]])
        distribution = value_distribution(W, tol=0.2)
        np.testing.assert_allclose(distribution.values, [0.1 * 0.5 / 0.75, 1.0])
        np.testing.assert_allclose(distribution.masses, [0.75, 0.25])

    def test_validation(self):
        """Should reject unsorted values and masses off the simplex."""
        with pytest.raises(ValidationError):
            ValueDistribution([1.0, 0.0], [0.5, 0.5])
        with pytest.raises(ValidationError):
            ValueDistribution([0.0, 1.0], [0.5, 0.6])
        with pytest.raises(ValidationError):
            value_distribution(CHECKER, tol=-1.0)


class TestMonotoneRearrangement:
    """Test W* on square annuli."""

    def test_constant(self):
        """Should leave a constant graphon constant."""
        W = monotone_rearrangement(StepGraphon.constant(0.7))
        assert W.k == 1
        assert W.values[0, 0] == pytest.approx(0.7)

    def test_two_levels(self):
        """Should put value 1 on the square of side sqrt(3)/2."""
        W = StepGraphon([0.5, 0.5], [[1.0, 1.0], [1.0, 0.0]])
        rearranged = monotone_rearrangement(W)
        np.testing.assert_allclose(rearranged.step_lengths, [math.sqrt(3) / 2, 1 - math.sqrt(3) / 2])
        np.testing.assert_allclose(rearranged.values, [[1.0, 0.0], [0.0, 0.0]])

    def test_preserves_distribution(self):
        """Should keep the value distribution of random graphons."""
        rng = np.random.default_rng(8)
        for _ in range(20):
            W = random_step_graphon(rng, int(rng.integers(1, 6)))
            assert same_distribution_check(W, monotone_rearrangement(W))

    def test_is_monotone(self):
        """Should decrease along both coordinates."""
        rng = np.random.default_rng(12)
        rearranged = monotone_rearrangement(random_step_graphon(rng, 4))
        assert np.all(np.diff(rearranged.values, axis=0) <= 0)
        assert np.all(np.diff(rearranged.values, axis=1) <= 0)

    def test_grid_budget(self):
        """Should refuse more levels than the grid allows."""
        with pytest.raises(BudgetExceededError):
            monotone_rearrangement(CHECKER, grid=1)


class TestTopLambda:
    """Test symmetric top level sets of measure lambda."""

    def test_empty_and_full(self):
        """Should give the zero and the all-ones indicator at 0 and 1."""
        assert top_lambda(CHECKER, 0.0).integral() == 0.0
        assert top_lambda(CHECKER, 1.0).integral() == pytest.approx(1.0)

    def test_checkerboard_half(self):
        """Should take both diagonal blocks at lambda = 1/2."""
        np.testing.assert_allclose(top_lambda(CHECKER, 0.5).values, [[1.0, 0.0], [0.0, 1.0]])

    def test_split_diagonal_step(self):
        """Should cut a square corner out of a constant graphon."""
        top = top_lambda(StepGraphon.constant(1.0), 0.25)
        np.testing.assert_allclose(top.step_lengths, [0.5, 0.5])
        np.testing.assert_allclose(top.values, [[1.0, 0.0], [0.0, 0.0]])

    def test_measure(self):
        """Should have measure lambda on random graphons."""
        rng = np.random.default_rng(21)
        for _ in range(30):
            W = random_step_graphon(rng, int(rng.integers(1, 5)))
            lam = float(rng.uniform())
            top = top_lambda(W, lam)
            assert top.integral() == pytest.approx(lam, abs=1e-9)
            assert np.array_equal(top.values, top.values.T)

    def test_rejects_out_of_range(self):
        """Should refuse lambda outside [0, 1]."""
        with pytest.raises(ValidationError):
            top_lambda(CHECKER, 1.5)


class TestInnerProducts:
    """Test E[W Y], E[W* Y*] and the quasi-inner product bracket."""

    def test_constants(self):
        """Should multiply constants."""
        assert inner_product(StepGraphon.constant(2.0), StepGraphon.constant(3.0)) == pytest.approx(6.0)
        bound = quasi_inner_product_bounds(StepGraphon.constant(2.0), StepGraphon.constant(3.0))
        assert bound.exact_flag
        assert bound.upper == pytest.approx(6.0)

    def test_checkerboard_with_itself(self):
        """Should give the exact value 1 for aligned checkerboards."""
        bound = quasi_inner_product_bounds(CHECKER, CHECKER)
        assert (bound.lower, bound.upper) == (pytest.approx(1.0), pytest.approx(1.0))
        assert bound.method == "aligned"

    def test_opposite_corners(self):
        """Should swap steps to align opposite corners."""
        assert not are_aligned(CORNER, OPPOSITE_CORNER)
        assert inner_product(CORNER, OPPOSITE_CORNER) == 0.0
        bound = quasi_inner_product_bounds(CORNER, OPPOSITE_CORNER)
        assert bound.exact_flag
        assert bound.lower == pytest.approx(0.25)
        assert bound.method == "exhaustive"

    def test_rearrangement_inequality(self):
        """Should keep E[W Y] <= E[W* Y*] on random pairs."""
        rng = np.random.default_rng(30)
        for _ in range(100):
            W = random_step_graphon(rng, int(rng.integers(1, 5)))
            Y = random_step_graphon(rng, int(rng.integers(1, 5)))
            assert inner_product(W, Y) <= rearranged_inner_product(W, Y) + 1e-12

    def test_bracket_contains_identity(self):
        """Should never go below the identity pairing."""
        rng = np.random.default_rng(31)
        for _ in range(10):
            W = random_step_graphon(rng, 3)
            Y = random_step_graphon(rng, 3)
            bound = quasi_inner_product_bounds(W, Y, seed=2)
            assert inner_product(W, Y) <= bound.lower + 1e-12
            assert bound.lower <= bound.upper

    def test_negative_bounds_allowed(self):
        """Should accept negative ends and reject inverted ones."""
        assert InnerProductBound(-2.0, -1.0).lower == -2.0
        with pytest.raises(ValidationError):
            InnerProductBound(1.0, 0.0)


class TestAlignment:
    """Test nested level sets."""

    def test_affine_image_is_aligned(self):
        """Should align W with 2W + 1."""
        rng = np.random.default_rng(40)
        W = random_step_graphon(rng, 4)
        assert are_aligned(W, StepGraphon(W.step_lengths, 2 * W.values + 1))

    def test_negation_is_not_aligned(self):
        """Should not align a nonconstant W with -W."""
        assert not are_aligned(CHECKER, StepGraphon(CHECKER.step_lengths, -CHECKER.values))
