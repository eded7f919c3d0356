"""
Tests for step graphons, cut norms, K-bounded tails and cut-distance bounds.
"""

import math
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.graphlim.exceptions import BudgetExceededError, ValidationError
from scripts.graphlim.graph import WeightedGraph, scale_graph
from scripts.graphlim.graphon import (
    DistanceBound,
    KTable,
    StepGraphon,
    average_graphon,
    common_refinement,
    cut_distance,
    cut_norm_exact,
    cut_norm_lower,
    cut_norm_upper,
    embed,
    graphon_lp_norm,
    k_bounded_tails_check,
    normalize,
    cut_distance_same_vertices,
    normalized_cut_distance,
    permute_steps,
)

CHECKER = StepGraphon([0.5, 0.5], [[1.0, -1.0], [-1.0, 1.0]])


def random_step_graphon(rng: np.random.Generator, k: int, low: float = -1.0) -> StepGraphon:
    lengths = rng.dirichlet(np.ones(k))
    lengths[-1] = 1.0 - lengths[:-1].sum()
    upper = np.triu(rng.uniform(low, 1.0, size=(k, k)))
    return StepGraphon(lengths, upper + np.triu(upper, 1).T)


class TestStepGraphon:
    """Test construction and embedding."""

    def test_rejects_bad_lengths(self):
        """Should require positive lengths summing to 1."""
        with pytest.raises(ValidationError):
            StepGraphon([0.5, 0.6], np.zeros((2, 2)))
        with pytest.raises(ValidationError):
            StepGraphon([1.0, 0.0], np.zeros((2, 2)))

    def test_embed_k2(self):
        """Should embed K2 on half steps with its adjacency."""
        W = embed(WeightedGraph.from_networkx(nx.complete_graph(2)))
        np.testing.assert_allclose(W.step_lengths, [0.5, 0.5])
        np.testing.assert_allclose(W.values, [[0, 1], [1, 0]])

    def test_embed_single_vertex(self):
        """Should give one step with value 0."""
        W = embed(WeightedGraph(np.ones(1), np.zeros((1, 1))))
        assert W.k == 1
        assert W.values[0, 0] == 0.0

    def test_embed_weighted(self):
        """Should use alpha_x / alpha_G as step lengths."""
        W = embed(WeightedGraph(np.array([1.0, 3.0]), np.array([[0.0, 2.0], [2.0, 0.0]])))
        np.testing.assert_allclose(W.step_lengths, [0.25, 0.75])
        np.testing.assert_allclose(W.values, [[0, 2], [2, 0]])

    def test_embed_drops_zero_weight_vertices(self):
        """Should leave weightless vertices out of the step structure."""
        W = embed(WeightedGraph(np.array([1.0, 0.0, 1.0]), np.ones((3, 3))))
        assert W.k == 2

    def test_normalize(self):
        """Should divide by ||G||_1 and map edgeless graphs to zero."""
        K2 = normalize(WeightedGraph.from_networkx(nx.complete_graph(2)))
        np.testing.assert_allclose(K2.values, [[0, 2], [2, 0]])
        K3 = normalize(WeightedGraph.from_networkx(nx.complete_graph(3)))
        np.testing.assert_allclose(K3.values, 1.5 * (np.ones((3, 3)) - np.eye(3)))
        zero = normalize(WeightedGraph(np.ones(3), np.zeros((3, 3))))
        assert np.all(zero.values == 0.0)

    def test_lp_norms(self):
        """Should match hand-computed norms."""
        assert graphon_lp_norm(StepGraphon.constant(-3.0), 2) == pytest.approx(3.0)
        assert graphon_lp_norm(embed(WeightedGraph.from_networkx(nx.complete_graph(2))), 1) == pytest.approx(0.5)
        diagonal = StepGraphon([0.5, 0.5], [[2.0, 0.0], [0.0, 2.0]])
        assert graphon_lp_norm(diagonal, 2) == pytest.approx(math.sqrt(2))

    def test_common_refinement_preserves_integrals(self):
        """Should express both graphons on one grid without changing them."""
        rng = np.random.default_rng(5)
        U, W = random_step_graphon(rng, 3), random_step_graphon(rng, 4)
        U2, W2 = common_refinement(U, W)
        np.testing.assert_allclose(U2.step_lengths, W2.step_lengths)
        assert U2.integral() == pytest.approx(U.integral())
        assert W2.integral() == pytest.approx(W.integral())

    def test_evaluate(self):
        """Should read the value of the step rectangle containing (x, y)."""
        W = StepGraphon([0.25, 0.75], [[1.0, 2.0], [2.0, 3.0]])
        assert W.evaluate(0.1, 0.1) == 1.0
        assert W.evaluate(0.1, 0.5) == 2.0
        assert W.evaluate(1.0, 1.0) == 3.0


class TestCutNorm:
    """Test exact, heuristic and bounding cut norms."""

    def test_constant(self):
        """Should equal c for a nonnegative constant."""
        assert cut_norm_exact(StepGraphon.constant(0.7)) == pytest.approx(0.7)

    def test_checkerboard(self):
        """Should give 1/4 for the signed checkerboard."""
        assert cut_norm_exact(CHECKER) == pytest.approx(0.25)
        assert cut_norm_lower(CHECKER) == pytest.approx(0.25)

    def test_nonnegative_equals_l1(self):
        """Should equal the L1 norm for nonnegative graphons."""
        rng = np.random.default_rng(11)
        W = random_step_graphon(rng, 5, low=0.0)
        assert cut_norm_exact(W) == pytest.approx(graphon_lp_norm(W, 1))

    def test_zero(self):
        """Should be zero on the zero graphon."""
        assert cut_norm_lower(StepGraphon.zero([0.5, 0.5])) == 0.0

    def test_bounds_sandwich_exact(self):
        """Should keep lower <= exact <= upper on random signed instances."""
        rng = np.random.default_rng(2)
        for _ in range(30):
            W = random_step_graphon(rng, int(rng.integers(1, 9)))
            exact = cut_norm_exact(W)
            assert cut_norm_lower(W, restarts=20, seed=1) <= exact + 1e-12
            assert exact <= cut_norm_upper(W) + 1e-12

    def test_exact_budget(self):
        """Should refuse more steps than kmax."""
        W = StepGraphon(np.full(5, 0.2), np.zeros((5, 5)))
        with pytest.raises(BudgetExceededError):
            cut_norm_exact(W, kmax=4)


class TestAverageGraphon:
    """Test W_P over unions of steps."""

    def test_singleton_groups(self):
        """Should leave W unchanged."""
        W = StepGraphon([0.25, 0.75], [[1.0, 2.0], [2.0, 3.0]])
        np.testing.assert_allclose(average_graphon(W, [[0], [1]]).values, W.values)

    def test_one_group(self):
        """Should give the constant integral."""
        W = StepGraphon([0.25, 0.75], [[1.0, 2.0], [2.0, 3.0]])
        averaged = average_graphon(W, [[0, 1]])
        assert averaged.values[0, 0] == pytest.approx(W.integral())
        assert average_graphon(CHECKER, [[0, 1]]).values[0, 0] == pytest.approx(0.0)

    def test_rejects_overlapping_groups(self):
        """Should reject groups that do not partition the steps."""
        with pytest.raises(ValidationError):
            average_graphon(CHECKER, [[0, 1], [1]])


class TestKBoundedTails:
    """Test tail mass checks against K tables."""

    def test_constant_passes(self):
        """Should pass when no value reaches the threshold."""
        assert k_bounded_tails_check(StepGraphon.constant(1.0), KTable.constant(2.0)) == (True, None)

    def test_heavy_block_fails(self):
        """Should fail when the tail carries more than eps."""
        W = StepGraphon([0.5, 0.5], [[4.0, 0.0], [0.0, 0.0]])
        assert k_bounded_tails_check(W, KTable.constant(3.0, grid=(0.5,))) == (False, 0.5)

    def test_zero_passes(self):
        """Should pass for the zero graphon."""
        passed, _ = k_bounded_tails_check(StepGraphon.zero(), KTable.constant(0.1))
        assert passed

    def test_table_step_interpolation(self):
        """Should use the entry of the largest tabulated eps not above the query."""
        table = KTable(((0.1, 10.0), (0.5, 2.0)))
        assert table(0.3) == 10.0
        assert table(0.5) == 2.0
        assert table(0.01) == 10.0

    def test_table_from_function(self):
        """Should sample the function on the grid."""
        table = KTable.from_function(lambda eps: 1 / eps, grid=(0.25, 0.5))
        assert table.entries == ((0.25, 4.0), (0.5, 2.0))


class TestCutDistance:
    """Test certified cut-distance intervals."""

    def test_identity(self):
        """Should give an exact zero for identical graphons."""
        bound = cut_distance(CHECKER, CHECKER)
        assert (bound.lower, bound.upper, bound.exact_flag) == (0.0, 0.0, True)

    def test_permuted_steps(self):
        """Should find the relabeling of steps."""
        W = StepGraphon([0.25, 0.25, 0.5], [[1.0, 0.0, 0.5], [0.0, 2.0, 0.0], [0.5, 0.0, 0.0]])
        bound = cut_distance(W, permute_steps(W, [2, 0, 1]))
        assert bound.upper == pytest.approx(0.0, abs=1e-12)

    def test_constant_against_diagonal_blocks(self):
        """Should bracket 1/4 between the constant and the diagonal block graphon."""
        bound = cut_distance(StepGraphon.constant(1.0), StepGraphon([0.5, 0.5], [[2.0, 0.0], [0.0, 2.0]]))
        assert bound.upper == pytest.approx(0.25)
        assert bound.lower <= 0.25 + 1e-12

    def test_lower_never_exceeds_upper(self):
        """Should return consistent intervals on random pairs."""
        rng = np.random.default_rng(9)
        for _ in range(10):
            U = random_step_graphon(rng, int(rng.integers(1, 4)), low=0.0)
            W = random_step_graphon(rng, int(rng.integers(1, 4)), low=0.0)
            bound = cut_distance(U, W)
            assert 0.0 <= bound.lower <= bound.upper
            assert bound.upper <= cut_norm_exact(_difference(U, W)) + 1e-12

    def test_same_vertex_distance(self):
        """Should compare graphs on one vertex set without realignment."""
        K2 = WeightedGraph.from_networkx(nx.complete_graph(2))
        empty = WeightedGraph(np.ones(2), np.zeros((2, 2)))
        assert cut_distance_same_vertices(K2, K2).upper == 0.0
        bound = cut_distance_same_vertices(K2, empty)
        assert bound.exact_flag
        assert bound.upper == pytest.approx(0.5)
        with pytest.raises(ValidationError):
            cut_distance_same_vertices(K2, WeightedGraph(np.array([1.0, 2.0]), np.zeros((2, 2))))

    def test_normalized_graph_distance(self):
        """Should ignore scale and vanish on identical graphs."""
        G = WeightedGraph.from_networkx(nx.cycle_graph(5))
        assert normalized_cut_distance(G, G).upper == 0.0
        assert normalized_cut_distance(G, scale_graph(G, 3.0)).upper == pytest.approx(0.0, abs=1e-12)

    def test_k2_against_k3(self):
        """Should give a small nonnegative interval."""
        K2 = WeightedGraph.from_networkx(nx.complete_graph(2))
        K3 = WeightedGraph.from_networkx(nx.complete_graph(3))
        bound = normalized_cut_distance(K2, K3)
        assert 0.0 <= bound.lower <= bound.upper <= 0.5

    def test_bound_validation(self):
        """Should reject inverted intervals and inexact exact flags."""
        with pytest.raises(ValidationError):
            DistanceBound(0.5, 0.1)
        with pytest.raises(ValidationError):
            DistanceBound(0.1, 0.5, exact_flag=True)


def _difference(U: StepGraphon, W: StepGraphon) -> StepGraphon:
    U2, W2 = common_refinement(U, W)
    return StepGraphon(U2.step_lengths, U2.values - W2.values)
