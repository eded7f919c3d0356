"""
Tests for upper-regularity checks, weak-regularity partitions and
regularized versions.
"""

import math
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.graphlim.exceptions import ValidationError
from scripts.graphlim.graph import VertexPartition, WeightedGraph, graph_norm, is_equipartition
from scripts.graphlim.graphon import StepGraphon
from scripts.graphlim.models import block_constant_graph, clique_plus_isolated, erdos_renyi
from scripts.graphlim.regularity import (
    KTable,
    RegularityReport,
    class_aligned_equipartition,
    degree_sorted_refinement,
    equipartition_upper_regular_check,
    k_from_equipartition_table,
    regularize,
    uniform_upper_regular_check,
    upper_lp_regular_check,
    upper_regular_graphon_check,
    weak_regularity_partition,
)


def edgeless(n: int) -> WeightedGraph:
    return WeightedGraph(np.ones(n), np.zeros((n, n)))


@pytest.fixture
def two_cliques():
    """Two disjoint K4s on vertices 0-3 and 4-7."""
    return block_constant_graph([4, 4], [[1.0, 0.0], [0.0, 1.0]], diagonal=False)


class TestLpCheck:
    """Test (C, eta)-upper L^p regularity."""

    def test_edgeless_passes(self):
        """Should pass edgeless graphs without searching."""
        report = upper_lp_regular_check(edgeless(4), 2.0, 0.5)
        assert report.verdict == "pass"
        assert report.certified

    def test_k2_single_class(self):
        """Should certify K2 at eta = 0.6 where only the trivial partition is admissible."""
        report = upper_lp_regular_check(WeightedGraph.from_networkx(nx.complete_graph(2)), 2.0, 0.6)
        assert report.verdict == "pass"
        assert report.meta["mode"] == "exhaustive"

    def test_k2_singletons_fail(self):
        """Should find the singleton partition with ||G||_2 above 1.2 ||G||_1."""
        report = upper_lp_regular_check(WeightedGraph.from_networkx(nx.complete_graph(2)), 1.2, 0.5)
        assert report.verdict == "fail"
        assert report.witness["q"] == 2
        assert report.witness["norm"] == pytest.approx(math.sqrt(0.5))

    def test_clique_fails(self):
        """Should flag the concentrated clique of a clique-plus-isolated graph."""
        report = upper_lp_regular_check(clique_plus_isolated(8, 3), 2.0, 0.25)
        assert report.verdict == "fail"
        assert report.certified
        assert report.witness["norm"] > report.witness["bound"]

    def test_dominant_vertex(self):
        """Should fail the weight precondition before searching."""
        G = WeightedGraph(np.array([5.0, 1.0, 1.0]), np.zeros((3, 3)))
        report = upper_lp_regular_check(G, 2.0, 0.5)
        assert report.verdict == "fail"
        assert report.witness["reason"] == "vertex_weight"
        assert report.searched == 0

    def test_parameter_validation(self):
        """Should reject p <= 1 and eta outside (0, 1]."""
        G = edgeless(3)
        with pytest.raises(ValidationError):
            upper_lp_regular_check(G, 2.0, 0.5, p=1.0)
        with pytest.raises(ValidationError):
            upper_lp_regular_check(G, 2.0, 0.0)


class TestTailChecks:
    """Test (K, eta)-upper and (K', q)-equipartition regularity."""

    def test_uniform_clique_fails(self):
        """Should see all normalized mass above K = 2 on the clique."""
        report = uniform_upper_regular_check(clique_plus_isolated(8, 3), KTable.constant(2.0, grid=(0.5,)), 0.125)
        assert report.verdict == "fail"
        assert report.witness["tail"] == pytest.approx(1.0)

    def test_uniform_complete_passes(self):
        """Should certify a complete graph whose block averages stay below K."""
        G = WeightedGraph.from_networkx(nx.complete_graph(6))
        report = uniform_upper_regular_check(G, KTable.constant(10.0), 1 / 3)
        assert report.verdict == "pass"
        assert report.kind == "uniform"

    def test_equipartition_complete_passes(self):
        """Should certify K6 over all equipartitions into 2 classes."""
        G = WeightedGraph.from_networkx(nx.complete_graph(6))
        report = equipartition_upper_regular_check(G, KTable.constant(10.0), 2)
        assert report.verdict == "pass"
        assert report.kind == "equipartition"

    def test_equipartition_weight_precondition(self):
        """Should refuse q with alpha_max > alpha_G / (2q)."""
        with pytest.raises(ValidationError):
            equipartition_upper_regular_check(edgeless(6), KTable.constant(10.0), 4)

    def test_graphon_constant_passes(self):
        """Should pass a constant graphon and record the step-union scope."""
        report = upper_regular_graphon_check(StepGraphon.constant(1.0), KTable.constant(2.0), 1.0)
        assert report.verdict == "pass"
        assert report.meta["partitions"] == "step_unions"

    def test_k_from_equipartition_table(self):
        """Should tabulate max(4 K'(eps/4) / eps, 16 / eps^2) at 4 eps'."""
        K = k_from_equipartition_table(KTable.constant(1.0, grid=(0.1,)))
        assert K.eps_grid == [pytest.approx(0.4)]
        assert K(0.4) == pytest.approx(100.0)


class TestRegularityReport:
    """Test report validation and serialization."""

    def test_fail_needs_witness(self):
        """Should refuse a failing report without a witness."""
        with pytest.raises(ValidationError):
            RegularityReport("Lp", {}, "fail")

    def test_unknown_kind(self):
        """Should refuse unknown kinds."""
        with pytest.raises(ValidationError):
            RegularityReport("strong", {}, "pass")

    def test_heuristic_pass_is_not_certified(self):
        """Should mark no_violation_found as uncertified."""
        report = RegularityReport("uniform", {"eta": 0.1}, "no_violation_found", searched=40)
        assert report.passed
        assert not report.to_dict()["certified"]


class TestWeakRegularityPartition:
    """Test the cut-witness refinement partitioner."""

    def test_edgeless(self):
        """Should converge at once with zero evidence."""
        result = weak_regularity_partition(edgeless(5), 0.3)
        assert result.converged
        assert result.rounds == 0
        assert (result.lower, result.upper) == (0.0, 0.0)

    def test_complete_graph_needs_no_refinement(self):
        """Should accept the one-class partition of K8 at eps = 0.3."""
        G = WeightedGraph.from_networkx(nx.complete_graph(8))
        result = weak_regularity_partition(G, 0.3)
        assert result.converged
        assert result.rounds == 0
        assert result.upper == pytest.approx(1 / 32)
        assert result.upper <= result.target

    def test_recovers_planted_blocks(self, two_cliques):
        """Should split two disjoint K4s along the cliques in one round."""
        result = weak_regularity_partition(two_cliques, 0.2)
        assert result.converged
        assert result.rounds == 1
        classes = {frozenset(c.tolist()) for c in result.partition.classes()}
        assert classes == {frozenset(range(4)), frozenset(range(4, 8))}
        assert result.lower == result.upper
        assert result.upper <= result.target + 1e-12

    def test_equipartition_output(self, two_cliques):
        """Should honor k_target with an equipartition."""
        result = weak_regularity_partition(two_cliques, 0.2, k_target=4)
        assert result.partition.q == 4
        assert is_equipartition(two_cliques, result.partition)

    def test_unequal_blocks(self):
        """Should meet the target on the final equipartition of K3 and K5."""
        G = block_constant_graph([3, 5], [[1.0, 0.0], [0.0, 1.0]], diagonal=False)
        result = weak_regularity_partition(G, 0.2)
        assert result.converged
        assert result.lower <= result.target
        assert result.meta["pooled_weight"] <= 0.1
        assert is_equipartition(G, result.partition)

    def test_converged_matches_final_evidence(self):
        """Should never report convergence with a witness above the target."""
        graphs = [
            block_constant_graph([3, 5], [[1.0, 0.0], [0.0, 1.0]], diagonal=False),
            block_constant_graph([2, 7], [[1.0, 0.5], [0.5, 0.0]], diagonal=False),
            clique_plus_isolated(9, 4),
        ]
        for G in graphs:
            for eps in (0.15, 0.3, 0.5):
                result = weak_regularity_partition(G, eps)
                assert result.converged == (result.lower <= result.target)
                assert result.lower <= result.upper + 1e-12

    def test_rejects_bad_eps(self):
        """Should require eps in (0, 1)."""
        with pytest.raises(ValidationError):
            weak_regularity_partition(edgeless(3), 1.0)

    @pytest.mark.slow
    def test_erdos_renyi(self):
        """Should meet eps = 0.3 on G(400, 0.1) without refinement."""
        G = erdos_renyi(400, 0.1, seed=5)
        result = weak_regularity_partition(G, 0.3)
        assert result.converged
        assert result.lower <= 0.3 * graph_norm(G, 1)


class TestRegularize:
    """Test regularized versions as step graphons."""

    def test_planted_blocks(self, two_cliques):
        """Should give 2 on the diagonal blocks after normalization."""
        W = regularize(two_cliques, 0.2)
        np.testing.assert_allclose(W.step_lengths, [0.5, 0.5])
        np.testing.assert_allclose(W.values, [[2.0, 0.0], [0.0, 2.0]])

    def test_edgeless(self):
        """Should give the zero graphon."""
        W = regularize(edgeless(4), 0.3)
        assert np.all(W.values == 0.0)
        assert W.step_lengths.sum() == pytest.approx(1.0)


class TestDegreeSortedRefinement:
    """Test refinement of a partition into an equipartition."""

    def test_parts_refine_classes(self):
        """Should keep every full part inside one class and pool only the tails."""
        G = edgeless(8)
        P = VertexPartition((0, 0, 0, 1, 1, 1, 1, 1), 2)
        labels, pooled = class_aligned_equipartition(G, P.as_array(), 4)
        assert pooled == pytest.approx(0.25)
        for part in range(4):
            members = set(np.flatnonzero(labels == part).tolist())
            assert len(members) == 2
        full_parts = [set(np.flatnonzero(labels == part).tolist()) for part in range(3)]
        assert all(m <= {0, 1, 2} or m <= {3, 4, 5, 6, 7} for m in full_parts)

    def test_two_classes_into_four(self):
        """Should give four parts of two vertices each."""
        G = edgeless(8)
        P = VertexPartition((0, 0, 0, 1, 1, 1, 1, 1), 2)
        refined = degree_sorted_refinement(G, P, 4)
        assert refined.q == 4
        np.testing.assert_allclose(refined.class_weights(G), 2.0)

    def test_singletons(self):
        """Should give singletons for q' = n."""
        G = WeightedGraph.from_networkx(nx.path_graph(6))
        refined = degree_sorted_refinement(G, VertexPartition.single_class(6), 6)
        assert sorted(refined.assignment) == list(range(6))

    def test_too_few_parts(self):
        """Should refuse q' below the number of classes."""
        with pytest.raises(ValidationError):
            degree_sorted_refinement(edgeless(4), VertexPartition((0, 0, 1, 1), 2), 1)

    def test_heavy_vertex(self):
        """Should refuse alpha_max > alpha_G / q'."""
        G = WeightedGraph(np.array([3.0, 1.0, 1.0, 1.0]), np.zeros((4, 4)))
        with pytest.raises(ValidationError):
            degree_sorted_refinement(G, VertexPartition.single_class(4), 4)
