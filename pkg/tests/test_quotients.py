"""
Tests for fractional partitions, the d_1 metric, Hausdorff distances and
quotient-set nets.
"""

import math
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.graphlim.exceptions import ValidationError
from scripts.graphlim.graph import Quotient, VertexPartition, WeightedGraph, graph_norm, quotient
from scripts.graphlim.graphon import StepGraphon, cut_norm_exact, embed
from scripts.graphlim.quotients import (
    QuotientSet,
    StepFractionalPartition,
    average_fractional,
    d1,
    directed_distances,
    entropy,
    finest_grid_parts,
    fractional_distance,
    fractional_quotient,
    hausdorff,
    load_quotient_set,
    local_refinement,
    partition_to_fractional,
    round_fractional,
    sample_quotient_set,
    save_quotient_set,
    simplex_grid,
)

ONE_CLASS = Quotient([1, 0], [[1, 0], [0, 0]])
SPLIT = Quotient([0.5, 0.5], [[0, 0.5], [0.5, 0]])


def random_rho(rng: np.random.Generator, lengths: np.ndarray, q: int) -> StepFractionalPartition:
    weights = rng.dirichlet(np.full(q, 0.7), size=lengths.size)
    weights[:, -1] = 1.0 - weights[:, :-1].sum(axis=1)
    return StepFractionalPartition(np.clip(weights, 0.0, 1.0), lengths)


def random_lengths(rng: np.random.Generator, k: int) -> np.ndarray:
    lengths = rng.dirichlet(np.ones(k))
    lengths[-1] = 1.0 - lengths[:-1].sum()
    return lengths


class TestD1:
    """Test the l1 distance between quotients."""

    def test_identical(self):
        """Should be zero for identical quotients."""
        assert d1(SPLIT, SPLIT) == 0.0

    def test_k2_quotients(self):
        """Should add the alpha and beta parts."""
        assert d1(ONE_CLASS, SPLIT) == pytest.approx(3.0)

    def test_alpha_only(self):
        """Should be 2 between opposite corners with zero beta."""
        assert d1(Quotient([1, 0], 0.0), Quotient([0, 1], 0.0)) == pytest.approx(2.0)

    def test_rejects_mixed_q(self):
        """Should refuse quotients with different q."""
        with pytest.raises(ValidationError):
            d1(Quotient([1.0], 0.0), SPLIT)


class TestHausdorff:
    """Test Hausdorff distances between finite quotient sets."""

    def test_same_set(self):
        """Should be zero for a set against itself."""
        assert hausdorff([ONE_CLASS, SPLIT], [SPLIT, ONE_CLASS]) == 0.0

    def test_singletons(self):
        """Should collapse to d_1 for singletons."""
        assert hausdorff([ONE_CLASS], [SPLIT]) == pytest.approx(d1(ONE_CLASS, SPLIT))

    def test_directed_part_dominates(self):
        """Should take the larger directed distance."""
        a = Quotient([1, 0], 0.0)
        b = Quotient([0, 1], 0.0)
        assert hausdorff([a], [a, b]) == pytest.approx(2.0)

    def test_rejects_empty(self):
        """Should refuse empty sets."""
        with pytest.raises(ValidationError):
            hausdorff([], [SPLIT])

    def test_set_file_roundtrip(self, tmp_path):
        """Should save and reload a quotient set with its meta."""
        points = QuotientSet((ONE_CLASS, SPLIT), {"method": "enumeration"})
        path = tmp_path / "set.json"
        save_quotient_set(path, points)
        loaded = load_quotient_set(path)
        assert set(loaded.points) == {ONE_CLASS, SPLIT}
        assert loaded.meta == {"method": "enumeration"}


class TestFractionalPartition:
    """Test fractional partitions and their quotients."""

    def test_rejects_rows_off_simplex(self):
        """Should require rows summing to 1."""
        with pytest.raises(ValidationError):
            StepFractionalPartition([[0.5, 0.4]], [1.0])

    def test_uniform_on_constant(self):
        """Should give product-form quotients on a constant graphon."""
        q = 3
        Q = fractional_quotient(StepGraphon.constant(1.0), StepFractionalPartition.uniform([1.0], q))
        np.testing.assert_allclose(Q.alpha, np.full(q, 1 / q))
        np.testing.assert_allclose(Q.beta, np.full((q, q), 1 / q**2))

    def test_hard_split_matches_graph_quotient(self):
        """Should equal ||G||_1 times the graph quotient for rho_phi."""
        G = WeightedGraph.from_networkx(nx.complete_graph(2))
        phi = VertexPartition((0, 1), 2)
        Q = fractional_quotient(embed(G), partition_to_fractional(G, phi))
        np.testing.assert_allclose(Q.beta, graph_norm(G, 1) * quotient(G, phi).beta)
        np.testing.assert_allclose(Q.beta, [[0, 0.25], [0.25, 0]])

    def test_zero_graphon(self):
        """Should give beta = 0 on the zero graphon."""
        rng = np.random.default_rng(0)
        lengths = np.array([0.5, 0.5])
        Q = fractional_quotient(StepGraphon.zero(lengths), random_rho(rng, lengths, 2))
        assert np.all(Q.beta == 0.0)

    def test_rejects_step_mismatch(self):
        """Should refuse a partition on other steps."""
        with pytest.raises(ValidationError):
            fractional_quotient(StepGraphon.constant(1.0), StepFractionalPartition.uniform([0.5, 0.5], 2))

    def test_block_fractional_partition(self):
        """Should record class shares inside every block."""
        G = WeightedGraph(np.ones(4), np.zeros((4, 4)))
        rho = partition_to_fractional(G, VertexPartition((0, 1, 1, 1), 2), VertexPartition((0, 0, 1, 1), 2))
        np.testing.assert_allclose(rho.weights, [[0.5, 0.5], [0.0, 1.0]])
        np.testing.assert_allclose(rho.step_lengths, [0.5, 0.5])

    def test_hard_partitions(self):
        """Should recognize indicator rows and reject uniform ones."""
        assert StepFractionalPartition.hard([0.5, 0.5], [1, 0], 2).is_hard()
        assert not StepFractionalPartition.uniform([0.5, 0.5], 2).is_hard()


class TestEntropy:
    """Test Ent(rho) and its continuity."""

    def test_uniform(self):
        """Should equal log q."""
        assert entropy(StepFractionalPartition.uniform([0.3, 0.7], 3)) == pytest.approx(math.log(3))

    def test_hard(self):
        """Should vanish for 0/1 rows."""
        assert entropy(StepFractionalPartition.hard([0.5, 0.5], [0, 1], 2)) == 0.0

    def test_single_row(self):
        """Should match H(3/4, 1/4)."""
        assert entropy(StepFractionalPartition([[0.75, 0.25]], [1.0])) == pytest.approx(0.5623351446)

    def test_continuity_modulus(self):
        """Should respect |Ent - Ent'| <= q f(d_1 / q) with f(x) = x (1 - log x)."""
        rng = np.random.default_rng(17)
        for _ in range(1000):
            q = int(rng.integers(2, 4))
            lengths = random_lengths(rng, int(rng.integers(1, 5)))
            rho, other = random_rho(rng, lengths, q), random_rho(rng, lengths, q)
            x = fractional_distance(rho, other) / q
            bound = 0.0 if x == 0 else q * x * (1.0 - math.log(x))
            assert abs(entropy(rho) - entropy(other)) <= bound + 1e-12


class TestQuotientMapLipschitz:
    """Test d_1(U/rho, W/rho) <= q^2 ||U - W||_box."""

    def test_random_pairs(self):
        """Should hold on random step graphons sharing steps."""
        rng = np.random.default_rng(23)
        for _ in range(200):
            k, q = int(rng.integers(1, 7)), int(rng.integers(1, 4))
            lengths = random_lengths(rng, k)
            values = []
            for _ in range(2):
                upper = np.triu(rng.uniform(0.0, 2.0, size=(k, k)))
                values.append(upper + np.triu(upper, 1).T)
            U, W = StepGraphon(lengths, values[0]), StepGraphon(lengths, values[1])
            rho = random_rho(rng, lengths, q)
            gap = d1(fractional_quotient(U, rho), fractional_quotient(W, rho))
            assert gap <= q**2 * cut_norm_exact(StepGraphon(lengths, values[0] - values[1])) + 1e-10


class TestAverageFractional:
    """Test averaging fractional partitions over step groups."""

    def test_length_weighted_average(self):
        """Should replace each row by the length-weighted mean of its group."""
        rho = StepFractionalPartition([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]], [0.25, 0.25, 0.5])
        averaged = average_fractional(rho, [[0, 1], [2]])
        np.testing.assert_allclose(averaged.weights, [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]])
        np.testing.assert_allclose(averaged.step_lengths, rho.step_lengths)

    def test_rejects_bad_groups(self):
        """Should require the groups to partition the steps."""
        rho = StepFractionalPartition.uniform([0.5, 0.5], 2)
        with pytest.raises(ValidationError):
            average_fractional(rho, [[0]])


class TestRoundFractional:
    """Test rounding fractional partitions to vertex maps."""

    def test_class_weights_close(self):
        """Should miss every class weight by less than alpha_max per block."""
        G = WeightedGraph(np.ones(10), np.zeros((10, 10)))
        blocks = VertexPartition(tuple([0] * 6 + [1] * 4), 2)
        rho = StepFractionalPartition([[0.5, 0.5], [0.25, 0.75]], [0.6, 0.4])
        phi = round_fractional(G, rho, blocks)
        realized = partition_to_fractional(G, phi, blocks)
        assert fractional_distance(realized, rho) <= 2 * 2 * 1 / 10 + 1e-12

    def test_rejects_row_count_mismatch(self):
        """Should require one row per nonempty block."""
        G = WeightedGraph(np.ones(4), np.zeros((4, 4)))
        with pytest.raises(ValidationError):
            round_fractional(G, StepFractionalPartition.uniform([1.0], 2), VertexPartition((0, 0, 1, 1), 2))


class TestSimplexGrid:
    """Test simplex grids and the grid budget."""

    def test_grid_rows(self):
        """Should list the six points of the 1/2-grid in lexicographic order."""
        rows = simplex_grid(3, 2)
        assert rows.shape == (6, 3)
        np.testing.assert_allclose(rows.sum(axis=1), 1.0)
        np.testing.assert_allclose(rows[0], [0.0, 0.0, 1.0])
        np.testing.assert_allclose(rows[-1], [1.0, 0.0, 0.0])

    @pytest.mark.parametrize(
        "k,q,budget,expected",
        [(1, 2, 100, 99), (2, 2, 100, 9), (1, 1, 10, 1), (3, 3, 10, 1)],
    )
    def test_finest_grid_parts(self, k, q, budget, expected):
        """Should pick the finest grid whose size fits the budget."""
        assert finest_grid_parts(k, q, budget) == expected


class TestSampleQuotientSet:
    """Test grid and random nets of fractional quotient sets."""

    def test_constant_graphon_grid(self):
        """Should contain the three grid points with beta = alpha alpha^T."""
        net = sample_quotient_set(StepGraphon.constant(1.0), 2, mesh=0.5)
        assert len(net) == 3
        for point in net:
            np.testing.assert_allclose(point.beta, np.outer(point.alpha, point.alpha), atol=1e-15)
        assert net.meta["method"] == "grid"
        assert net.meta["radius"] == pytest.approx(2 * 3 * 2 * 0.5)

    def test_zero_graphon(self):
        """Should sweep the simplex grid with beta = 0."""
        net = sample_quotient_set(StepGraphon.zero(), 2, mesh=0.25)
        assert len(net) == 5
        assert all(np.all(p.beta == 0.0) for p in net)

    def test_single_class(self):
        """Should give the single point ((1), ||W||_1) for q = 1."""
        W = embed(WeightedGraph.from_networkx(nx.complete_graph(2)))
        net = sample_quotient_set(W, 1, mesh=0.5)
        assert len(net) == 1
        assert net.points[0].beta[0, 0] == pytest.approx(0.5)

    def test_random_sampling_is_seeded(self):
        """Should reproduce the same net for the same seed."""
        W = StepGraphon([0.25, 0.75], [[1.0, 0.5], [0.5, 0.0]])
        first = sample_quotient_set(W, 2, samples=200, seed=4)
        second = sample_quotient_set(W, 2, samples=200, seed=4)
        assert first.points == second.points
        assert first.meta["radius"] is None

    def test_local_refinement_shrinks_gap(self):
        """Should add points that bring the random net closer to a fine grid net."""
        W = StepGraphon([0.5, 0.5], [[1.0, 0.2], [0.2, 0.6]])
        grid = sample_quotient_set(W, 2, mesh=0.1)
        plain = sample_quotient_set(W, 2, samples=40, seed=3, refine_rounds=0)
        refined = sample_quotient_set(W, 2, samples=40, seed=3)
        assert plain.meta["refined"] == 0
        assert refined.meta["refined"] > 0
        assert set(plain.points) <= set(refined.points)
        assert directed_distances(grid, refined)[0] <= directed_distances(grid, plain)[0]

    def test_local_refinement_stays_on_simplex(self):
        """Should keep every moved row a probability vector and add at most the starting count."""
        rng = np.random.default_rng(2)
        W = StepGraphon([0.25, 0.75], [[1.0, 0.5], [0.5, 0.0]])
        rhos = rng.dirichlet(np.ones(3), size=(30, 2))
        moves = local_refinement(W, rhos, 3, rng)
        assert 0 < moves.shape[0] < 30
        assert np.all(moves >= 0)
        np.testing.assert_allclose(moves.sum(axis=2), 1.0)

    def test_needs_mesh_or_samples(self):
        """Should refuse a call with neither mesh nor samples."""
        with pytest.raises(ValidationError):
            sample_quotient_set(StepGraphon.constant(1.0), 2)
