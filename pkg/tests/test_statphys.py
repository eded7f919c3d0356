"""
Tests for spin-model energies on graphs and step graphons.

Covers the energy-quotient identity, microcanonical and unrestricted ground
state and free energies, the sandwich inequalities, annealing and the
graphon closed forms.
"""

import itertools
import math
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.graphlim.exceptions import BudgetExceededError, InfeasibleEnsembleError, ValidationError
from scripts.graphlim.graph import VertexPartition, WeightedGraph, disjoint_union, quotient
from scripts.graphlim.graphon import StepGraphon, cut_distance, normalize
from scripts.graphlim.statphys import (
    CouplingModel,
    config_energy,
    free_energy,
    graphon_energy,
    graphon_free_energy,
    graphon_ground_state_energy,
    graphon_gse,
    graphon_unrestricted_free_energy,
    ground_state_energy,
    microcanonical_free_energy,
    microcanonical_gse,
)
from scripts.graphlim.quotients import StepFractionalPartition

ANTIFERRO = np.array([[0.0, 1.0], [1.0, 0.0]])
K2_FREE_ENERGY = -0.5 * math.log(2 * math.e**2 + 2)


@pytest.fixture
def k2():
    """Single edge on two unit-weight vertices."""
    return WeightedGraph.from_networkx(nx.complete_graph(2))


def random_graph(rng: np.random.Generator, n: int) -> WeightedGraph:
    upper = np.triu(rng.uniform(0.0, 1.0, size=(n, n)) * (rng.random((n, n)) < 0.6))
    return WeightedGraph(rng.uniform(0.2, 2.0, size=n), upper + np.triu(upper, 1).T)


def random_coupling(rng: np.random.Generator, q: int) -> np.ndarray:
    upper = np.triu(rng.normal(size=(q, q)))
    return upper + np.triu(upper, 1).T


class TestCouplingModel:
    """Test model validation."""

    def test_defaults(self):
        """Should default to zero field and uniform target weights."""
        m = CouplingModel(np.eye(3))
        np.testing.assert_allclose(m.h, 0.0)
        np.testing.assert_allclose(m.a, 1 / 3)

    def test_rejects_asymmetric_coupling(self):
        """Should require a symmetric J."""
        with pytest.raises(ValidationError):
            CouplingModel(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_target_off_simplex(self):
        """Should require a in the simplex."""
        with pytest.raises(ValidationError):
            CouplingModel(np.eye(2), a=[0.7, 0.7])

    def test_from_dict(self):
        """Should read J, a and eps from a document."""
        m = CouplingModel.from_dict({"J": [[0, 1], [1, 0]], "a": [0.5, 0.5], "eps": 0.5})
        assert m.q == 2
        assert m.eps == 0.5

    def test_coupling_norms(self):
        """Should give the sup and l1 norms of J."""
        m = CouplingModel(np.array([[1.0, -2.0], [-2.0, 0.5]]))
        assert m.j_sup == 2.0
        assert m.j_l1 == 5.5


class TestConfigEnergy:
    """Test E_phi(G, J)."""

    def test_k2_split(self, k2):
        """Should give -1 for the split map under antiferromagnetic couplings."""
        assert config_energy(k2, ANTIFERRO, VertexPartition((0, 1), 2)) == pytest.approx(-1.0)

    def test_zero_coupling(self, k2):
        """Should vanish for J = 0."""
        assert config_energy(k2, np.zeros((2, 2)), VertexPartition((0, 1), 2)) == 0.0

    def test_edgeless(self):
        """Should vanish on edgeless graphs."""
        G = WeightedGraph(np.ones(3), np.zeros((3, 3)))
        assert config_energy(G, np.ones((2, 2)), VertexPartition((0, 1, 1), 2)) == 0.0

    def test_quotient_identity(self):
        """Should equal -<beta(G/phi), J> for every map."""
        rng = np.random.default_rng(1)
        for _ in range(60):
            n, q = int(rng.integers(1, 6)), int(rng.integers(1, 4))
            G, J = random_graph(rng, n), random_coupling(rng, q)
            for phi in itertools.product(range(q), repeat=n):
                P = VertexPartition(phi, q)
                identity = config_energy(G, J, P) + float(np.sum(quotient(G, P).beta * J))
                assert abs(identity) <= 1e-12


class TestMicrocanonical:
    """Test E_{a,eps}(G, J) and F_{a,eps}(G, J)."""

    def test_k2_ground_state(self, k2):
        """Should reach -1 with a split optimizer."""
        result = microcanonical_gse(k2, CouplingModel(ANTIFERRO, a=[0.5, 0.5], eps=0.5))
        assert result.value == pytest.approx(-1.0, abs=1e-9)
        assert result.exact_flag
        assert sorted(result.optimizer.assignment) == [0, 1]

    def test_k2_free_energy(self, k2):
        """Should give -(1/2) log(2 e^2 + 2)."""
        result = microcanonical_free_energy(k2, CouplingModel(ANTIFERRO, a=[0.5, 0.5], eps=0.5))
        assert result.value == pytest.approx(K2_FREE_ENERGY, abs=1e-9)

    def test_forced_single_class(self, k2):
        """Should allow only the all-zero map when a = (1, 0) and eps = 0."""
        result = microcanonical_gse(k2, CouplingModel(ANTIFERRO, a=[1.0, 0.0], eps=0.0))
        assert result.value == pytest.approx(0.0)
        assert result.optimizer.assignment == (0, 0)

    def test_zero_coupling_free_energy(self):
        """Should give -log q when every map is feasible and J = 0."""
        G = WeightedGraph.from_networkx(nx.path_graph(4))
        result = microcanonical_free_energy(G, CouplingModel(np.zeros((3, 3)), eps=1.0))
        assert result.value == pytest.approx(-math.log(3))

    def test_single_vertex(self):
        """Should give zero energy and free energy for one vertex in class 0."""
        G = WeightedGraph(np.ones(1), np.zeros((1, 1)))
        model = CouplingModel(ANTIFERRO, a=[1.0, 0.0], eps=0.0)
        assert microcanonical_free_energy(G, model).value == pytest.approx(0.0)
        assert microcanonical_gse(G, model).value == 0.0

    def test_infeasible(self, k2):
        """Should raise when no map meets the class weights."""
        with pytest.raises(InfeasibleEnsembleError):
            microcanonical_gse(k2, CouplingModel(ANTIFERRO, a=[0.75, 0.25], eps=0.1))

    def test_budget(self, k2):
        """Should refuse enumeration beyond the budget."""
        with pytest.raises(BudgetExceededError):
            microcanonical_gse(k2, CouplingModel(ANTIFERRO), budget=3)

    def test_unknown_method(self, k2):
        """Should reject methods other than exact and anneal."""
        with pytest.raises(ValidationError):
            microcanonical_gse(k2, CouplingModel(ANTIFERRO), method="magic")


class TestUnrestricted:
    """Test F(G, J, h) and E(G, J, h)."""

    def test_zero_everything(self):
        """Should give F = -log q and E = 0 for J = 0, h = 0."""
        G = WeightedGraph.from_networkx(nx.cycle_graph(4))
        assert free_energy(G, np.zeros((2, 2))).value == pytest.approx(-math.log(2))
        assert ground_state_energy(G, np.zeros((2, 2))).value == 0.0

    def test_k2(self, k2):
        """Should give E = -1 and the closed free energy."""
        assert ground_state_energy(k2, ANTIFERRO).value == pytest.approx(-1.0)
        assert free_energy(k2, ANTIFERRO).value == pytest.approx(K2_FREE_ENERGY)

    def test_sandwich_inequalities(self):
        """Should keep F <= E <= F + log q, microcanonical and unrestricted."""
        rng = np.random.default_rng(5)
        for _ in range(60):
            n, q = int(rng.integers(1, 8)), int(rng.integers(1, 4))
            G, J = random_graph(rng, n), random_coupling(rng, q)
            h = rng.normal(size=q)
            F, E = free_energy(G, J, h).value, ground_state_energy(G, J, h).value
            assert F <= E + 1e-9
            assert E <= F + math.log(q) + 1e-9
            phi = VertexPartition(tuple(rng.integers(q, size=n).tolist()), q)
            model = CouplingModel(J, a=quotient(G, phi).alpha, eps=0.05)
            Fm, Em = microcanonical_free_energy(G, model).value, microcanonical_gse(G, model).value
            assert Fm <= Em + 1e-9
            assert Em <= Fm + math.log(q) + 1e-9

    def test_disjoint_copies_share_free_energy(self):
        """Should factor the partition function over two copies."""
        rng = np.random.default_rng(8)
        for _ in range(10):
            G = random_graph(rng, int(rng.integers(1, 5)))
            J, h = random_coupling(rng, 2), rng.normal(size=2)
            assert free_energy(disjoint_union(G, G), J, h).value == pytest.approx(
                free_energy(G, J, h).value, abs=1e-9
            )

    def test_cycles_differ(self):
        """Should separate C4 and C6 under antiferromagnetic couplings."""
        C4 = WeightedGraph.from_networkx(nx.cycle_graph(4))
        C6 = WeightedGraph.from_networkx(nx.cycle_graph(6))
        gap = abs(free_energy(C4, ANTIFERRO).value - free_energy(C6, ANTIFERRO).value)
        assert gap > 1e-3


class TestAnnealing:
    """Test simulated annealing against enumeration."""

    def test_matches_exact_on_small_graph(self):
        """Should find the exact microcanonical ground state of a small graph."""
        G = WeightedGraph.from_networkx(nx.petersen_graph())
        model = CouplingModel(ANTIFERRO, a=[0.5, 0.5], eps=0.1)
        exact = microcanonical_gse(G, model)
        annealed = microcanonical_gse(G, model, method="anneal", sweeps=200, seed=3)
        assert not annealed.exact_flag
        assert annealed.value >= exact.value - 1e-12
        assert annealed.value == pytest.approx(exact.value, abs=1e-9)

    def test_seeded(self):
        """Should reproduce the same result for the same seed."""
        G = WeightedGraph.from_networkx(nx.cycle_graph(8))
        first = ground_state_energy(G, ANTIFERRO, method="anneal", sweeps=50, seed=9)
        second = ground_state_energy(G, ANTIFERRO, method="anneal", sweeps=50, seed=9)
        assert first.value == second.value
        assert first.optimizer == second.optimizer


class TestGraphonEnergies:
    """Test ground states and free energies of step graphons."""

    def test_constant_uniform_energy(self):
        """Should give -1/q for J = identity and uniform rows."""
        q = 3
        rho = StepFractionalPartition.uniform([1.0], q)
        assert graphon_energy(StepGraphon.constant(1.0), np.eye(q), rho) == pytest.approx(-1 / q)

    def test_gse_closed_forms(self):
        """Should use closed forms for constant graphons and J = 0."""
        result = graphon_gse(StepGraphon.constant(1.0), ANTIFERRO, [0.5, 0.5])
        assert result.value == pytest.approx(-0.5)
        assert result.exact_flag
        assert graphon_gse(StepGraphon.constant(1.0), np.zeros((2, 2)), [0.5, 0.5]).value == 0.0

    def test_gse_finds_hard_split(self, k2):
        """Should reach -1 on the normalized single edge."""
        result = graphon_gse(normalize(k2), ANTIFERRO, [0.5, 0.5])
        assert result.value <= -1.0 + 1e-6
        assert not result.exact_flag

    def test_free_energy_closed_forms(self):
        """Should give -H(a) on the zero graphon and -c aJa - H(a) on constants."""
        zero = graphon_free_energy(StepGraphon.zero(), ANTIFERRO, [0.5, 0.5])
        assert zero.value == pytest.approx(-math.log(2))
        constant = graphon_free_energy(StepGraphon.constant(1.0), ANTIFERRO, [0.5, 0.5])
        assert constant.value == pytest.approx(-0.5 - math.log(2), abs=1e-6)
        skewed = graphon_free_energy(StepGraphon([0.5, 0.5], [[1.0, 0.0], [0.0, 2.0]]), np.zeros((2, 2)), [0.25, 0.75])
        assert skewed.value == pytest.approx(0.25 * math.log(0.25) + 0.75 * math.log(0.75))

    def test_free_energy_below_gse(self, k2):
        """Should keep F_a <= E_a for the normalized single edge."""
        W = normalize(k2)
        F = graphon_free_energy(W, ANTIFERRO, [0.5, 0.5], restarts=5)
        E = graphon_gse(W, ANTIFERRO, [0.5, 0.5], restarts=5)
        assert F.value <= E.value + 1e-9
        np.testing.assert_allclose(F.optimizer.alpha, [0.5, 0.5], atol=1e-8)

    def test_unrestricted_closed_forms(self):
        """Should give -max h and -log sum exp h when the energy term vanishes."""
        h = np.array([0.2, 1.0])
        W = StepGraphon.constant(1.0)
        assert graphon_ground_state_energy(W, np.zeros((2, 2)), h).value == pytest.approx(-1.0)
        expected = -math.log(math.exp(0.2) + math.e)
        assert graphon_unrestricted_free_energy(W, np.zeros((2, 2)), h).value == pytest.approx(expected)

    def test_unrestricted_ground_state(self, k2):
        """Should reach the split value -1 on the normalized edge."""
        result = graphon_ground_state_energy(normalize(k2), ANTIFERRO)
        assert result.value == pytest.approx(-1.0, abs=1e-9)

    def test_gse_cut_continuity_on_constants(self):
        """Should move by at most ||J||_1 times the cut distance."""
        U, W = StepGraphon.constant(1.0), StepGraphon.constant(0.4)
        J = np.array([[0.3, -1.0], [-1.0, 2.0]])
        gap = abs(graphon_gse(U, J, [0.3, 0.7]).value - graphon_gse(W, J, [0.3, 0.7]).value)
        assert gap <= np.abs(J).sum() * cut_distance(U, W).upper + 1e-12
