"""
Configuration energies, partition functions and ground states on graphs.

E_phi(G, J) = -(1/||G||_1) sum_uv (alpha_u alpha_v / alpha_G^2) beta_uv
J[phi(u), phi(v)], which equals -<beta(G/phi), J>. Exact routines enumerate
all q^n maps; annealing handles larger graphs for ground states only.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import logsumexp

from ..constants import (
    ANNEAL_COOLING,
    ANNEAL_RESTARTS,
    ANNEAL_SWEEPS,
    DEFAULT_ENUMERATION_BUDGET,
    FEASIBILITY_TOL,
    METHOD_ANNEAL,
    METHOD_EXACT,
)
from ..exceptions import InfeasibleEnsembleError, ValidationError
from ..graph import VertexPartition, WeightedGraph, check_partition, normalized_pair_mass, quotient_batches
from ..utils.rng import spawn_generators
from .model import CouplingModel, EnergyResult

logger = logging.getLogger(__name__)


def _check_coupling(J: np.ndarray, q: int) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    if J.shape != (q, q):
        raise ValidationError(f"J must be {q}x{q}, got shape {J.shape}")
    return J


def config_energy(G: WeightedGraph, J: np.ndarray, P: VertexPartition) -> float:
    """
    Energy E_phi(G, J) of the map P; zero for edgeless graphs.

    Raises:
        ValidationError: If J is not q x q or P does not fit G
    """
    check_partition(G, P)
    J = _check_coupling(J, P.q)
    labels = P.as_array()
    return -float(np.sum(normalized_pair_mass(G) * J[labels[:, None], labels[None, :]]))


def _feasible(alphas: np.ndarray, a: np.ndarray, eps: float) -> np.ndarray:
    return np.all(np.abs(alphas - a) <= eps + FEASIBILITY_TOL, axis=-1)


def _energies(betas: np.ndarray, J: np.ndarray) -> np.ndarray:
    return -np.einsum("bij,ij->b", betas, J)


def _enumerate(
    G: WeightedGraph,
    J: np.ndarray,
    h: np.ndarray,
    budget: int,
    a: np.ndarray | None = None,
    eps: float = 0.0,
) -> tuple[float, np.ndarray | None, float]:
    """
    Walk all maps once.

    Returns:
        (minimum Hamiltonian, its lexicographically first map, log Z) over
        the feasible maps; the map is None when nothing is feasible
    """
    q = J.shape[0]
    n = G.n
    best, best_map = math.inf, None
    log_terms: list[float] = []
    for maps, alphas, betas in quotient_batches(G, q, budget):
        hamiltonian = _energies(betas, J) - alphas @ h
        if a is not None:
            mask = _feasible(alphas, a, eps)
            if not mask.any():
                continue
            maps, hamiltonian = maps[mask], hamiltonian[mask]
        i = int(np.argmin(hamiltonian))
        if hamiltonian[i] < best:
            best, best_map = float(hamiltonian[i]), maps[i].copy()
        log_terms.append(float(logsumexp(-n * hamiltonian)))
    log_z = float(logsumexp(log_terms)) if log_terms else -math.inf
    return best, best_map, log_z


def _require_feasible(best_map: np.ndarray | None, m: CouplingModel) -> None:
    if best_map is None:
        raise InfeasibleEnsembleError(
            f"No map has class weights within eps={m.eps} of a={m.a.tolist()}"
        )


def _greedy_start(
    weights: np.ndarray, a: np.ndarray, rng: np.random.Generator | None
) -> np.ndarray:
    """Assign vertices by decreasing weight to the color with the largest deficit."""
    n = weights.size
    order = np.arange(n) if rng is None else rng.permutation(n)
    order = order[np.argsort(-weights[order], kind="stable")]
    labels = np.zeros(n, dtype=int)
    filled = np.zeros(a.size)
    for v in order:
        color = int(np.argmax(a - filled))
        labels[v] = color
        filled[color] += weights[v]
    return labels


class _Annealer:
    """Metropolis annealing over vertex relabels and pair swaps."""

    def __init__(
        self,
        G: WeightedGraph,
        J: np.ndarray,
        h: np.ndarray,
        a: np.ndarray | None,
        eps: float,
    ) -> None:
        self.n = G.n
        self.J = J
        self.h = h
        self.a = a
        self.eps = eps
        self.mass = normalized_pair_mass(G)
        self.weights = G.normalized_weights
        self.q = J.shape[0]

    def hamiltonian(self, labels: np.ndarray) -> float:
        alphas = np.bincount(labels, weights=self.weights, minlength=self.q)
        coupling = -float(np.sum(self.mass * self.J[labels[:, None], labels[None, :]]))
        return coupling - float(alphas @ self.h)

    def _ok(self, alphas: np.ndarray) -> bool:
        if self.a is None:
            return True
        return bool(np.all(np.abs(alphas - self.a) <= self.eps + FEASIBILITY_TOL))

    def _relabel_delta(self, fields: np.ndarray, labels: np.ndarray, x: int, new: int) -> float:
        old = labels[x]
        diag = self.mass[x, x]
        shared_new = fields[x, new] - diag * self.J[new, old]
        shared_old = fields[x, old] - diag * self.J[old, old]
        coupling = -(2.0 * (shared_new - shared_old) + diag * (self.J[new, new] - self.J[old, old]))
        return coupling - (self.h[new] - self.h[old]) * self.weights[x]

    def _apply(self, fields: np.ndarray, labels: np.ndarray, alphas: np.ndarray, x: int, new: int) -> None:
        old = labels[x]
        fields += np.outer(self.mass[:, x], self.J[:, new] - self.J[:, old])
        alphas[old] -= self.weights[x]
        alphas[new] += self.weights[x]
        labels[x] = new

    def run(self, labels: np.ndarray, rng: np.random.Generator, sweeps: int) -> tuple[float, np.ndarray]:
        labels = labels.copy()
        alphas = np.bincount(labels, weights=self.weights, minlength=self.q)
        fields = self.mass @ np.eye(self.q)[labels] @ self.J
        current = self.hamiltonian(labels)
        best, best_labels = current, labels.copy()
        t0 = max(float(np.abs(self.J).max()), float(np.abs(self.h).max()))
        if t0 == 0 or self.q == 1:
            return best, best_labels
        temperature = t0
        for _ in range(sweeps):
            for _ in range(self.n):
                x = int(rng.integers(self.n))
                swap = self.a is not None and rng.random() < 0.5
                if swap:
                    y = int(rng.integers(self.n))
                    if labels[x] == labels[y]:
                        continue
                    cx, cy = labels[x], labels[y]
                    delta = self._relabel_delta(fields, labels, x, cy)
                    self._apply(fields, labels, alphas, x, cy)
                    delta += self._relabel_delta(fields, labels, y, cx)
                    self._apply(fields, labels, alphas, y, cx)
                    if not self._accept(delta, temperature, rng) or not self._ok(alphas):
                        self._apply(fields, labels, alphas, y, cy)
                        self._apply(fields, labels, alphas, x, cx)
                        continue
                else:
                    new = int(rng.integers(self.q - 1))
                    new = new + 1 if new >= labels[x] else new
                    old = labels[x]
                    alphas[old] -= self.weights[x]
                    alphas[new] += self.weights[x]
                    feasible = self._ok(alphas)
                    alphas[old] += self.weights[x]
                    alphas[new] -= self.weights[x]
                    if not feasible:
                        continue
                    delta = self._relabel_delta(fields, labels, x, new)
                    if not self._accept(delta, temperature, rng):
                        continue
                    self._apply(fields, labels, alphas, x, new)
                current += delta
                if current < best - 1e-15:
                    best, best_labels = current, labels.copy()
            temperature *= ANNEAL_COOLING
        return self.hamiltonian(best_labels), best_labels

    def _accept(self, delta: float, temperature: float, rng: np.random.Generator) -> bool:
        if delta <= 0:
            return True
        return bool(rng.random() < math.exp(-self.n * delta / temperature))


def _anneal(
    G: WeightedGraph,
    J: np.ndarray,
    h: np.ndarray,
    a: np.ndarray | None,
    eps: float,
    seed: int,
    sweeps: int,
    restarts: int,
) -> tuple[float, np.ndarray, int]:
    annealer = _Annealer(G, J, h, a, eps)
    best, best_labels, best_restart = math.inf, None, -1
    for r, rng in enumerate(spawn_generators(seed, restarts)):
        if a is None:
            start = rng.integers(J.shape[0], size=G.n)
        else:
            start = _greedy_start(G.normalized_weights, a, None if r == 0 else rng)
            alphas = np.bincount(start, weights=G.normalized_weights, minlength=a.size)
            if not np.all(np.abs(alphas - a) <= eps + FEASIBILITY_TOL):
                continue
        value, labels = annealer.run(start, rng, sweeps)
        logger.debug("Annealing restart %d: %.12g", r, value)
        if value < best:
            best, best_labels, best_restart = value, labels, r
    if best_labels is None:
        raise InfeasibleEnsembleError(
            f"Greedy rebalancing found no start within eps={eps} of a={np.asarray(a).tolist()}"
        )
    return best, best_labels, best_restart


def microcanonical_gse(
    G: WeightedGraph,
    m: CouplingModel,
    method: str = METHOD_EXACT,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    seed: int = 0,
    sweeps: int = ANNEAL_SWEEPS,
    restarts: int = ANNEAL_RESTARTS,
) -> EnergyResult:
    """
    Microcanonical ground state energy E_{a,eps}(G, J).

    Args:
        G: Graph
        m: Coupling model (J, a, eps; h is ignored)
        method: "exact" (all q^n maps) or "anneal"
        budget: Largest q^n for exact enumeration
        seed: Root seed for annealing restarts
        sweeps: Annealing sweeps of n proposed moves each
        restarts: Annealing restarts

    Returns:
        EnergyResult with the optimal (or best found) map

    Raises:
        InfeasibleEnsembleError: If no map satisfies the class-weight constraint
        BudgetExceededError: If exact enumeration exceeds the budget
    """
    zero_field = np.zeros(m.q)
    if method == METHOD_EXACT:
        best, best_map, _ = _enumerate(G, m.J, zero_field, budget, m.a, m.eps)
        _require_feasible(best_map, m)
        return EnergyResult(best, VertexPartition(tuple(best_map.tolist()), m.q), True, METHOD_EXACT)
    if method == METHOD_ANNEAL:
        best, labels, restart = _anneal(G, m.J, zero_field, m.a, m.eps, seed, sweeps, restarts)
        return EnergyResult(
            best,
            VertexPartition(tuple(labels.tolist()), m.q),
            False,
            METHOD_ANNEAL,
            {"seed": seed, "sweeps": sweeps, "restarts": restarts, "best_restart": restart},
        )
    raise ValidationError(f"Unknown method {method!r}; expected 'exact' or 'anneal'")


def microcanonical_free_energy(
    G: WeightedGraph, m: CouplingModel, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> EnergyResult:
    """
    F_{a,eps}(G, J) = -(1/n) log sum over the ensemble of exp(-n E_phi).

    Raises:
        InfeasibleEnsembleError: If the ensemble is empty
        BudgetExceededError: If q^n > budget
    """
    best, best_map, log_z = _enumerate(G, m.J, np.zeros(m.q), budget, m.a, m.eps)
    _require_feasible(best_map, m)
    return EnergyResult(-log_z / G.n, None, True, METHOD_EXACT, {"log_partition": log_z})


def free_energy(
    G: WeightedGraph,
    J: np.ndarray,
    h: np.ndarray | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> EnergyResult:
    """
    Unrestricted free energy F(G, J, h) = -(1/n) log Z_{G,J,h}.

    Raises:
        BudgetExceededError: If q^n > budget
    """
    model = CouplingModel(J, h)
    _, _, log_z = _enumerate(G, model.J, model.h, budget)
    return EnergyResult(-log_z / G.n, None, True, METHOD_EXACT, {"log_partition": log_z})


def ground_state_energy(
    G: WeightedGraph,
    J: np.ndarray,
    h: np.ndarray | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    method: str = METHOD_EXACT,
    seed: int = 0,
    sweeps: int = ANNEAL_SWEEPS,
    restarts: int = ANNEAL_RESTARTS,
) -> EnergyResult:
    """
    Unrestricted ground state energy E(G, J, h) = min_phi (E_phi - <h, alpha(G/phi)>).

    Raises:
        BudgetExceededError: If exact enumeration exceeds the budget
    """
    model = CouplingModel(J, h)
    if method == METHOD_EXACT:
        best, best_map, _ = _enumerate(G, model.J, model.h, budget)
        return EnergyResult(best, VertexPartition(tuple(best_map.tolist()), model.q), True, METHOD_EXACT)
    if method == METHOD_ANNEAL:
        best, labels, restart = _anneal(G, model.J, model.h, None, 0.0, seed, sweeps, restarts)
        return EnergyResult(
            best,
            VertexPartition(tuple(labels.tolist()), model.q),
            False,
            METHOD_ANNEAL,
            {"seed": seed, "sweeps": sweeps, "restarts": restarts, "best_restart": restart},
        )
    raise ValidationError(f"Unknown method {method!r}; expected 'exact' or 'anneal'")
