"""
Block averages, quotients and exhaustive quotient enumeration.

The quotient G/phi records class weights alpha_i = alpha_{V_i}/alpha_G and
normalized block masses beta_ij = sum_{V_i x V_j} alpha_u alpha_v beta_uv /
(alpha_G^2 ||G||_1). Enumeration walks all q^n maps in lexicographic order in
vectorized batches.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterator

import numpy as np

from ..constants import DEDUP_DECIMALS, DEFAULT_ENUMERATION_BUDGET, ENUMERATION_BATCH, SCHEMA_SUM_TOL
from ..exceptions import BudgetExceededError, ValidationError
from .weighted_graph import VertexPartition, WeightedGraph, check_partition, graph_norm

logger = logging.getLogger(__name__)


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + np.swapaxes(matrix, -1, -2)) / 2.0


@dataclass(frozen=True, eq=False)
class Quotient:
    """
    A q-quotient (alpha, beta).

    Equality and hashing use values rounded to 12 decimals, so quotients
    can be deduplicated in sets and dicts.
    """

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        alpha = np.array(self.alpha, dtype=float).reshape(-1)
        beta = np.array(self.beta, dtype=float)
        q = alpha.size
        if q == 0:
            raise ValidationError("Quotient needs q >= 1")
        if beta.ndim == 0:
            beta = np.full((q, q), float(beta))
        if beta.shape != (q, q):
            raise ValidationError(f"Quotient beta must be {q}x{q}, got {beta.shape}")
        if np.any(alpha < -SCHEMA_SUM_TOL) or abs(alpha.sum() - 1.0) > SCHEMA_SUM_TOL:
            raise ValidationError("Quotient alpha must lie in the simplex")
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def q(self) -> int:
        return self.alpha.size

    @property
    def beta_mass(self) -> float:
        """sum_ij |beta_ij|; at most 1 for graph quotients."""
        return float(np.abs(self.beta).sum())

    def key(self) -> tuple[float, ...]:
        flat = np.concatenate([self.alpha, self.beta.ravel()])
        return tuple((np.round(flat, DEDUP_DECIMALS) + 0.0).tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quotient):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Quotient(alpha={self.alpha.tolist()}, beta={self.beta.tolist()})"

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": self.alpha.tolist(), "beta": self.beta.tolist()}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "Quotient":
        return cls(np.asarray(document["alpha"], dtype=float), np.asarray(document["beta"], dtype=float))


def block_sums(G: WeightedGraph, P: VertexPartition) -> np.ndarray:
    """q x q matrix of sum_{V_i x V_j} alpha_u alpha_v beta_uv."""
    check_partition(G, P)
    M = P.indicator()
    return _symmetrize(M.T @ G.pair_mass @ M)


def average_over_partition(G: WeightedGraph, P: VertexPartition) -> WeightedGraph:
    """
    Block-averaged graph G_P.

    Each block carries the alpha-weighted average of beta; blocks touching a
    class of total weight zero are set to 0.
    """
    sums = block_sums(G, P)
    weights = P.class_weights(G)
    denom = np.outer(weights, weights)
    block = np.divide(sums, denom, out=np.zeros_like(sums), where=denom > 0)
    labels = P.as_array()
    return WeightedGraph(G.vertex_weights, block[np.ix_(labels, labels)])


def quotient(G: WeightedGraph, P: VertexPartition) -> Quotient:
    """
    Quotient G/phi for the map given by P.

    beta is the zero matrix when ||G||_1 = 0.
    """
    weights = P.class_weights(G)
    alpha = weights / G.total_weight
    norm = graph_norm(G, 1)
    if norm == 0:
        return Quotient(alpha, np.zeros((P.q, P.q)))
    return Quotient(alpha, block_sums(G, P) / (G.total_weight**2 * norm))


def normalized_pair_mass(G: WeightedGraph) -> np.ndarray:
    """alpha_u alpha_v beta_uv / (alpha_G^2 ||G||_1), zero for edgeless graphs."""
    norm = graph_norm(G, 1)
    if norm == 0:
        return np.zeros((G.n, G.n))
    return G.pair_mass / (G.total_weight**2 * norm)


def check_enumeration_budget(n: int, q: int, budget: int) -> None:
    """Raise BudgetExceededError when q^n maps exceed the budget."""
    required = q**n
    if required > budget:
        raise BudgetExceededError(
            f"Enumerating {q}^{n} = {required} maps exceeds budget {budget}",
            required=required,
            budget=budget,
        )


def iter_maps(n: int, q: int, batch: int = ENUMERATION_BATCH) -> Iterator[np.ndarray]:
    """
    Yield all q^n maps as integer arrays of shape (batch, n).

    Maps come in lexicographic order of the tuple (phi(0), ..., phi(n-1)).
    """
    total = q**n
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, batch):
        index = np.arange(start, min(start + batch, total), dtype=np.int64)
        yield (index[:, None] // powers[None, :]) % q


def quotient_batches(
    G: WeightedGraph, q: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """
    Yield (maps, alphas, betas) for every map, batch by batch.

    Raises:
        BudgetExceededError: When q^n > budget
    """
    if q < 1:
        raise ValidationError(f"q must be >= 1, got {q}")
    check_enumeration_budget(G.n, q, budget)
    weights = G.normalized_weights
    mass = normalized_pair_mass(G)
    eye = np.eye(q)
    for maps in iter_maps(G.n, q):
        onehot = eye[maps]
        alphas = np.einsum("bnq,n->bq", onehot, weights)
        betas = _symmetrize(np.swapaxes(onehot, 1, 2) @ (mass @ onehot))
        yield maps, alphas, betas


def enumerate_quotients(G: WeightedGraph, q: int, cap: int) -> list[Quotient]:
    """
    The set S_q(G) of all q-quotients of G.

    Args:
        G: Graph
        q: Number of classes
        cap: Largest allowed number of maps q^n

    Returns:
        Distinct quotients sorted by their rounded coordinates

    Raises:
        BudgetExceededError: When q^n > cap; callers fall back to sampling
    """
    found: dict[tuple[float, ...], Quotient] = {}
    for _, alphas, betas in quotient_batches(G, q, cap):
        for alpha, beta in zip(alphas, betas):
            point = Quotient(alpha, beta)
            found.setdefault(point.key(), point)
    logger.debug("Enumerated %d distinct %d-quotients on %d vertices", len(found), q, G.n)
    return [found[key] for key in sorted(found)]


def quotient_distribution(
    G: WeightedGraph, q: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> list[tuple[Quotient, float]]:
    """
    Law of G/phi under a uniformly random map phi.

    Returns:
        (quotient, probability) pairs sorted by quotient coordinates
    """
    counts: dict[tuple[float, ...], list[Any]] = {}
    for _, alphas, betas in quotient_batches(G, q, budget):
        for alpha, beta in zip(alphas, betas):
            point = Quotient(alpha, beta)
            entry = counts.setdefault(point.key(), [point, 0])
            entry[1] += 1
    total = float(q**G.n)
    return [(counts[key][0], counts[key][1] / total) for key in sorted(counts)]


def maxcut(G: WeightedGraph, budget: int = DEFAULT_ENUMERATION_BUDGET) -> float:
    """
    Maximum cut of a simple graph through its 2-quotients.

    MaxCut(G) = |E(G)| * max over S_2(G) of (beta_12 + beta_21).

    Raises:
        ValidationError: If G is not simple
        BudgetExceededError: If 2^n > budget
    """
    if not G.is_simple():
        raise ValidationError("maxcut requires a simple graph (unit weights, 0/1 edges, no loops)")
    edges = G.edge_count()
    if edges == 0:
        return 0.0
    best = 0.0
    for _, _, betas in quotient_batches(G, 2, budget):
        best = max(best, float(np.max(betas[:, 0, 1] + betas[:, 1, 0])))
    # cut sizes are integers
    return float(np.rint(edges * best))
