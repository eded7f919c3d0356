"""
Seeded random graph families.

Pairs are drawn row block by row block, each block from its own Philox
stream spawned from the seed, so a graph depends only on (family,
parameters, seed).
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from ..constants import SAMPLE_ROW_BLOCK, SCHEMA_SUM_TOL
from ..exceptions import ValidationError
from ..graph import WeightedGraph
from ..graphon.step_graphon import StepGraphon
from ..utils.rng import make_generator, spawn_generators

logger = logging.getLogger(__name__)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")


def sample_edges(probabilities: np.ndarray, seed: int | np.random.SeedSequence) -> WeightedGraph:
    """
    Simple graph with each pair u < v joined independently with probability p_uv.

    Row block b of the adjacency matrix is drawn from stream b.
    """
    n = probabilities.shape[0]
    blocks = max(1, math.ceil(n / SAMPLE_ROW_BLOCK))
    hits = np.zeros((n, n), dtype=bool)
    for b, rng in enumerate(spawn_generators(seed, blocks)):
        rows = slice(b * SAMPLE_ROW_BLOCK, min(n, (b + 1) * SAMPLE_ROW_BLOCK))
        draws = rng.random((rows.stop - rows.start, n))
        hits[rows] = draws < probabilities[rows]
    upper = np.triu(hits, 1)
    adjacency = (upper | upper.T).astype(float)
    logger.debug("Sampled %d edges on %d vertices", int(upper.sum()), n)
    return WeightedGraph(np.ones(n), adjacency)


def erdos_renyi(n: int, p: float, seed: int = 0) -> WeightedGraph:
    """G(n, p): every pair of distinct vertices joined with probability p."""
    _check_n(n)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    return sample_edges(np.full((n, n), float(p)), seed)


def block_labels(n: int, k: int) -> np.ndarray:
    """Consecutive blocks whose sizes differ by at most 1; the first n mod k get the extra vertex."""
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    return np.repeat(np.arange(k), sizes)


def sbm(n: int, B: Sequence[Sequence[float]], rho_n: float, seed: int = 0) -> WeightedGraph:
    """
    Sparse stochastic block model with p_uv = rho_n b_ij.

    Raises:
        ValidationError: Unless B is symmetric, nonnegative with mean entry 1,
            and rho_n max b_ij <= 1
    """
    _check_n(n)
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] == 0:
        raise ValidationError("B must be a nonempty square matrix")
    if not np.array_equal(B, B.T) or np.any(B < 0):
        raise ValidationError("B must be symmetric and nonnegative")
    if abs(B.mean() - 1.0) > SCHEMA_SUM_TOL:
        raise ValidationError(f"B must have mean entry 1, got {B.mean():.12g}")
    if rho_n < 0 or rho_n * B.max() > 1.0 + SCHEMA_SUM_TOL:
        raise ValidationError(f"rho_n={rho_n} must lie in [0, 1/max b_ij]")
    labels = block_labels(n, B.shape[0])
    return sample_edges(np.minimum(1.0, rho_n * B[np.ix_(labels, labels)]), seed)


def power_law_probabilities(n: int, alpha: float, beta: float) -> np.ndarray:
    """p_ij = min(1, n^beta (i j)^(-alpha)) with vertices numbered from 1."""
    index = np.arange(1, n + 1, dtype=float)
    return np.minimum(1.0, n**beta * np.outer(index, index) ** (-alpha))


def power_law(n: int, alpha: float, beta: float, seed: int = 0) -> WeightedGraph:
    """
    Inhomogeneous graph with power-law degrees.

    Raises:
        ValidationError: Unless 0 < alpha < 1 and 0 <= beta < 2 alpha
    """
    _check_n(n)
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 <= beta < 2.0 * alpha:
        raise ValidationError(f"beta must lie in [0, 2 alpha), got {beta}")
    return sample_edges(power_law_probabilities(n, alpha, beta), seed)


def w_random(W: StepGraphon, n: int, rho_n: float, seed: int = 0) -> WeightedGraph:
    """
    W-random graph: uniform positions x_i, pairs joined with probability min(1, rho_n W(x_i, x_j)).

    Raises:
        ValidationError: If W is negative somewhere, int W != 1 or rho_n is outside (0, 1]
    """
    _check_n(n)
    if np.any(W.values < 0):
        raise ValidationError("W-random graphs need W >= 0")
    if abs(W.integral() - 1.0) > SCHEMA_SUM_TOL:
        raise ValidationError(f"W must integrate to 1, got {W.integral():.12g}")
    if not 0.0 < rho_n <= 1.0:
        raise ValidationError(f"rho_n must lie in (0, 1], got {rho_n}")
    position_seed, pair_seed = np.random.SeedSequence(seed).spawn(2)
    steps = W.step_index(make_generator(position_seed).random(n))
    probabilities = np.minimum(1.0, rho_n * W.values[np.ix_(steps, steps)])
    return sample_edges(probabilities, pair_seed)
