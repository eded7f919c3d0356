"""
Probabilities of quotient balls under a uniformly random coloring.

P_{q,G}[d_1(target, G/phi) <= eps] for phi uniform over the q^n maps, by
full enumeration, by summing multinomial counts over class-count tables
(graphs that are block-constant on a known partition), or by Monte Carlo.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb, gammaln, logsumexp

from ..constants import (
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_SAMPLES,
    FEASIBILITY_TOL,
    LD_METHODS,
    MC_BATCH,
    METHOD_EXACT_ENUMERATION,
    METHOD_EXACT_MULTINOMIAL,
    METHOD_MONTE_CARLO,
    WILSON_Z,
)
from ..exceptions import BudgetExceededError, ValidationError
from ..graph import Quotient, VertexPartition, WeightedGraph, check_partition, graph_norm
from ..graph import normalized_pair_mass, quotient_batches
from ..utils.rng import spawn_generators
from .estimate import RateEstimate, rate_from_probability

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockStructure:
    """
    A graph that is constant on the blocks of a vertex partition.

    Attributes:
        sizes: Number of vertices per class
        weights: Common vertex weight per class
        between: B[mu, nu], edge weight between distinct vertices of classes mu, nu
        loops: D[mu], self-loop weight in class mu
    """

    sizes: np.ndarray
    weights: np.ndarray
    between: np.ndarray
    loops: np.ndarray


def block_structure(G: WeightedGraph, classes: VertexPartition) -> BlockStructure:
    """
    Read off the block constants of G.

    Raises:
        ValidationError: If G is not block-constant on ``classes``
    """
    check_partition(G, classes)
    members = [np.asarray(c, dtype=int) for c in classes.classes() if len(c)]
    m = len(members)
    sizes = np.array([c.size for c in members])
    weights = np.zeros(m)
    between = np.zeros((m, m))
    loops = np.zeros(m)
    beta = G.edge_weights
    for mu, rows in enumerate(members):
        w = G.vertex_weights[rows]
        if np.any(w != w[0]):
            raise ValidationError(f"Vertex weights are not constant on class {mu}")
        weights[mu] = w[0]
        diagonal = beta[rows, rows]
        if np.any(diagonal != diagonal[0]):
            raise ValidationError(f"Self-loop weights are not constant on class {mu}")
        loops[mu] = diagonal[0]
        for nu, cols in enumerate(members):
            block = beta[np.ix_(rows, cols)]
            off = block[~np.eye(rows.size, cols.size, dtype=bool)] if mu == nu else block.ravel()
            if off.size == 0:
                between[mu, nu] = loops[mu]
                continue
            if np.any(off != off[0]):
                raise ValidationError(f"Edge weights are not constant on block ({mu}, {nu})")
            between[mu, nu] = off[0]
    return BlockStructure(sizes, weights, between, loops)


def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    rows = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        edges = (-1,) + bars + (total + parts - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(parts)])
    return np.asarray(rows, dtype=np.int64).reshape(-1, parts)


def _distance_mask(
    alphas: np.ndarray, betas: np.ndarray, target: Quotient, eps: float
) -> np.ndarray:
    distances = np.abs(alphas - target.alpha).sum(axis=1) + np.abs(betas - target.beta).sum(axis=(1, 2))
    return distances <= eps + FEASIBILITY_TOL


def _exact_enumeration(
    G: WeightedGraph, q: int, target: Quotient, eps: float, budget: int
) -> tuple[float, float]:
    hits = 0
    for _, alphas, betas in quotient_batches(G, q, budget):
        hits += int(_distance_mask(alphas, betas, target, eps).sum())
    if hits == 0:
        return 0.0, -math.inf
    log_p = math.log(hits) - G.n * math.log(q)
    return math.exp(log_p), log_p


def _exact_multinomial(
    G: WeightedGraph,
    q: int,
    target: Quotient,
    eps: float,
    classes: VertexPartition,
    budget: int,
) -> tuple[float, float, int]:
    """
    Sum N(k) = prod_mu n_mu! / prod_i k_{i,mu}! over count tables k in the ball.

    Tables are built class by class; partial tables whose class weights
    already overshoot the target by more than eps are dropped.
    """
    blocks = block_structure(G, classes)
    scale = blocks.weights / G.total_weight
    counts = np.zeros((1, q, 0), dtype=np.int64)
    log_counts = np.zeros(1)
    alphas = np.zeros((1, q))
    for mu, size in enumerate(blocks.sizes):
        options = int(comb(size + q - 1, q - 1, exact=True))
        if counts.shape[0] * options > budget:
            raise BudgetExceededError(
                f"Count-table frontier of {counts.shape[0] * options} exceeds budget {budget}",
                required=counts.shape[0] * options,
                budget=budget,
            )
        parts = compositions(int(size), q)
        log_ways = gammaln(size + 1) - gammaln(parts + 1).sum(axis=1)
        alphas = (alphas[:, None, :] + scale[mu] * parts[None, :, :]).reshape(-1, q)
        log_counts = (log_counts[:, None] + log_ways[None, :]).reshape(-1)
        counts = np.concatenate(
            [
                np.repeat(counts, parts.shape[0], axis=0),
                np.tile(parts, (counts.shape[0], 1))[:, :, None],
            ],
            axis=2,
        )
        keep = np.maximum(alphas - target.alpha, 0.0).sum(axis=1) <= eps + FEASIBILITY_TOL
        counts, log_counts, alphas = counts[keep], log_counts[keep], alphas[keep]
        logger.debug("Class %d: %d partial count tables", mu, counts.shape[0])

    norm = graph_norm(G, 1)
    if norm == 0:
        betas = np.zeros((counts.shape[0], q, q))
    else:
        weighted = counts * blocks.weights[None, None, :]
        raw = weighted @ blocks.between @ np.swapaxes(weighted, 1, 2)
        loops_excess = (counts * (blocks.weights**2 * (np.diag(blocks.between) - blocks.loops))).sum(axis=2)
        raw = raw - np.einsum("bi,ij->bij", loops_excess, np.eye(q))
        betas = raw / (G.total_weight**2 * norm)
    mask = _distance_mask(alphas, betas, target, eps)
    if not mask.any():
        return 0.0, -math.inf, int(counts.shape[0])
    log_p = float(logsumexp(log_counts[mask])) - G.n * math.log(q)
    return math.exp(log_p), log_p, int(counts.shape[0])


def wilson_interval(hits: int, samples: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    p = hits / samples
    denominator = 1.0 + z * z / samples
    center = (p + z * z / (2 * samples)) / denominator
    half = z * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


def _monte_carlo(
    G: WeightedGraph, q: int, target: Quotient, eps: float, samples: int, seed: int
) -> tuple[int, int]:
    weights = G.normalized_weights
    mass = normalized_pair_mass(G)
    eye = np.eye(q)
    batches = math.ceil(samples / MC_BATCH)
    hits = 0
    for b, rng in enumerate(spawn_generators(seed, batches)):
        size = min(MC_BATCH, samples - b * MC_BATCH)
        onehot = eye[rng.integers(q, size=(size, G.n))]
        alphas = np.einsum("bnq,n->bq", onehot, weights)
        # one product for the whole batch: (n, n) @ (n, size * q)
        stacked = np.moveaxis(onehot, 1, 0).reshape(G.n, size * q)
        weighted = (mass @ stacked).reshape(G.n, size, q)
        betas = np.einsum("bni,nbj->bij", onehot, weighted)
        betas = (betas + np.swapaxes(betas, 1, 2)) / 2.0
        hits += int(_distance_mask(alphas, betas, target, eps).sum())
    return hits, samples


def quotient_ball_probability(
    G: WeightedGraph,
    q: int,
    target: Quotient,
    eps: float,
    method: str | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    classes: VertexPartition | None = None,
) -> RateEstimate:
    """
    Probability that a uniform random q-coloring lands within eps of target.

    Without an explicit method, full enumeration is used when q^n fits the
    budget, the multinomial sum when ``classes`` is given, Monte Carlo
    otherwise.

    Args:
        G: Graph
        q: Number of colors
        target: Center of the d_1 ball
        eps: Ball radius (> 0)
        method: exact_enumeration, exact_multinomial or monte_carlo
        budget: Enumeration budget (maps or count tables)
        samples: Monte Carlo draws
        seed: Root seed for Monte Carlo streams
        classes: Partition on whose blocks G is constant (exact_multinomial)

    Returns:
        RateEstimate carrying both the probability and the rate -log P / n

    Raises:
        ValidationError: On eps <= 0, q mismatch or an unknown method
        BudgetExceededError: If an exact method exceeds the budget
    """
    if eps <= 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    if target.q != q:
        raise ValidationError(f"Target is a {target.q}-quotient, expected q={q}")
    if method is None:
        if q**G.n <= budget:
            method = METHOD_EXACT_ENUMERATION
        elif classes is not None:
            method = METHOD_EXACT_MULTINOMIAL
        else:
            method = METHOD_MONTE_CARLO
    if method not in LD_METHODS:
        raise ValidationError(f"Unknown method {method!r}; expected one of {list(LD_METHODS)}")

    if method == METHOD_EXACT_ENUMERATION:
        probability, log_p = _exact_enumeration(G, q, target, eps, budget)
        return RateEstimate(
            -log_p / G.n if probability > 0 else math.inf,
            G.n,
            eps,
            method,
            probability=probability,
            meta={"log_probability": log_p},
        )
    if method == METHOD_EXACT_MULTINOMIAL:
        if classes is None:
            raise ValidationError("exact_multinomial needs the block partition (classes)")
        probability, log_p, tables = _exact_multinomial(G, q, target, eps, classes, budget)
        return RateEstimate(
            -log_p / G.n if math.isfinite(log_p) else math.inf,
            G.n,
            eps,
            method,
            probability=probability,
            meta={"log_probability": log_p, "count_tables": tables},
        )

    if samples <= 0:
        raise ValidationError("monte_carlo needs samples > 0")
    hits, total = _monte_carlo(G, q, target, eps, samples, seed)
    low, high = wilson_interval(hits, total)
    probability = hits / total
    meta = {"hits": hits, "samples": total, "seed": seed, "wilson": [low, high]}
    if hits == 0:
        meta["rate_lower_bound"] = rate_from_probability(high, G.n)
        logger.info("No hits in %d samples; reporting rate lower bound only", total)
    return RateEstimate(
        rate_from_probability(probability, G.n),
        G.n,
        eps,
        method,
        stderr=(high - low) / (2 * WILSON_Z),
        probability=probability,
        meta=meta,
    )
