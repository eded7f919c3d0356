"""
Weak-regularity partitions, regularized versions and equipartition refinement.

The partitioner refines by cut witnesses of G - G_P, one (S, T) pair per
round, until no witness above eps ||G||_1 is found or the class cap is hit,
then cuts every class into equal-weight parts and pools the class tails,
doubling the part count until the equipartition itself meets the target.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..constants import DEFAULT_CUT_NORM_KMAX, DEFAULT_K_MAX, PARTITIONER_RESTARTS, SUM_TOL
from ..exceptions import ValidationError
from ..graph import (
    VertexPartition,
    WeightedGraph,
    average_over_partition,
    block_sums,
    check_partition,
    degrees,
    graph_norm,
)
from ..graphon.cut_norm import exact_cut_witness, search_cut_witness
from ..graphon.step_graphon import StepGraphon
from ..graphon.tails import KTable
from .search import chunk_in_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeakRegularityResult:
    """
    Equipartition with evidence for d_box(G, G_P) <= eps ||G||_1.

    Attributes:
        partition: Equipartition of the vertices
        lower: Cut value attained by the best witness found for G - G_P
        upper: Certified upper bound on d_box(G, G_P)
        target: eps ||G||_1
        rounds: Refinement rounds used
        converged: True when no witness above target was found for the final partition
    """

    partition: VertexPartition
    lower: float
    upper: float
    target: float
    rounds: int
    converged: bool
    meta: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "partition": self.partition.to_dict(),
            "lower": self.lower,
            "upper": self.upper,
            "target": self.target,
            "rounds": self.rounds,
            "converged": self.converged,
            "meta": dict(self.meta),
        }


def _difference_masses(G: WeightedGraph, P: VertexPartition) -> np.ndarray:
    """Rectangle masses of W^G - W^{G_P} on the vertex steps."""
    averaged = average_over_partition(G, P)
    return (G.pair_mass - averaged.pair_mass) / G.total_weight**2


def _refine(labels: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    keys = labels * 4 + rows.astype(int) * 2 + cols.astype(int)
    _, refined = np.unique(keys, return_inverse=True)
    return refined


def _evidence(
    G: WeightedGraph, P: VertexPartition, restarts: int, seed: int, kmax: int
) -> tuple[float, float]:
    masses = _difference_masses(G, P)
    if G.n <= kmax:
        value = exact_cut_witness(masses, kmax).value
        return value, value
    lower = search_cut_witness(masses, restarts, seed).value
    positive = np.clip(masses, 0.0, None).sum(axis=0)
    negative = np.clip(-masses, 0.0, None).sum(axis=0)
    return lower, float(np.maximum(positive, negative).sum())


def class_aligned_equipartition(
    G: WeightedGraph, labels: np.ndarray, parts: int
) -> tuple[np.ndarray, float]:
    """
    Cut every class into windows of weight alpha_G / parts and pool the tails.

    Vertices are taken class by class in order of decreasing degree. A class
    of weight w gets floor(w parts / alpha_G) full windows; a vertex joins the
    window its left endpoint falls in when it ends inside the last full
    window, so those parts refine the classes. The remaining tails of all
    classes are pooled and cut into the parts left over.

    Returns:
        (labels, pooled weight / alpha_G)
    """
    weights = G.vertex_weights
    width = G.total_weight / parts
    order = np.lexsort((-degrees(G), labels))
    result = np.zeros(G.n, dtype=int)
    pooled: list[int] = []
    used = 0
    for label in np.unique(labels):
        members = order[labels[order] == label]
        ordered = weights[members]
        ends = np.cumsum(ordered)
        full = int(math.floor(ends[-1] / width + 1e-9))
        window = np.floor((ends - ordered) / width + 1e-9).astype(int)
        inside = (ends <= full * width + SUM_TOL) & (window < full)
        result[members[inside]] = used + window[inside]
        pooled.extend(members[~inside].tolist())
        used += full
    pool = np.asarray(pooled, dtype=int)
    if pool.size == 0:
        return result, 0.0
    left = parts - used
    if left > 0:
        result[pool] = used + chunk_in_order(weights[pool], np.arange(pool.size), left)
    else:
        placed = np.ones(G.n, dtype=bool)
        placed[pool] = False
        loads = np.bincount(result[placed], weights=weights[placed], minlength=parts)
        for v in pool:
            lightest = int(np.argmin(loads))
            result[v] = lightest
            loads[lightest] += weights[v]
    return result, float(weights[pool].sum() / G.total_weight)


def degree_sorted_refinement(G: WeightedGraph, P: VertexPartition, q_prime: int) -> VertexPartition:
    """
    Refine P into an equipartition with q' classes.

    Each class of P is cut, in order of decreasing degree, into full parts
    of weight about alpha_G / q'; the tails of all classes form the pooled
    remainder, which fills the parts left over. Full parts weigh within
    alpha_max of alpha_G / q'.

    Raises:
        ValidationError: If q' is smaller than the number of nonempty classes,
            or alpha_max > alpha_G / q'
    """
    check_partition(G, P)
    nonempty = int(np.count_nonzero(P.class_weights(G) > 0))
    if q_prime < max(1, nonempty):
        raise ValidationError(f"q'={q_prime} is smaller than the {nonempty} classes of P")
    if G.max_weight > G.total_weight / q_prime + SUM_TOL:
        raise ValidationError(
            f"alpha_max / alpha_G = {G.max_weight / G.total_weight:.6g} exceeds 1/q' = {1 / q_prime:.6g}"
        )
    labels, _ = class_aligned_equipartition(G, P.as_array(), q_prime)
    return VertexPartition(tuple(labels.tolist()), q_prime)


def weak_regularity_partition(
    G: WeightedGraph,
    eps: float,
    k_target: int = 1,
    k_max: int = DEFAULT_K_MAX,
    restarts: int = PARTITIONER_RESTARTS,
    seed: int = 0,
    kmax: int = DEFAULT_CUT_NORM_KMAX,
) -> WeakRegularityResult:
    """
    Equipartition P with d_box(G, G_P) <= eps ||G||_1 as far as the search can tell.

    Each round searches a cut witness (S, T) of G - G_P with ``restarts``
    alternating-maximization starts; above eps ||G||_1 the classes are split
    by membership in S and T. Rounds stop at 1/eps^2, or when the class
    count would pass k_max. The classes are then cut into a class-aligned
    equipartition, starting from max(k_target, classes) parts and doubling
    (up to alpha_G / alpha_max) until the witness on the final partition is
    at most eps ||G||_1 and the pooled tails weigh at most eps / 2.

    Args:
        G: Graph
        eps: Target accuracy in (0, 1)
        k_target: Minimum number of parts
        k_max: Class cap during refinement
        restarts: Witness search starts per round
        seed: Root seed; round r uses seed + r
        kmax: Largest n for which the final evidence is exact

    Returns:
        WeakRegularityResult; converged reflects the final partition
    """
    if not 0 < eps < 1:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    if k_target < 1:
        raise ValidationError(f"k_target must be >= 1, got {k_target}")
    norm = graph_norm(G, 1)
    target = eps * norm
    labels = np.zeros(G.n, dtype=int)
    cap = math.ceil(1.0 / eps**2)
    rounds, converged = 0, norm == 0
    while not converged and rounds < cap:
        classes = int(labels.max()) + 1
        masses = _difference_masses(G, VertexPartition(tuple(labels.tolist()), classes))
        witness = search_cut_witness(masses, restarts, seed + rounds)
        if witness.value <= target:
            converged = True
            break
        refined = _refine(labels, witness.rows, witness.cols)
        if int(refined.max()) + 1 > k_max:
            logger.warning("Class cap %d reached after %d rounds", k_max, rounds)
            break
        labels = refined
        rounds += 1
        logger.debug("Round %d: witness %.6g, %d classes", rounds, witness.value, int(labels.max()) + 1)
    if not converged and rounds >= cap:
        logger.warning("Round cap %d reached without meeting eps=%g", cap, eps)

    ceiling = max(1, math.floor(G.total_weight / G.max_weight + 1e-9))
    parts = min(max(k_target, int(labels.max()) + 1), ceiling)
    while True:
        chunks, pooled = class_aligned_equipartition(G, labels, parts)
        final = VertexPartition(tuple(chunks.tolist()), parts)
        lower, upper = _evidence(G, final, restarts, seed, kmax)
        if (lower <= target and pooled <= eps / 2) or parts >= ceiling:
            break
        logger.debug("Equipartition into %d parts: witness %.6g, pooled %.3g", parts, lower, pooled)
        parts = min(2 * parts, ceiling)
    converged = lower <= target
    if not converged:
        logger.warning("Final equipartition has a witness %.6g above %.6g", lower, target)
    return WeakRegularityResult(
        final,
        lower,
        upper,
        target,
        rounds,
        converged,
        {
            "eps": eps,
            "k_target": k_target,
            "k_max": k_max,
            "seed": seed,
            "refined_classes": int(labels.max()) + 1,
            "k_alpha_max": parts * G.max_weight / G.total_weight,
            "pooled_weight": pooled,
        },
    )


def regularize(
    G: WeightedGraph,
    eps: float,
    k: int = 1,
    k_max: int = DEFAULT_K_MAX,
    restarts: int = PARTITIONER_RESTARTS,
    seed: int = 0,
) -> StepGraphon:
    """
    Regularized version (1/||G||_1) G_P as a step graphon with one step per class.

    The zero graphon on the class steps is returned for edgeless graphs.
    """
    result = weak_regularity_partition(G, eps, k, k_max, restarts, seed)
    P = result.partition
    weights = P.class_weights(G)
    keep = weights > 0
    lengths = weights[keep] / G.total_weight
    norm = graph_norm(G, 1)
    if norm == 0:
        return StepGraphon.zero(lengths)
    sums = block_sums(G, P)[np.ix_(keep, keep)]
    averages = sums / np.outer(weights[keep], weights[keep])
    return StepGraphon(lengths, averages / norm)


def k_from_equipartition_table(Kp: KTable) -> KTable:
    """
    K(eps) = max(4 K'(eps/4) / eps, 16 / eps^2), tabulated at 4 eps' for every eps' of K'.
    """
    entries = []
    for inner in Kp.eps_grid:
        eps = 4.0 * inner
        entries.append((eps, max(4.0 * Kp(inner) / eps, 16.0 / eps**2)))
    return KTable(tuple(entries))
