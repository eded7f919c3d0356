"""
Partition search behind the regularity checks.

Candidate partitions are stored as label arrays of shape (b, n) and scored
in batches: class weights, block averages of G_P and the normalized cell
masses alpha_{V_i} alpha_{V_j} / alpha_G^2. Small graphs are searched
exhaustively over set partitions (restricted growth strings); larger ones
by degree-sorted chunkings, greedy merging, random chunkings and local moves.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Iterable, Iterator

import numpy as np

from ..constants import FEASIBILITY_TOL, LOCAL_SEARCH_MAX_ITERS
from ..graph import WeightedGraph, degrees
from ..graphon.tails import KTable

logger = logging.getLogger(__name__)

SCORE_BATCH = 256

Objective = Callable[[np.ndarray, int], tuple[np.ndarray, list[dict]]]
Admissible = Callable[[np.ndarray], np.ndarray]


def count_set_partitions(n: int, max_classes: int, exact: int | None = None) -> int:
    """Number of set partitions of n items into at most max_classes (or exactly ``exact``) blocks."""
    stirling = [[0] * (n + 1) for _ in range(n + 1)]
    stirling[0][0] = 1
    for i in range(1, n + 1):
        for k in range(1, i + 1):
            stirling[i][k] = k * stirling[i - 1][k] + stirling[i - 1][k - 1]
    if exact is not None:
        return stirling[n][exact] if exact <= n else 0
    return sum(stirling[n][k] for k in range(1, min(n, max_classes) + 1))


def set_partitions(n: int, max_classes: int, exact: int | None = None) -> np.ndarray:
    """
    All set partitions as restricted growth strings.

    Row r gives the block of every item; labels appear in order of first
    use, so each partition occurs exactly once.
    """
    cap = exact if exact is not None else max_classes
    rows = np.zeros((1, 1), dtype=np.int64)
    tops = np.zeros(1, dtype=np.int64)
    for i in range(1, n):
        grown, grown_tops = [], []
        for label in range(min(i, cap - 1) + 1):
            mask = label <= tops + 1
            if not mask.any():
                continue
            grown.append(np.hstack([rows[mask], np.full((int(mask.sum()), 1), label)]))
            grown_tops.append(np.maximum(tops[mask], label))
        rows, tops = np.vstack(grown), np.concatenate(grown_tops)
        if exact is not None:
            reachable = (exact - 1 - tops) <= (n - 1 - i)
            rows, tops = rows[reachable], tops[reachable]
    if exact is not None:
        rows = rows[tops == exact - 1]
    return rows[:, :n]


def chunk_in_order(weights: np.ndarray, order: np.ndarray, parts: int) -> np.ndarray:
    """
    Lay vertices out on [0, alpha_G) in ``order`` and cut into ``parts`` equal intervals.

    A vertex joins the interval containing its left endpoint, so each part
    weighs within alpha_max of alpha_G / parts.
    """
    ordered = weights[order]
    starts = np.cumsum(ordered) - ordered
    total = float(weights.sum())
    chunk = np.floor(starts * parts / total + 1e-9).astype(int)
    labels = np.empty(weights.size, dtype=int)
    labels[order] = np.clip(chunk, 0, parts - 1)
    return labels


class PartitionScorer:
    """Batched block statistics of G_P for candidate partitions."""

    def __init__(self, G: WeightedGraph, scale: float) -> None:
        self.G = G
        self.scale = scale
        self.total = G.total_weight
        self.mass = G.pair_mass

    def blocks(self, labels: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(class weights (b, m), block averages (b, m, m), cell masses (b, m, m))."""
        b, n = labels.shape
        onehot = np.eye(m)[labels]
        weights = np.einsum("bnm,n->bm", onehot, self.G.vertex_weights)
        stacked = np.moveaxis(onehot, 1, 0).reshape(n, b * m)
        sums = np.einsum("bni,nbj->bij", onehot, (self.mass @ stacked).reshape(n, b, m))
        denom = weights[:, :, None] * weights[:, None, :]
        averages = np.divide(sums, denom, out=np.zeros_like(sums), where=denom > 0)
        return weights, averages, denom / self.total**2

    def lp_norms(self, labels: np.ndarray, m: int, p: float) -> np.ndarray:
        _, averages, cells = self.blocks(labels, m)
        absolute = np.abs(averages)
        if math.isinf(p):
            return np.where(cells > 0, absolute, 0.0).max(axis=(1, 2))
        return np.sum(cells * absolute**p, axis=(1, 2)) ** (1.0 / p)

    def tail_excess(
        self, labels: np.ndarray, m: int, K: KTable
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        max over the K grid of (tail mass of G_P / scale above K(eps)) - eps.

        Returns:
            (excess, eps attaining it, tail mass at that eps), each of shape (b,)
        """
        _, averages, cells = self.blocks(labels, m)
        normalized = np.abs(averages) / self.scale
        grid = np.asarray(K.eps_grid)
        tails = np.stack(
            [np.sum(cells * normalized * (normalized >= K(e)), axis=(1, 2)) for e in grid], axis=1
        )
        excess = tails - grid[None, :]
        best = np.argmax(excess, axis=1)
        rows = np.arange(labels.shape[0])
        return excess[rows, best], grid[best], tails[rows, best]


def min_weight_admissible(G: WeightedGraph, eta: float) -> Admissible:
    """Every nonempty class weighs at least eta alpha_G."""
    floor = eta * G.total_weight - FEASIBILITY_TOL

    def check(weights: np.ndarray) -> np.ndarray:
        return np.all((weights == 0) | (weights >= floor), axis=1)

    return check


def equipartition_admissible(G: WeightedGraph, q: int) -> Admissible:
    """Every one of the q classes weighs within alpha_max of alpha_G / q."""
    target = G.total_weight / q
    slack = G.max_weight + FEASIBILITY_TOL

    def check(weights: np.ndarray) -> np.ndarray:
        return np.all(np.abs(weights - target) <= slack, axis=1)

    return check


class SearchState:
    """Best violation seen so far."""

    def __init__(self) -> None:
        self.margin = -math.inf
        self.labels: np.ndarray | None = None
        self.m = 0
        self.details: dict = {}
        self.searched = 0

    def offer(
        self,
        scorer: PartitionScorer,
        labels: np.ndarray,
        m: int,
        objective: Objective,
        admissible: Admissible,
    ) -> None:
        for start in range(0, labels.shape[0], SCORE_BATCH):
            batch = labels[start : start + SCORE_BATCH]
            weights, _, _ = scorer.blocks(batch, m)
            keep = admissible(weights)
            if not keep.any():
                continue
            batch = batch[keep]
            self.searched += batch.shape[0]
            margins, details = objective(batch, m)
            i = int(np.argmax(margins))
            if margins[i] > self.margin:
                self.margin = float(margins[i])
                self.labels = batch[i].copy()
                self.m = m
                self.details = details[i]


def degree_order(G: WeightedGraph) -> np.ndarray:
    return np.argsort(-degrees(G), kind="stable")


def degree_chunkings(G: WeightedGraph, counts: Iterable[int]) -> Iterator[tuple[np.ndarray, int]]:
    order = degree_order(G)
    for m in counts:
        yield chunk_in_order(G.vertex_weights, order, m)[None, :], m


def random_chunkings(
    G: WeightedGraph, m: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    return np.stack([chunk_in_order(G.vertex_weights, rng.permutation(G.n), m) for _ in range(count)])


def greedy_merge(
    G: WeightedGraph, eta: float, p: float, rng: np.random.Generator | None = None
) -> tuple[np.ndarray, int]:
    """
    Merge singletons until every class weighs at least eta alpha_G.

    The lightest class (ties broken by ``rng`` when given) joins the partner
    that maximizes sum_ij (w_i w_j)^(1-p) |S_ij|^p over the block sums S,
    which grows ||G_P||_p. Zero-weight vertices join the first class.
    """
    positive = np.flatnonzero(G.vertex_weights > 0)
    S = G.pair_mass[np.ix_(positive, positive)].copy()
    w = G.vertex_weights[positive].copy()
    members = [[int(v)] for v in positive]
    floor = eta * G.total_weight - FEASIBILITY_TOL

    def contribution(wi: np.ndarray, wj: np.ndarray, sums: np.ndarray) -> np.ndarray:
        return (wi * wj) ** (1.0 - p) * np.abs(sums) ** p

    while w.size > 1 and w.min() < floor:
        lightest = np.flatnonzero(w <= w.min() + FEASIBILITY_TOL)
        l = int(lightest[0] if rng is None else rng.choice(lightest))
        F = contribution(w[:, None], w[None, :], S)
        row_totals = F.sum(axis=1)
        merged = S + S[l][None, :]
        merged_w = w + w[l]
        cross = contribution(merged_w[:, None], w[None, :], merged)
        cross[:, l] = 0.0
        np.fill_diagonal(cross, 0.0)
        diagonal = np.diag(S) + S[l, l] + 2.0 * S[l]
        gain = (
            2.0 * cross.sum(axis=1)
            + contribution(merged_w, merged_w, diagonal)
            - 2.0 * (row_totals[l] + row_totals)
            + F[l, l]
            + 2.0 * F[l]
            + np.diag(F)
        )
        gain[l] = -math.inf
        j = int(np.argmax(gain))
        S[j, :] += S[l, :]
        S[:, j] += S[:, l]
        w[j] += w[l]
        members[j].extend(members[l])
        S = np.delete(np.delete(S, l, axis=0), l, axis=1)
        w = np.delete(w, l)
        del members[l]
    labels = np.zeros(G.n, dtype=int)
    for index, group in enumerate(members):
        labels[group] = index
    return labels, len(members)


def local_moves(
    scorer: PartitionScorer,
    state: SearchState,
    objective: Objective,
    admissible: Admissible,
    rng: np.random.Generator,
    swaps: bool,
    iters: int = LOCAL_SEARCH_MAX_ITERS,
) -> None:
    """First-improvement single-vertex moves (or swaps) from the best partition."""
    if state.labels is None:
        return
    labels, m = state.labels.copy(), state.m
    n = labels.size
    for _ in range(iters):
        candidate = labels.copy()
        x = int(rng.integers(n))
        if swaps:
            y = int(rng.integers(n))
            if candidate[x] == candidate[y]:
                continue
            candidate[x], candidate[y] = candidate[y], candidate[x]
        else:
            candidate[x] = int(rng.integers(m))
        before = state.margin
        state.offer(scorer, candidate[None, :], m, objective, admissible)
        if state.margin > before:
            labels = state.labels.copy()
