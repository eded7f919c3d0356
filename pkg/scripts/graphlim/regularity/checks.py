"""
Upper-regularity checks.

Each check searches the admissible partitions for one whose block average
G_P breaks the bound. A found violation is a certificate; a clean
exhaustive search certifies a pass, a clean heuristic search only reports
that no violation was found.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..constants import (
    DEFAULT_SEARCH_BUDGET,
    EXHAUSTIVE_MAX_VERTICES,
    EXHAUSTIVE_PARTITION_BUDGET,
    KIND_EQUIPARTITION,
    KIND_LP,
    KIND_UNIFORM,
    SUM_TOL,
    VERDICT_FAIL,
    VERDICT_NO_VIOLATION,
    VERDICT_PASS,
)
from ..exceptions import ValidationError
from ..graph import WeightedGraph, graph_norm
from ..graphon.step_graphon import StepGraphon
from ..graphon.tails import KTable
from ..utils.rng import spawn_generators
from .report import RegularityReport
from .search import (
    Admissible,
    Objective,
    PartitionScorer,
    SearchState,
    count_set_partitions,
    degree_chunkings,
    equipartition_admissible,
    greedy_merge,
    local_moves,
    min_weight_admissible,
    random_chunkings,
    set_partitions,
)

logger = logging.getLogger(__name__)

GREEDY_RESTARTS = 4
MAX_CHUNK_COUNTS = 16


def _lp_objective(scorer: PartitionScorer, p: float, bound: float) -> Objective:
    def objective(labels: np.ndarray, m: int) -> tuple[np.ndarray, list[dict]]:
        norms = scorer.lp_norms(labels, m, p)
        details = [{"norm": float(v), "bound": bound} for v in norms]
        return norms - bound, details

    return objective


def _tail_objective(scorer: PartitionScorer, K: KTable) -> Objective:
    def objective(labels: np.ndarray, m: int) -> tuple[np.ndarray, list[dict]]:
        excess, eps, tails = scorer.tail_excess(labels, m, K)
        details = [
            {"eps": float(e), "threshold": K(float(e)), "tail": float(t)} for e, t in zip(eps, tails)
        ]
        return excess, details

    return objective


def _class_counts(max_classes: int) -> list[int]:
    if max_classes <= MAX_CHUNK_COUNTS:
        return list(range(1, max_classes + 1))
    return sorted(set(np.linspace(1, max_classes, MAX_CHUNK_COUNTS).astype(int).tolist()))


def _compact(labels: np.ndarray) -> tuple[list[int], int]:
    _, relabeled = np.unique(labels, return_inverse=True)
    return relabeled.tolist(), int(relabeled.max()) + 1


def _search(
    G: WeightedGraph,
    scorer: PartitionScorer,
    objective: Objective,
    admissible: Admissible,
    max_classes: int,
    exact: int | None,
    search_budget: int,
    seed: int,
    greedy: tuple[float, float] | None,
) -> tuple[SearchState, str]:
    """Run exhaustive search when small enough, the heuristics otherwise."""
    state = SearchState()
    if G.n <= EXHAUSTIVE_MAX_VERTICES and count_set_partitions(G.n, max_classes, exact) <= EXHAUSTIVE_PARTITION_BUDGET:
        labels = set_partitions(G.n, max_classes, exact)
        state.offer(scorer, labels, exact or min(max_classes, G.n), objective, admissible)
        return state, "exhaustive"

    counts = [exact] if exact is not None else _class_counts(max_classes)
    for labels, m in degree_chunkings(G, counts):
        state.offer(scorer, labels, m, objective, admissible)
    streams = spawn_generators(seed, GREEDY_RESTARTS + 2)
    if greedy is not None:
        eta, p = greedy
        for r in range(GREEDY_RESTARTS):
            labels, m = greedy_merge(G, eta, p, None if r == 0 else streams[r])
            state.offer(scorer, labels[None, :], m, objective, admissible)
    rng = streams[GREEDY_RESTARTS]
    per_count = max(1, search_budget // len(counts))
    for m in counts:
        state.offer(scorer, random_chunkings(G, m, per_count, rng), m, objective, admissible)
    local_moves(scorer, state, objective, admissible, streams[-1], swaps=exact is not None)
    logger.debug("Heuristic search evaluated %d partitions, best margin %.6g", state.searched, state.margin)
    return state, "heuristic"


def _report(
    kind: str,
    params: dict,
    state: SearchState,
    mode: str,
    seed: int,
    budget: int,
    **extra: str,
) -> RegularityReport:
    meta = {"mode": mode, "seed": seed, "search_budget": budget, **extra}
    if state.labels is not None and state.margin > SUM_TOL:
        assignment, q = _compact(state.labels)
        witness = {"assignment": assignment, "q": q, **state.details}
        return RegularityReport(kind, params, VERDICT_FAIL, witness, state.searched, meta)
    verdict = VERDICT_PASS if mode == "exhaustive" else VERDICT_NO_VIOLATION
    return RegularityReport(kind, params, verdict, None, state.searched, meta)


def _dominant_vertex(G: WeightedGraph, eta: float) -> dict | None:
    if G.max_weight <= eta * G.total_weight + SUM_TOL:
        return None
    v = int(np.argmax(G.vertex_weights))
    return {"reason": "vertex_weight", "vertex": v, "weight_fraction": G.max_weight / G.total_weight}


def _check_eta(eta: float) -> int:
    if not 0 < eta <= 1:
        raise ValidationError(f"eta must lie in (0, 1], got {eta}")
    return max(1, math.floor(1.0 / eta + 1e-9))


def upper_lp_regular_check(
    G: WeightedGraph,
    C: float,
    eta: float,
    p: float = 2.0,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> RegularityReport:
    """
    (C, eta)-upper L^p regularity: alpha_max <= eta alpha_G and
    ||G_P||_p <= C ||G||_1 for every partition with classes of weight >= eta alpha_G.

    Args:
        G: Graph
        C: Norm bound
        eta: Minimum class weight fraction
        p: Exponent, > 1 (inf allowed)
        search_budget: Random partitions tried beyond exhaustive range
        seed: Root seed for the heuristics

    Returns:
        RegularityReport of kind Lp
    """
    if not p > 1:
        raise ValidationError(f"p must be > 1, got {p}")
    max_classes = _check_eta(eta)
    params = {"C": C, "eta": eta, "p": p}
    dominant = _dominant_vertex(G, eta)
    if dominant is not None:
        return RegularityReport(KIND_LP, params, VERDICT_FAIL, dominant, 0, {"mode": "precondition"})
    norm = graph_norm(G, 1)
    if norm == 0:
        return RegularityReport(KIND_LP, params, VERDICT_PASS, None, 0, {"mode": "edgeless"})
    scorer = PartitionScorer(G, norm)
    proxy = p if math.isfinite(p) else 2.0
    state, mode = _search(
        G,
        scorer,
        _lp_objective(scorer, p, C * norm),
        min_weight_admissible(G, eta),
        max_classes,
        None,
        search_budget,
        seed,
        (eta, proxy),
    )
    return _report(KIND_LP, params, state, mode, seed, search_budget)


def uniform_upper_regular_check(
    G: WeightedGraph,
    K: KTable,
    eta: float,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> RegularityReport:
    """
    (K, eta)-upper regularity: alpha_max <= eta alpha_G and, for every
    tabulated eps and every partition with classes of weight >= eta alpha_G,
    the tail mass of G_P / ||G||_1 above K(eps) is at most eps.
    """
    max_classes = _check_eta(eta)
    params = {"K": K.to_dict(), "eta": eta}
    dominant = _dominant_vertex(G, eta)
    if dominant is not None:
        return RegularityReport(KIND_UNIFORM, params, VERDICT_FAIL, dominant, 0, {"mode": "precondition"})
    norm = graph_norm(G, 1)
    if norm == 0:
        return RegularityReport(KIND_UNIFORM, params, VERDICT_PASS, None, 0, {"mode": "edgeless"})
    scorer = PartitionScorer(G, norm)
    state, mode = _search(
        G,
        scorer,
        _tail_objective(scorer, K),
        min_weight_admissible(G, eta),
        max_classes,
        None,
        search_budget,
        seed,
        (eta, 2.0),
    )
    return _report(KIND_UNIFORM, params, state, mode, seed, search_budget)


def equipartition_upper_regular_check(
    G: WeightedGraph,
    Kp: KTable,
    q: int,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> RegularityReport:
    """
    (K', q)-equipartition upper regularity: tails of G_P / ||G||_1 bounded by
    K'(eps) for every equipartition P into q classes.

    Raises:
        ValidationError: If alpha_max > alpha_G / (2q)
    """
    if q < 1:
        raise ValidationError(f"q must be >= 1, got {q}")
    if G.max_weight > G.total_weight / (2 * q) + SUM_TOL:
        raise ValidationError(
            f"alpha_max / alpha_G = {G.max_weight / G.total_weight:.6g} exceeds 1/(2q) = {1 / (2 * q):.6g}"
        )
    params = {"K": Kp.to_dict(), "q": q}
    norm = graph_norm(G, 1)
    if norm == 0:
        return RegularityReport(KIND_EQUIPARTITION, params, VERDICT_PASS, None, 0, {"mode": "edgeless"})
    scorer = PartitionScorer(G, norm)
    state, mode = _search(
        G,
        scorer,
        _tail_objective(scorer, Kp),
        equipartition_admissible(G, q),
        q,
        q,
        search_budget,
        seed,
        None,
    )
    return _report(KIND_EQUIPARTITION, params, state, mode, seed, search_budget)


def upper_regular_graphon_check(
    W: StepGraphon,
    K: KTable,
    eta: float,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> RegularityReport:
    """
    (K, eta)-upper regularity of a step graphon over partitions of [0, 1]
    into unions of steps with measure >= eta each.

    Partitions that cut through a step are not searched, so a pass is
    certified for step-union partitions only (recorded in meta).
    """
    max_classes = _check_eta(eta)
    params = {"K": K.to_dict(), "eta": eta, "graphon": True}
    as_graph = WeightedGraph(W.step_lengths, W.values)
    scorer = PartitionScorer(as_graph, 1.0)
    state, mode = _search(
        as_graph,
        scorer,
        _tail_objective(scorer, K),
        min_weight_admissible(as_graph, eta),
        max_classes,
        None,
        search_budget,
        seed,
        (eta, 2.0),
    )
    return _report(KIND_UNIFORM, params, state, mode, seed, search_budget, partitions="step_unions")
