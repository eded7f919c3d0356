"""
Rate functions: finite-size sequences, the graphon rate I_q and the clique closed form.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from scipy.special import entr, softmax

from ..constants import (
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_RESTARTS,
    DEFAULT_SAMPLES,
    FEASIBILITY_TOL,
    GRID_CHECK_POINTS,
    MEAN_FIELD_DAMPING,
    MEAN_FIELD_ITERS,
    METHOD_GRID,
    METHOD_MEAN_FIELD,
    PENALTY_SCHEDULE,
)
from ..exceptions import ValidationError
from ..graph import Quotient, VertexPartition, WeightedGraph
from ..graphon.step_graphon import StepGraphon
from ..quotients.space import (
    finest_grid_parts,
    fractional_quotient_batch,
    grid_partitions,
    grid_size,
    net_radius,
)
from ..utils.rng import spawn_generators
from .ball import quotient_ball_probability
from .estimate import RateEstimate

logger = logging.getLogger(__name__)


def empirical_rate(
    Gs: Sequence[WeightedGraph],
    q: int,
    target: Quotient,
    eps: float,
    method: str | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    classes: Sequence[VertexPartition | None] | None = None,
) -> list[RateEstimate]:
    """
    -log P_{q,G}[d_1(target, G/phi) <= eps] / n for each graph of a sequence.

    The values are finite-size diagnostics for inspecting convergence; no
    limit is taken. ``classes`` supplies one block partition per graph for
    the multinomial method.
    """
    if classes is not None and len(classes) != len(Gs):
        raise ValidationError("Need one block partition per graph")
    estimates = []
    for index, G in enumerate(Gs):
        blocks = classes[index] if classes is not None else None
        estimate = quotient_ball_probability(
            G, q, target, eps, method, budget, samples, seed + index, blocks
        )
        logger.info("n=%d: rate %.12g (%s)", G.n, estimate.value, estimate.method)
        estimates.append(estimate)
    return estimates


def clique_rate(alpha: Sequence[float]) -> float:
    """log q + sum_i alpha_i log alpha_i, the rate of the clique-plus-isolated family."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0) or abs(alpha.sum() - 1.0) > 1e-9:
        raise ValidationError("alpha must lie in the simplex")
    return math.log(alpha.size) - float(entr(alpha).sum())


def _step_entropy(lengths: np.ndarray, rhos: np.ndarray) -> np.ndarray:
    return np.einsum("bkq,k->b", entr(rhos), lengths)


def _distances(W: StepGraphon, rhos: np.ndarray, target: Quotient) -> np.ndarray:
    alphas, betas = fractional_quotient_batch(W, rhos)
    return np.abs(alphas - target.alpha).sum(axis=1) + np.abs(betas - target.beta).sum(axis=(1, 2))


class _Candidates:
    """Best entropy among fractional partitions within tol of the target."""

    def __init__(self, W: StepGraphon, target: Quotient, tol: float) -> None:
        self.W = W
        self.target = target
        self.tol = tol
        self.best = -math.inf
        self.source = ""
        self.evaluated = 0
        self.feasible = 0

    def offer(self, rhos: np.ndarray, source: str) -> None:
        distances = _distances(self.W, rhos, self.target)
        mask = distances <= self.tol + FEASIBILITY_TOL
        self.evaluated += rhos.shape[0]
        if not mask.any():
            return
        self.feasible += int(mask.sum())
        best = float(_step_entropy(self.W.step_lengths, rhos[mask]).max())
        if best > self.best:
            self.best, self.source = best, source


def _penalty_mean_field(
    W: StepGraphon, target: Quotient, rho: np.ndarray, penalty: float, iters: int
) -> np.ndarray:
    """
    Damped fixed point of rho_mu ~ exp(-penalty * dD/drho_mu / len_mu),
    where D is the d_1 distance to the target.
    """
    scaled = W.values * W.step_lengths[None, :]
    for _ in range(iters):
        alpha, beta = fractional_quotient_batch(W, rho[None])
        alpha_sign = np.sign(alpha[0] - target.alpha)
        beta_sign = np.sign(beta[0] - target.beta)
        field = alpha_sign[None, :] + 2.0 * scaled @ rho @ beta_sign
        proposal = softmax(-penalty * field, axis=1)
        step = MEAN_FIELD_DAMPING * (proposal - rho)
        rho = rho + step
        if np.max(np.abs(step)) < 1e-12:
            break
    return rho


def graphon_rate(
    W: StepGraphon,
    q: int,
    target: Quotient,
    mesh: float | None = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float | None = None,
    iters: int = MEAN_FIELD_ITERS,
) -> RateEstimate:
    """
    I_q(target, W) = inf {log q - Ent(rho) : d_1(W/rho, target) <= tol}.

    Candidates are the uniform partition, constant rows equal to the target
    class weights, the simplex grid of the given mesh when it is small, and
    penalty mean-field iterates from several starts. tol defaults to the
    covering radius of that grid. The result is +inf when no candidate lies
    within tol, which certifies nothing beyond the searched net.

    Args:
        W: Step graphon
        q: Number of colors
        target: Target quotient
        mesh: Grid spacing (defaults to the finest grid within GRID_CHECK_POINTS)
        restarts: Mean-field starts per penalty level
        seed: Root seed for random starts
        tol: Constraint tolerance on d_1
        iters: Mean-field iterations per start

    Returns:
        RateEstimate with value in [0, log q] or +inf
    """
    if target.q != q:
        raise ValidationError(f"Target is a {target.q}-quotient, expected q={q}")
    if mesh is None:
        parts = finest_grid_parts(W.k, q, GRID_CHECK_POINTS)
    else:
        parts = max(1, math.ceil(1.0 / mesh - 1e-9))
    radius = net_radius(W, q, 1.0 / parts)
    tol = radius if tol is None else tol

    candidates = _Candidates(W, target, tol)
    candidates.offer(np.full((1, W.k, q), 1.0 / q), "uniform")
    candidates.offer(np.tile(target.alpha, (1, W.k, 1)), "constant_rows")
    if grid_size(W.k, q, parts) <= GRID_CHECK_POINTS:
        for rhos in grid_partitions(W.k, q, parts):
            candidates.offer(rhos, METHOD_GRID)
    if candidates.best < math.log(q) - 1e-15:
        for penalty in PENALTY_SCHEDULE:
            for r, rng in enumerate(spawn_generators(seed, max(1, restarts))):
                start = (
                    np.full((W.k, q), 1.0 / q)
                    if r == 0
                    else rng.dirichlet(np.ones(q), size=W.k)
                )
                rho = _penalty_mean_field(W, target, start, penalty, iters)
                candidates.offer(rho[None], METHOD_MEAN_FIELD)

    meta = {
        "tol": tol,
        "net_radius": radius,
        "mesh": 1.0 / parts,
        "evaluated": candidates.evaluated,
        "feasible": candidates.feasible,
        "best_source": candidates.source,
        "seed": seed,
    }
    if not math.isfinite(candidates.best):
        logger.info("No fractional partition within %.3g of the target", tol)
        return RateEstimate(math.inf, None, tol, METHOD_MEAN_FIELD, meta=meta)
    value = min(math.log(q), max(0.0, math.log(q) - candidates.best))
    method = METHOD_GRID if candidates.source == METHOD_GRID else METHOD_MEAN_FIELD
    return RateEstimate(value, None, tol, method, meta=meta)
