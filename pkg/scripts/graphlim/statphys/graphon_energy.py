"""
Energies and free energies of step graphons.

For a step graphon W with masses M = len len^T * W and a step-constant
fractional partition rho, E_rho(W, J) = -tr(J rho^T M rho). Ground states
are searched by conditional gradient (the linear oracle is a transportation
LP when the class weights are fixed), free energies by damped mean-field
iteration. Only closed forms set exact_flag.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import bisect, linprog
from scipy.special import entr, expit, logsumexp, softmax

from ..constants import (
    BISECTION_ITERS,
    DEFAULT_GRAPHON_MESH,
    DEFAULT_RESTARTS,
    DUAL_RESIDUAL_TOL,
    FEASIBILITY_TOL,
    FRANK_WOLFE_ITERS,
    GRID_CHECK_POINTS,
    MEAN_FIELD_DAMPING,
    MEAN_FIELD_ITERS,
    METHOD_CLOSED_FORM,
    METHOD_CONDITIONAL_GRADIENT,
    METHOD_GRID,
    METHOD_MEAN_FIELD,
    STATIONARY_TOL,
)
from ..exceptions import GraphLimitError, ValidationError
from ..graphon.step_graphon import StepGraphon
from ..quotients.fractional import StepFractionalPartition, check_shapes, fractional_quotient
from ..quotients.space import fractional_quotient_batch, grid_partitions, grid_size
from ..utils.rng import spawn_generators
from .model import CouplingModel, EnergyResult

logger = logging.getLogger(__name__)


def graphon_energy(W: StepGraphon, J: np.ndarray, rho: StepFractionalPartition) -> float:
    """
    E_rho(W, J) = -sum_ij J_ij beta_ij(W/rho).

    Raises:
        ValidationError: If rho does not live on the steps of W or J is not q x q
    """
    check_shapes(W, rho)
    J = np.asarray(J, dtype=float)
    if J.shape != (rho.q, rho.q):
        raise ValidationError(f"J must be {rho.q}x{rho.q}, got shape {J.shape}")
    return -float(np.sum(J * fractional_quotient(W, rho).beta))


def _entropy_of(lengths: np.ndarray, rho: np.ndarray) -> float:
    return float(lengths @ entr(rho).sum(axis=1))


def _quadratic(masses: np.ndarray, J: np.ndarray, rho: np.ndarray) -> float:
    return -float(np.sum(J * (rho.T @ masses @ rho)))


def _entropy_of_simplex(a: np.ndarray) -> float:
    return float(entr(a).sum())


def _constant_value(W: StepGraphon) -> float | None:
    first = W.values.flat[0]
    return float(first) if np.all(W.values == first) else None


def _is_trivial(W: StepGraphon, J: np.ndarray) -> bool:
    return not np.any(J) or not np.any(W.values)


def _constant_rows(W: StepGraphon, a: np.ndarray) -> StepFractionalPartition:
    return StepFractionalPartition.constant_rows(W.step_lengths, a)


class _TransportOracle:
    """argmin <C, S> over row-stochastic S with len^T S = a."""

    def __init__(self, lengths: np.ndarray, a: np.ndarray) -> None:
        k, q = lengths.size, a.size
        rows = np.kron(np.eye(k), np.ones(q))
        # the last column constraint is implied by the row sums
        columns = np.kron(lengths[None, :], np.eye(q))[: q - 1]
        self.A_eq = np.vstack([rows, columns])
        self.b_eq = np.concatenate([np.ones(k), a[: q - 1]])
        self.shape = (k, q)

    def __call__(self, cost: np.ndarray) -> np.ndarray:
        result = linprog(
            cost.ravel(), A_eq=self.A_eq, b_eq=self.b_eq, bounds=(0, None), method="highs-ds"
        )
        if result.status != 0:
            raise GraphLimitError(f"Transportation LP failed: {result.message}")
        S = np.clip(result.x.reshape(self.shape), 0.0, 1.0)
        return S / S.sum(axis=1, keepdims=True)


def _conditional_gradient(
    masses: np.ndarray,
    J: np.ndarray,
    linear: np.ndarray,
    rho: np.ndarray,
    oracle,
    iters: int,
) -> tuple[float, np.ndarray]:
    """
    Frank-Wolfe on f(rho) = -tr(J rho^T M rho) - <linear, rho> with exact line search.
    """
    for _ in range(iters):
        gradient = -2.0 * masses @ rho @ J - linear
        direction = oracle(gradient) - rho
        slope = float(np.sum(gradient * direction))
        if slope >= -STATIONARY_TOL:
            break
        curvature = _quadratic(masses, J, direction)
        step = min(1.0, -slope / (2.0 * curvature)) if curvature > 0 else 1.0
        rho = rho + step * direction
    return _quadratic(masses, J, rho) - float(np.sum(linear * rho)), rho


def _grid_minimum(
    W: StepGraphon, J: np.ndarray, a: np.ndarray, mesh: float
) -> tuple[float, np.ndarray | None, int]:
    """Minimum of E_rho over grid partitions whose class weights equal a."""
    parts = max(1, math.ceil(1.0 / mesh - 1e-9))
    best, best_rho, feasible = math.inf, None, 0
    for rhos in grid_partitions(W.k, a.size, parts):
        alphas, betas = fractional_quotient_batch(W, rhos)
        mask = np.all(np.abs(alphas - a) <= FEASIBILITY_TOL, axis=1)
        if not mask.any():
            continue
        feasible += int(mask.sum())
        energies = -np.einsum("bij,ij->b", betas[mask], J)
        i = int(np.argmin(energies))
        if energies[i] < best:
            best, best_rho = float(energies[i]), rhos[mask][i]
    return best, best_rho, feasible


def graphon_gse(
    W: StepGraphon,
    J: np.ndarray,
    a: np.ndarray,
    mesh: float | None = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    iters: int = FRANK_WOLFE_ITERS,
) -> EnergyResult:
    """
    Microcanonical ground state energy E_a(W, J) over step-constant rho.

    Closed forms (exact): J = 0 or W = 0 gives 0; constant W = c forces
    beta = c a a^T and gives -c sum J_ij a_i a_j. Otherwise conditional
    gradient from constant rows a and random LP vertices, cross-checked on
    the simplex grid of the given mesh when k and q are small.

    Args:
        W: Step graphon
        J: Symmetric q x q couplings
        a: Target class weights
        mesh: Grid spacing for the cross-check (defaults to 1/4)
        restarts: Number of starting points
        seed: Root seed for random starts
        iters: Conditional-gradient iterations per start

    Returns:
        EnergyResult whose optimizer is a StepFractionalPartition
    """
    model = CouplingModel(J, a=a)
    J, a = model.J, model.a
    constant = _constant_rows(W, a)
    if _is_trivial(W, J):
        return EnergyResult(0.0, constant, True, METHOD_CLOSED_FORM)
    c = _constant_value(W)
    if c is not None:
        return EnergyResult(-c * float(a @ J @ a), constant, True, METHOD_CLOSED_FORM)

    masses = W.mass * W.values
    oracle = _TransportOracle(W.step_lengths, a)
    linear = np.zeros((W.k, a.size))
    best, best_rho, method = math.inf, None, METHOD_CONDITIONAL_GRADIENT
    for r, rng in enumerate(spawn_generators(seed, max(1, restarts))):
        start = constant.weights if r == 0 else oracle(rng.normal(size=(W.k, a.size)))
        value, rho = _conditional_gradient(masses, J, linear, np.array(start), oracle, iters)
        logger.debug("Conditional gradient restart %d: %.12g", r, value)
        if value < best - STATIONARY_TOL:
            best, best_rho = value, rho

    mesh = DEFAULT_GRAPHON_MESH if mesh is None else mesh
    parts = max(1, math.ceil(1.0 / mesh - 1e-9))
    meta = {"restarts": restarts, "seed": seed, "resolution": 1.0 / parts}
    if grid_size(W.k, a.size, parts) <= GRID_CHECK_POINTS:
        grid_value, grid_rho, feasible = _grid_minimum(W, J, a, 1.0 / parts)
        meta.update(grid_value=grid_value, grid_feasible=feasible)
        if grid_rho is not None and grid_value < best - STATIONARY_TOL:
            best, best_rho, method = grid_value, grid_rho, METHOD_GRID
    optimizer = StepFractionalPartition(best_rho, W.step_lengths)
    return EnergyResult(graphon_energy(W, J, optimizer), optimizer, False, method, meta)


def _solve_dual(
    logits: np.ndarray, lengths: np.ndarray, a: np.ndarray, duals: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Rows softmax(logits - duals) with duals chosen so that len^T rho = a.

    Colors with a_i = 0 are switched off; the others are fitted one at a
    time by bisection until the residual drops below the tolerance.
    """
    active = a > 0
    duals = np.where(active, duals, math.inf)
    if active.sum() == 1:
        return np.tile(active.astype(float), (lengths.size, 1)), duals
    for _ in range(MEAN_FIELD_ITERS):
        for i in np.flatnonzero(active):
            others = np.delete(logits - duals, i, axis=1)
            shifted = logits[:, i] - logsumexp(others, axis=1)
            offset = math.log(a[i] / (1.0 - a[i])) if a[i] < 1 else 0.0

            def excess(t: float) -> float:
                return float(lengths @ expit(shifted - t)) - a[i]

            lo = float(shifted.min()) - offset - 1.0
            hi = float(shifted.max()) - offset + 1.0
            duals[i] = bisect(excess, lo, hi, xtol=1e-15, maxiter=BISECTION_ITERS, disp=False)
        rho = softmax(logits - duals, axis=1)
        if np.max(np.abs(lengths @ rho - a)) < DUAL_RESIDUAL_TOL:
            break
    return softmax(logits - duals, axis=1), duals


def _mean_field(
    W: StepGraphon,
    J: np.ndarray,
    rho: np.ndarray,
    update,
    iters: int,
) -> np.ndarray:
    scaled = W.values * W.step_lengths[None, :]
    for _ in range(iters):
        proposal = update(2.0 * scaled @ rho @ J)
        step = MEAN_FIELD_DAMPING * (proposal - rho)
        rho = rho + step
        if np.max(np.abs(step)) < STATIONARY_TOL:
            break
    return rho


def graphon_free_energy(
    W: StepGraphon,
    J: np.ndarray,
    a: np.ndarray,
    iters: int = MEAN_FIELD_ITERS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> EnergyResult:
    """
    Microcanonical free energy F_a(W, J) = inf (E_rho - Ent(rho)) over alpha(rho) = a.

    Closed forms: -H(a) when J = 0 or W = 0, and -c a^T J a - H(a) for a
    constant graphon (entropy is maximized by constant rows). Otherwise the
    value is the best mean-field fixed point found, an upper bound.
    """
    model = CouplingModel(J, a=a)
    J, a = model.J, model.a
    constant = _constant_rows(W, a)
    if _is_trivial(W, J):
        return EnergyResult(-_entropy_of_simplex(a), constant, True, METHOD_CLOSED_FORM)
    c = _constant_value(W)
    if c is not None:
        value = -c * float(a @ J @ a) - _entropy_of_simplex(a)
        return EnergyResult(value, constant, True, METHOD_CLOSED_FORM)

    masses = W.mass * W.values
    lengths = W.step_lengths
    duals = np.zeros(a.size)

    def update(logits: np.ndarray) -> np.ndarray:
        nonlocal duals
        rho, duals = _solve_dual(logits, lengths, a, np.where(np.isfinite(duals), duals, 0.0))
        return rho

    best, best_rho = math.inf, None
    for r, rng in enumerate(spawn_generators(seed, max(1, restarts))):
        start = constant.weights if r == 0 else update(rng.normal(scale=2.0, size=(W.k, a.size)))
        rho = _mean_field(W, J, np.array(start), update, iters)
        value = _quadratic(masses, J, rho) - _entropy_of(lengths, rho)
        logger.debug("Mean-field restart %d: %.12g", r, value)
        if value < best - STATIONARY_TOL:
            best, best_rho = value, rho
    optimizer = StepFractionalPartition(best_rho, lengths)
    return EnergyResult(best, optimizer, False, METHOD_MEAN_FIELD, {"restarts": restarts, "seed": seed})


def graphon_ground_state_energy(
    W: StepGraphon,
    J: np.ndarray,
    h: np.ndarray | None = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    iters: int = FRANK_WOLFE_ITERS,
) -> EnergyResult:
    """
    Unrestricted ground state energy E(W, J, h) = inf (E_rho - <h, alpha(rho)>).

    J = 0 or W = 0 has the closed form -max h.
    """
    model = CouplingModel(J, h)
    J, h = model.J, model.h
    lengths = W.step_lengths
    if _is_trivial(W, J):
        best_color = int(np.argmax(h))
        optimizer = StepFractionalPartition.hard(lengths, [best_color] * W.k, model.q)
        return EnergyResult(-float(h[best_color]), optimizer, True, METHOD_CLOSED_FORM)

    masses = W.mass * W.values
    linear = np.outer(lengths, h)
    eye = np.eye(model.q)

    def oracle(cost: np.ndarray) -> np.ndarray:
        return eye[np.argmin(cost, axis=1)]

    best, best_rho = math.inf, None
    for r, rng in enumerate(spawn_generators(seed, max(1, restarts))):
        start = np.full((W.k, model.q), 1.0 / model.q) if r == 0 else eye[rng.integers(model.q, size=W.k)]
        value, rho = _conditional_gradient(masses, J, linear, start, oracle, iters)
        if value < best - STATIONARY_TOL:
            best, best_rho = value, rho
    optimizer = StepFractionalPartition(best_rho, lengths)
    value = graphon_energy(W, J, optimizer) - float(h @ optimizer.alpha)
    return EnergyResult(
        value, optimizer, False, METHOD_CONDITIONAL_GRADIENT, {"restarts": restarts, "seed": seed}
    )


def graphon_unrestricted_free_energy(
    W: StepGraphon,
    J: np.ndarray,
    h: np.ndarray | None = None,
    iters: int = MEAN_FIELD_ITERS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> EnergyResult:
    """
    Unrestricted free energy F(W, J, h) = inf (E_rho - <h, alpha(rho)> - Ent(rho)).

    J = 0 or W = 0 has the closed form -log sum_i exp(h_i).
    """
    model = CouplingModel(J, h)
    J, h = model.J, model.h
    lengths = W.step_lengths
    if _is_trivial(W, J):
        optimizer = StepFractionalPartition.constant_rows(lengths, softmax(h))
        return EnergyResult(-float(logsumexp(h)), optimizer, True, METHOD_CLOSED_FORM)

    masses = W.mass * W.values

    def update(logits: np.ndarray) -> np.ndarray:
        return softmax(logits + h[None, :], axis=1)

    best, best_rho = math.inf, None
    for r, rng in enumerate(spawn_generators(seed, max(1, restarts))):
        start = update(np.zeros((W.k, model.q))) if r == 0 else update(rng.normal(scale=2.0, size=(W.k, model.q)))
        rho = _mean_field(W, J, start, update, iters)
        value = _quadratic(masses, J, rho) - float(lengths @ rho @ h) - _entropy_of(lengths, rho)
        if value < best - STATIONARY_TOL:
            best, best_rho = value, rho
    optimizer = StepFractionalPartition(best_rho, lengths)
    return EnergyResult(best, optimizer, False, METHOD_MEAN_FIELD, {"restarts": restarts, "seed": seed})
