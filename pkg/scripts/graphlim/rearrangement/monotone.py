"""
Monotone rearrangement W* and top level sets.

W* is constant on square annuli {r_(i-1) <= max(x, y) < r_i} with the
radii at the square roots of the cumulative masses of W's levels taken
from the top, so it is exact for step inputs and keeps one step per level.
"""

from __future__ import annotations

import logging

import numpy as np

from ..constants import REARRANGEMENT_MAX_LEVELS, SUM_TOL
from ..exceptions import BudgetExceededError, ValidationError
from ..graphon.step_graphon import StepGraphon, common_refinement
from .distribution import ValueDistribution, value_distribution

logger = logging.getLogger(__name__)


def annulus_graphon(distribution: ValueDistribution) -> StepGraphon:
    """Step graphon with value v_i on the i-th annulus, levels in decreasing order."""
    values, cumulative = distribution.descending()
    radii = np.sqrt(cumulative)
    radii[-1] = 1.0
    lengths = np.diff(np.concatenate([[0.0], radii]))
    index = np.arange(values.size)
    return StepGraphon(lengths, values[np.maximum.outer(index, index)])


def monotone_rearrangement(W: StepGraphon, grid: int = REARRANGEMENT_MAX_LEVELS) -> StepGraphon:
    """
    W*(x, y) = sup {t : Pr[W > t] > max(x, y)^2}.

    Args:
        W: Step graphon
        grid: Largest number of annuli materialized

    Returns:
        W* with one step per distinct value of W

    Raises:
        BudgetExceededError: If W has more distinct values than ``grid``
    """
    distribution = value_distribution(W)
    if len(distribution) > grid:
        raise BudgetExceededError(
            f"Rearrangement needs {len(distribution)} annuli, grid allows {grid}",
            required=len(distribution),
            budget=grid,
        )
    return annulus_graphon(distribution)


def _split_step(labels: np.ndarray, s: int) -> np.ndarray:
    return np.insert(labels, s + 1, labels[s])


def top_lambda(W: StepGraphon, lam: float) -> StepGraphon:
    """
    Indicator of a symmetric set of measure lam between {W > M} and {W >= M}.

    Step rectangles are taken by decreasing value; within the boundary level
    the pairs (s, t) with s <= t go in lexicographic order, and the last one
    taken is cut by splitting step s.

    Raises:
        ValidationError: If lam is outside [0, 1]
    """
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lambda must lie in [0, 1], got {lam}")
    rows, cols = np.triu_indices(W.k)
    cell_mass = W.mass[rows, cols] * np.where(rows == cols, 1.0, 2.0)
    order = np.lexsort((cols, rows, -W.values[rows, cols]))
    cumulative = np.cumsum(cell_mass[order])

    indicator = np.zeros((W.k, W.k))
    taken = 0.0
    partial = None
    for position, cell in enumerate(order):
        needed = lam - taken
        if needed <= SUM_TOL:
            break
        s, t = int(rows[cell]), int(cols[cell])
        if needed >= cell_mass[cell] - SUM_TOL:
            indicator[s, t] = indicator[t, s] = 1.0
            taken = float(cumulative[position])
            continue
        partial = (s, t, needed / cell_mass[cell])
        break

    if partial is None:
        return StepGraphon(W.step_lengths, indicator)
    s, t, share = partial
    fraction = float(np.sqrt(share)) if s == t else share
    index = _split_step(np.arange(W.k), s)
    lengths = W.step_lengths[index].copy()
    lengths[s] *= fraction
    lengths[s + 1] *= 1.0 - fraction
    refined = indicator[np.ix_(index, index)]
    if s == t:
        refined[s, s] = 1.0
    else:
        other = t + 1 if t > s else t
        refined[s, other] = refined[other, s] = 1.0
    logger.debug("top_lambda split step %d at fraction %.6g", s, fraction)
    return StepGraphon(lengths, refined)


def _levels(values: np.ndarray, tol: float) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    starts = np.concatenate([[True], np.diff(values[order]) > tol])
    levels = np.empty(values.size, dtype=int)
    levels[order] = np.cumsum(starts) - 1
    return levels


def are_aligned(U: StepGraphon, W: StepGraphon, tol: float = SUM_TOL) -> bool:
    """
    True when U and W have nested level sets: no two rectangles of the common
    refinement with U strictly larger on one and W strictly larger on the other.
    """
    U2, W2 = common_refinement(U, W)
    u = _levels(U2.values.reshape(-1), tol)
    w = _levels(W2.values.reshape(-1), tol)
    order = np.lexsort((w, u))
    return bool(np.all(np.diff(w[order]) >= 0))
