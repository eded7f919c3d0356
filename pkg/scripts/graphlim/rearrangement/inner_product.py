"""
Inner products and the quasi-inner product bracket.

C(W, Y) is the supremum of E[W Y^phi] over measure-preserving
rearrangements phi. Any rearrangement gives a lower bound, and the
rearrangement inequality caps it by E[W* Y*].
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..constants import DEFAULT_ALIGNMENT_BUDGET, DEFAULT_RESTARTS, LOCAL_SEARCH_MAX_ITERS, SUM_TOL
from ..exceptions import ValidationError
from ..graphon.step_graphon import StepGraphon, atom_count, common_refinement, permute_steps, split_into_atoms
from ..utils.rng import spawn_generators
from .distribution import value_distribution
from .monotone import are_aligned

logger = logging.getLogger(__name__)

LOCAL_SWAP_KMAX = 12


@dataclass(frozen=True)
class InnerProductBound:
    """
    Interval [lower, upper] containing C(W, Y).

    Unlike distance intervals the ends may be negative.
    """

    lower: float
    upper: float
    exact_flag: bool = False
    method: str = ""
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lower > self.upper + SUM_TOL:
            raise ValidationError(f"Lower bound {self.lower} exceeds upper bound {self.upper}")
        object.__setattr__(self, "lower", min(float(self.lower), float(self.upper)))
        if self.exact_flag and self.lower != self.upper:
            raise ValidationError("An exact bound needs lower == upper")

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact_flag": self.exact_flag,
            "method": self.method,
            "meta": dict(self.meta),
        }


def inner_product(W: StepGraphon, Y: StepGraphon) -> float:
    """E[W Y] on the common refinement."""
    W2, Y2 = common_refinement(W, Y)
    return float(np.sum(W2.mass * W2.values * Y2.values))


def rearranged_inner_product(W: StepGraphon, Y: StepGraphon) -> float:
    """
    E[W* Y*] from the annulus profiles.

    Both rearrangements are functions of max(x, y)^2, which is uniform on
    [0, 1], so the expectation is the integral of the product of the two
    decreasing quantile functions.
    """
    w_values, w_cumulative = value_distribution(W).descending()
    y_values, y_cumulative = value_distribution(Y).descending()
    breaks = np.union1d(w_cumulative, y_cumulative)
    widths = np.diff(np.concatenate([[0.0], breaks]))
    midpoints = breaks - widths / 2.0
    w_index = np.minimum(np.searchsorted(w_cumulative, midpoints, side="left"), w_values.size - 1)
    y_index = np.minimum(np.searchsorted(y_cumulative, midpoints, side="left"), y_values.size - 1)
    return float(np.sum(widths * w_values[w_index] * y_values[y_index]))


def _exhaustive_lower(W: StepGraphon, Y: StepGraphon, m: int) -> float:
    """Best E[W Y^phi] over all arrangements of m equal atoms of Y against W."""
    W_atoms, _ = split_into_atoms(W, m)
    Y_atoms, _ = split_into_atoms(Y, m)
    perms = np.asarray(list(itertools.permutations(range(m))), dtype=int)
    permuted = Y_atoms.values[perms[:, :, None], perms[:, None, :]]
    totals = np.einsum("ij,pij->p", W_atoms.values, permuted) / m**2
    return float(totals.max())


def _local_swaps(W: StepGraphon, Y: StepGraphon, value: float) -> float:
    """First-improvement transpositions of Y's steps."""
    current = Y
    for _ in range(LOCAL_SEARCH_MAX_ITERS):
        improved = False
        for i, j in itertools.combinations(range(Y.k), 2):
            order = list(range(Y.k))
            order[i], order[j] = order[j], order[i]
            candidate = permute_steps(current, order)
            product = inner_product(W, candidate)
            if product > value + SUM_TOL:
                current, value, improved = candidate, product, True
                break
        if not improved:
            break
    return value


def quasi_inner_product_bounds(
    W: StepGraphon,
    Y: StepGraphon,
    budget: int = DEFAULT_ALIGNMENT_BUDGET,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> InnerProductBound:
    """
    Bracket E[W Y] <= C(W, Y) <= E[W* Y*].

    The lower end is the best of the identity pairing, the pairing of both
    rearrangements when W and Y are aligned, an exhaustive search over
    arrangements of equal atoms when both split into at most ``budget``
    atoms, and random step orders followed by transpositions otherwise.

    Args:
        W: First graphon
        Y: Second graphon
        budget: Largest equal-atom grid searched exhaustively
        seed: Root seed for random step orders
        restarts: Random step orders tried

    Returns:
        InnerProductBound; exact_flag when both ends meet
    """
    upper = rearranged_inner_product(W, Y)
    lower = inner_product(W, Y)
    method = "identity"
    if are_aligned(W, Y):
        lower, method = upper, "aligned"
    else:
        mw, my = atom_count(W, budget), atom_count(Y, budget)
        m = math.lcm(mw, my) if mw is not None and my is not None else None
        if m is not None and m <= budget:
            lower, method = max(lower, _exhaustive_lower(W, Y, m)), "exhaustive"
        else:
            for rng in spawn_generators(seed, restarts):
                candidate = inner_product(W, permute_steps(Y, rng.permutation(Y.k)))
                if candidate > lower:
                    lower, method = candidate, "random_order"
            if W.k <= LOCAL_SWAP_KMAX and Y.k <= LOCAL_SWAP_KMAX:
                swapped = _local_swaps(W, Y, lower)
                if swapped > lower:
                    lower, method = swapped, "local_swap"
    meta = {"seed": seed, "budget": budget}
    if upper - lower <= SUM_TOL:
        return InnerProductBound(upper, upper, True, method, meta)
    logger.debug("Quasi-inner product bracket [%.6g, %.6g]", lower, upper)
    return InnerProductBound(lower, upper, False, method, meta)
