"""
Step graphons: symmetric piecewise-constant functions on the unit square.

A step graphon is given by k positive step lengths summing to 1 and a
symmetric k x k value matrix. Step i covers [b_{i-1}, b_i) where b are the
cumulative step lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ..constants import SNAP_TOL, SUM_TOL
from ..exceptions import ValidationError
from ..graph import WeightedGraph, graph_norm
from ..utils.validation import validate_document


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """
    Symmetric step function W on [0,1]^2.

    Attributes:
        step_lengths: k positive lengths summing to 1
        values: Symmetric k x k matrix, values[mu, nu] on step mu x step nu
    """

    step_lengths: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        lengths = np.array(self.step_lengths, dtype=float).reshape(-1)
        k = lengths.size
        values = np.array(self.values, dtype=float)
        if k == 0:
            raise ValidationError("Step graphon needs at least one step")
        if values.shape != (k, k):
            raise ValidationError(f"Values must be {k}x{k}, got shape {values.shape}")
        if np.any(lengths <= 0):
            raise ValidationError("Step lengths must be positive")
        if abs(lengths.sum() - 1.0) > SUM_TOL:
            raise ValidationError(f"Step lengths sum to {lengths.sum()!r}, expected 1")
        if not np.all(np.isfinite(values)):
            raise ValidationError("Graphon values must be finite")
        if not np.array_equal(values, values.T):
            raise ValidationError("Graphon values must be symmetric")
        lengths.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "step_lengths", lengths)
        object.__setattr__(self, "values", values)

    @property
    def k(self) -> int:
        return self.step_lengths.size

    @property
    def mass(self) -> np.ndarray:
        """Area len_mu * len_nu of every step rectangle."""
        return np.outer(self.step_lengths, self.step_lengths)

    @property
    def boundaries(self) -> np.ndarray:
        """Right endpoints b_1..b_k of the steps, with b_k = 1 exactly."""
        bounds = np.cumsum(self.step_lengths)
        bounds[-1] = 1.0
        return bounds

    def integral(self) -> float:
        return float(np.sum(self.mass * self.values))

    def scaled(self, c: float) -> "StepGraphon":
        return StepGraphon(self.step_lengths, c * self.values)

    def evaluate(self, x: float, y: float) -> float:
        """W(x, y) for points in [0, 1]."""
        return float(self.values[self.step_index(x), self.step_index(y)])

    def step_index(self, x: float | np.ndarray) -> int | np.ndarray:
        index = np.searchsorted(self.boundaries, x, side="right")
        return np.minimum(index, self.k - 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepGraphon):
            return NotImplemented
        return np.array_equal(self.step_lengths, other.step_lengths) and np.array_equal(
            self.values, other.values
        )

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def constant(cls, c: float) -> "StepGraphon":
        return cls(np.ones(1), np.full((1, 1), float(c)))

    @classmethod
    def zero(cls, step_lengths: Sequence[float] | None = None) -> "StepGraphon":
        lengths = np.ones(1) if step_lengths is None else np.asarray(step_lengths, dtype=float)
        return cls(lengths, np.zeros((lengths.size, lengths.size)))

    @classmethod
    def equal_steps(cls, values: Sequence[Sequence[float]]) -> "StepGraphon":
        """Step graphon with k equal steps."""
        values = np.asarray(values, dtype=float)
        k = values.shape[0]
        return cls(np.full(k, 1.0 / k), values)

    def to_dict(self) -> dict[str, Any]:
        return {"step_lengths": self.step_lengths.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "StepGraphon":
        validate_document(document, "graphon")
        return cls(np.asarray(document["step_lengths"]), np.asarray(document["values"]))


def embed(G: WeightedGraph) -> StepGraphon:
    """
    W^G: steps of length alpha_x / alpha_G in vertex order, values beta.

    Vertices of weight zero occupy no measure and are dropped.
    """
    keep = G.vertex_weights > 0
    lengths = G.vertex_weights[keep] / G.total_weight
    return StepGraphon(lengths, G.edge_weights[np.ix_(keep, keep)])


def normalize(G: WeightedGraph) -> StepGraphon:
    """(1/||G||_1) W^G, or the zero graphon on the same steps if ||G||_1 = 0."""
    W = embed(G)
    norm = graph_norm(G, 1)
    if norm == 0:
        return StepGraphon.zero(W.step_lengths)
    return StepGraphon(W.step_lengths, W.values / norm)


def graphon_lp_norm(W: StepGraphon, p: float = 1.0) -> float:
    """
    ||W||_p as a weighted power mean over step rectangles.

    Raises:
        ValidationError: If p < 1
    """
    if not p >= 1:
        raise ValidationError(f"Norm exponent must be >= 1 or infinity, got {p}")
    if math.isinf(p):
        return float(np.abs(W.values).max())
    return float(np.sum(W.mass * np.abs(W.values) ** p)) ** (1.0 / p)


def permute_steps(W: StepGraphon, order: Sequence[int]) -> StepGraphon:
    """Rearrange steps so that new step i is old step order[i]."""
    order = np.asarray(order, dtype=int)
    if sorted(order.tolist()) != list(range(W.k)):
        raise ValidationError("Step order must be a permutation of range(k)")
    return StepGraphon(W.step_lengths[order], W.values[np.ix_(order, order)])


def _check_groups(groups: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    flat = [int(i) for group in groups for i in group]
    if sorted(flat) != list(range(k)) or any(len(group) == 0 for group in groups):
        raise ValidationError("Groups must partition the step set into nonempty groups")
    return [list(map(int, group)) for group in groups]


def average_graphon(W: StepGraphon, refinement: Sequence[Sequence[int]]) -> StepGraphon:
    """
    W_P for the partition of [0,1] into unions of steps.

    New step g is the union of the steps in ``refinement[g]`` and carries the
    average of W over each pair of unions.

    Raises:
        ValidationError: If the groups do not partition the steps
    """
    groups = _check_groups(refinement, W.k)
    member = np.zeros((W.k, len(groups)))
    for g, group in enumerate(groups):
        member[group, g] = 1.0
    lengths = member.T @ W.step_lengths
    sums = member.T @ (W.mass * W.values) @ member
    sums = (sums + sums.T) / 2.0
    return StepGraphon(lengths, sums / np.outer(lengths, lengths))


def _merged_boundaries(*graphons: StepGraphon) -> np.ndarray:
    bounds = np.sort(np.concatenate([W.boundaries for W in graphons]))
    merged = [bounds[0]]
    for b in bounds[1:]:
        if b - merged[-1] > SNAP_TOL:
            merged.append(b)
    merged[-1] = 1.0
    return np.asarray(merged)


def restrict_to_boundaries(W: StepGraphon, boundaries: np.ndarray) -> StepGraphon:
    """Express W on the finer steps ending at ``boundaries``."""
    lengths = np.diff(np.concatenate([[0.0], boundaries]))
    midpoints = boundaries - lengths / 2.0
    index = W.step_index(midpoints)
    return StepGraphon(lengths, W.values[np.ix_(index, index)])


def common_refinement(U: StepGraphon, W: StepGraphon) -> tuple[StepGraphon, StepGraphon]:
    """
    Express U and W on one shared step grid.

    The grid is the sorted union of both boundary sets with boundaries closer
    than 1e-12 merged.
    """
    boundaries = _merged_boundaries(U, W)
    return restrict_to_boundaries(U, boundaries), restrict_to_boundaries(W, boundaries)


def graphon_difference(U: StepGraphon, W: StepGraphon) -> StepGraphon:
    """U - W on the common refinement."""
    U2, W2 = common_refinement(U, W)
    return StepGraphon(U2.step_lengths, U2.values - W2.values)


def atom_count(W: StepGraphon, limit: int) -> int | None:
    """Smallest m <= limit with every step length a multiple of 1/m."""
    for m in range(1, limit + 1):
        scaled = W.step_lengths * m
        if np.all(np.abs(scaled - np.rint(scaled)) <= SNAP_TOL * m) and np.all(np.rint(scaled) >= 1):
            return m
    return None


def split_into_atoms(W: StepGraphon, m: int) -> tuple[StepGraphon, np.ndarray]:
    """
    Refine W into m equal atoms.

    Returns:
        The refined graphon and the original step label of every atom
    """
    counts = np.rint(W.step_lengths * m).astype(int)
    if counts.sum() != m or np.any(counts < 1):
        raise ValidationError(f"Step lengths are not multiples of 1/{m}")
    labels = np.repeat(np.arange(W.k), counts)
    return StepGraphon(np.full(m, 1.0 / m), W.values[np.ix_(labels, labels)]), labels


def step_degrees(W: StepGraphon) -> np.ndarray:
    """Degree function d(x) = int W(x, y) dy on each step."""
    return W.values @ W.step_lengths
