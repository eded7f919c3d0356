"""Value distributions of step graphons."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..constants import SUM_TOL
from ..exceptions import ValidationError
from ..graphon.step_graphon import StepGraphon


@dataclass(frozen=True, eq=False)
class ValueDistribution:
    """
    Law of W(X, Y) for independent uniform X, Y.

    Attributes:
        values: Strictly increasing distinct values
        masses: Positive masses summing to 1
    """

    values: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float).reshape(-1)
        masses = np.array(self.masses, dtype=float).reshape(-1)
        if values.size == 0 or values.shape != masses.shape:
            raise ValidationError("Distribution needs matching nonempty value and mass lists")
        if np.any(masses <= 0):
            raise ValidationError("Masses must be positive")
        if np.any(np.diff(values) <= 0):
            raise ValidationError("Values must be strictly increasing")
        if abs(masses.sum() - 1.0) > SUM_TOL:
            raise ValidationError(f"Masses sum to {masses.sum()!r}, expected 1")
        values.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masses", masses)

    def __len__(self) -> int:
        return self.values.size

    def tail(self, t: float) -> float:
        """Pr[W > t]."""
        return float(self.masses[self.values > t].sum())

    def descending(self) -> tuple[np.ndarray, np.ndarray]:
        """Values from largest to smallest with the cumulative mass at the end of each level."""
        values = self.values[::-1]
        cumulative = np.cumsum(self.masses[::-1])
        cumulative[-1] = 1.0
        return values, cumulative

    def to_dict(self) -> dict[str, Any]:
        return {"values": self.values.tolist(), "masses": self.masses.tolist()}


def value_distribution(W: StepGraphon, tol: float = 0.0) -> ValueDistribution:
    """
    Distribution of W's values, merging consecutive values that differ by at most tol.

    A merged level carries the mass-weighted mean of its values; with tol = 0
    the levels are the exact distinct values.
    """
    if tol < 0:
        raise ValidationError(f"tol must be >= 0, got {tol}")
    values = W.values.reshape(-1)
    masses = W.mass.reshape(-1)
    order = np.argsort(values, kind="stable")
    values, masses = values[order], masses[order]
    starts = np.concatenate([[True], np.diff(values) > tol])
    groups = np.cumsum(starts) - 1
    level_mass = np.bincount(groups, weights=masses)
    if tol == 0:
        level_value = values[starts]
    else:
        level_value = np.bincount(groups, weights=masses * values) / level_mass
    return ValueDistribution(level_value, level_mass / level_mass.sum())


def same_distribution_check(U: StepGraphon, W: StepGraphon, tol: float = SUM_TOL) -> bool:
    """True when U and W have the same value distribution up to tol in values and masses."""
    first = value_distribution(U, tol)
    second = value_distribution(W, tol)
    if len(first) != len(second):
        return False
    return bool(
        np.all(np.abs(first.values - second.values) <= tol)
        and np.all(np.abs(first.masses - second.masses) <= max(tol, SUM_TOL))
    )
