"""
Tail-threshold tables and the K-bounded tails check.

A K table is a finite list of (eps, K(eps)) pairs. Between grid points the
table is read as a step function: K at eps is the value tabulated at the
largest grid point not above eps, so a tail bound proved at that grid point
carries over to eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from ..constants import DEFAULT_EPS_GRID
from ..exceptions import ValidationError
from .step_graphon import StepGraphon


@dataclass(frozen=True)
class KTable:
    """Sampled threshold function eps -> K(eps), sorted by eps."""

    entries: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted((float(e), float(K)) for e, K in self.entries))
        if not entries:
            raise ValidationError("K table needs at least one (eps, K) entry")
        if any(e <= 0 or K <= 0 for e, K in entries):
            raise ValidationError("K table entries must have eps > 0 and K > 0")
        object.__setattr__(self, "entries", entries)

    @property
    def eps_grid(self) -> list[float]:
        return [e for e, _ in self.entries]

    def __call__(self, eps: float) -> float:
        eps_values = np.asarray(self.eps_grid)
        index = int(np.searchsorted(eps_values, eps, side="right")) - 1
        return self.entries[max(index, 0)][1]

    @classmethod
    def from_function(
        cls, function: Callable[[float], float], grid: Iterable[float] = DEFAULT_EPS_GRID
    ) -> "KTable":
        return cls(tuple((e, function(e)) for e in grid))

    @classmethod
    def constant(cls, K: float, grid: Iterable[float] = DEFAULT_EPS_GRID) -> "KTable":
        return cls(tuple((e, K) for e in grid))

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [list(entry) for entry in self.entries]}

    @classmethod
    def from_dict(cls, document: dict[str, Any] | Sequence[Sequence[float]]) -> "KTable":
        entries = document["entries"] if isinstance(document, dict) else document
        return cls(tuple((e, K) for e, K in entries))


def tail_mass(W: StepGraphon, threshold: float) -> float:
    """int |W| 1[|W| >= threshold]."""
    absolute = np.abs(W.values)
    return float(np.sum(W.mass * absolute * (absolute >= threshold)))


def k_bounded_tails_check(W: StepGraphon, K: KTable) -> tuple[bool, float | None]:
    """
    Check int |W| 1[|W| >= K(eps)] <= eps at every tabulated eps.

    Returns:
        (passed, first violating eps in ascending grid order or None)
    """
    for eps in K.eps_grid:
        if tail_mass(W, K(eps)) > eps:
            return False, eps
    return True, None
