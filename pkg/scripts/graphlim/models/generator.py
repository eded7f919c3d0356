"""
Generator specs: one JSON document naming a family, its parameters and a seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable

from ..constants import (
    FAMILIES,
    FAMILY_CLIQUE,
    FAMILY_CYCLES,
    FAMILY_ER,
    FAMILY_POWER_LAW,
    FAMILY_SBM,
    FAMILY_W_RANDOM,
)
from ..exceptions import ValidationError
from ..graph import WeightedGraph
from ..graphon.step_graphon import StepGraphon
from ..utils.validation import validate_document
from .fixtures import clique_plus_isolated, cycle_union
from .random_graphs import erdos_renyi, power_law, sbm, w_random

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorSpec:
    """
    Family tag, parameters and seed of a generated graph.

    Attributes:
        family: One of er, sbm, power-law, w-random, clique, cycles
        params: Family parameters (n, p, B, rho_n, alpha, beta, c_n,
            cycle_len, copies, graphon)
        seed: Root seed; ignored by the deterministic families
    """

    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValidationError(f"Unknown family {self.family!r}, expected one of {FAMILIES}")

    def with_n(self, n: int) -> "GeneratorSpec":
        """Same family and seed at size n (used by size ladders)."""
        return GeneratorSpec(self.family, {**self.params, "n": n}, self.seed)

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "GeneratorSpec":
        validate_document(document, "generator")
        return cls(document["family"], dict(document.get("params", {})), int(document.get("seed", 0)))


def _require(spec: GeneratorSpec, *names: str) -> list[Any]:
    missing = [name for name in names if name not in spec.params]
    if missing:
        raise ValidationError(f"Family {spec.family!r} needs parameters {missing}")
    return [spec.params[name] for name in names]


def _er(spec: GeneratorSpec) -> WeightedGraph:
    n, p = _require(spec, "n", "p")
    return erdos_renyi(int(n), float(p), spec.seed)


def _sbm(spec: GeneratorSpec) -> WeightedGraph:
    n, B, rho_n = _require(spec, "n", "B", "rho_n")
    return sbm(int(n), B, float(rho_n), spec.seed)


def _power_law(spec: GeneratorSpec) -> WeightedGraph:
    n, alpha, beta = _require(spec, "n", "alpha", "beta")
    return power_law(int(n), float(alpha), float(beta), spec.seed)


def _w_random(spec: GeneratorSpec) -> WeightedGraph:
    graphon, n, rho_n = _require(spec, "graphon", "n", "rho_n")
    return w_random(StepGraphon.from_dict(graphon), int(n), float(rho_n), spec.seed)


def _clique(spec: GeneratorSpec) -> WeightedGraph:
    n, c_n = _require(spec, "n", "c_n")
    return clique_plus_isolated(int(n), int(c_n))


def _cycles(spec: GeneratorSpec) -> WeightedGraph:
    (cycle_len,) = _require(spec, "cycle_len")
    return cycle_union(int(cycle_len), int(spec.params.get("copies", 1)))


BUILDERS: dict[str, Callable[[GeneratorSpec], WeightedGraph]] = {
    FAMILY_ER: _er,
    FAMILY_SBM: _sbm,
    FAMILY_POWER_LAW: _power_law,
    FAMILY_W_RANDOM: _w_random,
    FAMILY_CLIQUE: _clique,
    FAMILY_CYCLES: _cycles,
}


def generate(spec: GeneratorSpec) -> WeightedGraph:
    """Build the graph a spec describes."""
    G = BUILDERS[spec.family](spec)
    logger.info("Generated %s graph: n=%d, %d edges", spec.family, G.n, G.edge_count())
    return G
