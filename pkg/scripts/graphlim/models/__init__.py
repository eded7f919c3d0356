"""Graph families: seeded random models and deterministic fixtures."""

from ..graph import disjoint_union
from .fixtures import block_constant_graph, clique_plus_isolated, clique_quotient, cycle_union
from .generator import GeneratorSpec, generate
from .random_graphs import (
    block_labels,
    erdos_renyi,
    power_law,
    power_law_probabilities,
    sample_edges,
    sbm,
    w_random,
)

__all__ = [
    # Specs
    "GeneratorSpec",
    "generate",
    # Random families
    "block_labels",
    "erdos_renyi",
    "power_law",
    "power_law_probabilities",
    "sample_edges",
    "sbm",
    "w_random",
    # Deterministic families
    "block_constant_graph",
    "clique_plus_isolated",
    "clique_quotient",
    "cycle_union",
    "disjoint_union",
]
