"""Weighted graphs, partitions and quotients."""

from .quotient import (
    Quotient,
    average_over_partition,
    block_sums,
    check_enumeration_budget,
    enumerate_quotients,
    iter_maps,
    maxcut,
    normalized_pair_mass,
    quotient,
    quotient_batches,
    quotient_distribution,
)
from .weighted_graph import (
    VertexPartition,
    WeightedGraph,
    check_partition,
    degrees,
    disjoint_union,
    graph_norm,
    is_equipartition,
    scale_graph,
)

__all__ = [
    # Types
    "Quotient",
    "VertexPartition",
    "WeightedGraph",
    # Norms and transforms
    "degrees",
    "disjoint_union",
    "graph_norm",
    "scale_graph",
    # Partitions
    "average_over_partition",
    "block_sums",
    "check_partition",
    "is_equipartition",
    # Quotients
    "check_enumeration_budget",
    "enumerate_quotients",
    "iter_maps",
    "maxcut",
    "normalized_pair_mass",
    "quotient",
    "quotient_batches",
    "quotient_distribution",
]
