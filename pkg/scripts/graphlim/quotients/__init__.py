"""Fractional partitions, quotient metrics and quotient-set nets."""

from .fractional import (
    StepFractionalPartition,
    average_fractional,
    check_shapes,
    entropy,
    fractional_distance,
    fractional_quotient,
    partition_to_fractional,
    round_fractional,
)
from .space import (
    QuotientSet,
    d1,
    directed_distances,
    fractional_quotient_batch,
    grid_partitions,
    finest_grid_parts,
    grid_size,
    hausdorff,
    load_quotient_set,
    local_refinement,
    net_radius,
    sample_quotient_set,
    save_quotient_set,
    simplex_grid,
)

__all__ = [
    # Fractional partitions
    "StepFractionalPartition",
    "average_fractional",
    "check_shapes",
    "entropy",
    "fractional_distance",
    "fractional_quotient",
    "partition_to_fractional",
    "round_fractional",
    # Quotient space
    "QuotientSet",
    "d1",
    "directed_distances",
    "fractional_quotient_batch",
    "grid_partitions",
    "finest_grid_parts",
    "grid_size",
    "hausdorff",
    "load_quotient_set",
    "local_refinement",
    "net_radius",
    "sample_quotient_set",
    "save_quotient_set",
    "simplex_grid",
]
