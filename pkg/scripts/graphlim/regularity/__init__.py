"""Upper-regularity checks, weak-regularity partitions and regularized versions."""

from ..graph import is_equipartition
from ..graphon.tails import KTable
from .checks import (
    equipartition_upper_regular_check,
    uniform_upper_regular_check,
    upper_lp_regular_check,
    upper_regular_graphon_check,
)
from .partitioner import (
    WeakRegularityResult,
    class_aligned_equipartition,
    degree_sorted_refinement,
    k_from_equipartition_table,
    regularize,
    weak_regularity_partition,
)
from .report import RegularityReport

__all__ = [
    # Types
    "KTable",
    "RegularityReport",
    "WeakRegularityResult",
    # Checks
    "equipartition_upper_regular_check",
    "uniform_upper_regular_check",
    "upper_lp_regular_check",
    "upper_regular_graphon_check",
    # Partitions
    "class_aligned_equipartition",
    "degree_sorted_refinement",
    "is_equipartition",
    "k_from_equipartition_table",
    "regularize",
    "weak_regularity_partition",
]
