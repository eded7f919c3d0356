"""Step graphons, cut norms and cut-distance bounds."""

from .step_graphon import (
    StepGraphon,
    atom_count,
    average_graphon,
    common_refinement,
    embed,
    graphon_difference,
    graphon_lp_norm,
    normalize,
    permute_steps,
    restrict_to_boundaries,
    split_into_atoms,
    step_degrees,
)
from .cut_norm import (
    CutWitness,
    cut_masses,
    cut_norm_exact,
    cut_norm_lower,
    cut_norm_upper,
    exact_cut_witness,
    search_cut_witness,
)
from .tails import KTable, k_bounded_tails_check, tail_mass
from .distance import (
    DistanceBound,
    cut_distance,
    cut_distance_same_vertices,
    normalized_cut_distance,
    quotient_lower_bound,
)

__all__ = [
    # Step graphons
    "StepGraphon",
    "atom_count",
    "average_graphon",
    "common_refinement",
    "embed",
    "graphon_difference",
    "graphon_lp_norm",
    "normalize",
    "permute_steps",
    "restrict_to_boundaries",
    "split_into_atoms",
    "step_degrees",
    # Cut norm
    "CutWitness",
    "cut_masses",
    "cut_norm_exact",
    "cut_norm_lower",
    "cut_norm_upper",
    "exact_cut_witness",
    "search_cut_witness",
    # Tails
    "KTable",
    "k_bounded_tails_check",
    "tail_mass",
    # Distances
    "DistanceBound",
    "cut_distance",
    "cut_distance_same_vertices",
    "normalized_cut_distance",
    "quotient_lower_bound",
]
