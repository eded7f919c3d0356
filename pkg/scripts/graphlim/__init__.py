"""
graphlim: sparse graph limits.

A library and CLI for the metric side of sparse graph-limit theory:

- Weighted graphs, partitions and quotients
- Step graphons, cut norms and certified cut-distance bounds
- Quotient sets and their Hausdorff distance
- Ground state and free energies of spin models on graphs and graphons
- Quotient-ball probabilities and large deviation rates
- Upper-regularity checks, weak-regularity partitions and regularized graphons
- Monotone rearrangements and quasi-inner products
- Seeded random graph families for convergence experiments

Usage:
    From command line:
        python -m scripts.graphlim generate --family er --n 200 --p 0.05
        python -m scripts.graphlim distance --input a.json --input2 b.json
        python -m scripts.graphlim convergence-report --family sbm --B '[[1.6,0.4],[0.4,1.6]]' \
            --rho-n 0.1 --sizes 100,200,400

    From Python code:
        from scripts.graphlim import StepGraphon, cut_distance, erdos_renyi, normalize

        G = erdos_renyi(200, 0.05, seed=1)
        bound = cut_distance(normalize(G), StepGraphon.constant(1.0))
"""

# Constants
from .constants import (
    FAMILIES,
    LD_METHODS,
    SUM_TOL,
    VERDICT_FAIL,
    VERDICT_NO_VIOLATION,
    VERDICT_PASS,
)

# Exceptions
from .exceptions import (
    BudgetExceededError,
    FileOperationError,
    GraphLimitError,
    InfeasibleEnsembleError,
    ValidationError,
)

# Graphs and quotients
from .graph import (
    Quotient,
    VertexPartition,
    WeightedGraph,
    enumerate_quotients,
    graph_norm,
    quotient,
)

# Graphons and distances
from .graphon import (
    DistanceBound,
    KTable,
    StepGraphon,
    cut_distance,
    cut_norm_exact,
    embed,
    normalize,
    normalized_cut_distance,
)

# Quotient space
from .quotients import (
    QuotientSet,
    StepFractionalPartition,
    fractional_quotient,
    hausdorff,
    round_fractional,
    sample_quotient_set,
)

# Statistical physics
from .statphys import (
    CouplingModel,
    EnergyResult,
    free_energy,
    graphon_free_energy,
    graphon_gse,
    ground_state_energy,
    microcanonical_free_energy,
    microcanonical_gse,
)

# Large deviations
from .large_deviations import (
    RateEstimate,
    clique_rate,
    empirical_rate,
    graphon_rate,
    quotient_ball_probability,
)

# Regularity
from .regularity import (
    RegularityReport,
    WeakRegularityResult,
    equipartition_upper_regular_check,
    regularize,
    uniform_upper_regular_check,
    upper_lp_regular_check,
    upper_regular_graphon_check,
    weak_regularity_partition,
)

# Rearrangement
from .rearrangement import (
    InnerProductBound,
    ValueDistribution,
    monotone_rearrangement,
    quasi_inner_product_bounds,
    top_lambda,
    value_distribution,
)

# Models
from .models import (
    GeneratorSpec,
    clique_plus_isolated,
    cycle_union,
    erdos_renyi,
    generate,
    power_law,
    sbm,
    w_random,
)

__version__ = "1.0.0"

__all__ = [
    # Constants
    "FAMILIES",
    "LD_METHODS",
    "SUM_TOL",
    "VERDICT_FAIL",
    "VERDICT_NO_VIOLATION",
    "VERDICT_PASS",
    # Exceptions
    "BudgetExceededError",
    "FileOperationError",
    "GraphLimitError",
    "InfeasibleEnsembleError",
    "ValidationError",
    # Graphs
    "Quotient",
    "VertexPartition",
    "WeightedGraph",
    "enumerate_quotients",
    "graph_norm",
    "quotient",
    # Graphons
    "DistanceBound",
    "KTable",
    "StepGraphon",
    "cut_distance",
    "cut_norm_exact",
    "embed",
    "normalize",
    "normalized_cut_distance",
    # Quotient space
    "QuotientSet",
    "StepFractionalPartition",
    "fractional_quotient",
    "hausdorff",
    "round_fractional",
    "sample_quotient_set",
    # Statistical physics
    "CouplingModel",
    "EnergyResult",
    "free_energy",
    "graphon_free_energy",
    "graphon_gse",
    "ground_state_energy",
    "microcanonical_free_energy",
    "microcanonical_gse",
    # Large deviations
    "RateEstimate",
    "clique_rate",
    "empirical_rate",
    "graphon_rate",
    "quotient_ball_probability",
    # Regularity
    "RegularityReport",
    "WeakRegularityResult",
    "equipartition_upper_regular_check",
    "regularize",
    "uniform_upper_regular_check",
    "upper_lp_regular_check",
    "upper_regular_graphon_check",
    "weak_regularity_partition",
    # Rearrangement
    "InnerProductBound",
    "ValueDistribution",
    "monotone_rearrangement",
    "quasi_inner_product_bounds",
    "top_lambda",
    "value_distribution",
    # Models
    "GeneratorSpec",
    "clique_plus_isolated",
    "cycle_union",
    "erdos_renyi",
    "generate",
    "power_law",
    "sbm",
    "w_random",
]
