"""Quotient-ball probabilities and large deviation rates."""

from .ball import (
    BlockStructure,
    block_structure,
    compositions,
    quotient_ball_probability,
    wilson_interval,
)
from .estimate import RateEstimate, rate_from_probability, rate_table_csv
from .rates import clique_rate, empirical_rate, graphon_rate

__all__ = [
    # Types
    "BlockStructure",
    "RateEstimate",
    # Ball probabilities
    "block_structure",
    "compositions",
    "quotient_ball_probability",
    "wilson_interval",
    # Rates
    "clique_rate",
    "empirical_rate",
    "graphon_rate",
    "rate_from_probability",
    "rate_table_csv",
]
