"""Monotone rearrangements, level sets and quasi-inner products."""

from .distribution import ValueDistribution, same_distribution_check, value_distribution
from .inner_product import (
    InnerProductBound,
    inner_product,
    quasi_inner_product_bounds,
    rearranged_inner_product,
)
from .monotone import annulus_graphon, are_aligned, monotone_rearrangement, top_lambda

__all__ = [
    # Types
    "InnerProductBound",
    "ValueDistribution",
    # Distributions
    "same_distribution_check",
    "value_distribution",
    # Rearrangement
    "annulus_graphon",
    "are_aligned",
    "monotone_rearrangement",
    "top_lambda",
    # Inner products
    "inner_product",
    "quasi_inner_product_bounds",
    "rearranged_inner_product",
]
