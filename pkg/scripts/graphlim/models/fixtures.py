"""Deterministic graph families: cliques, cycles and block-constant graphs."""

from __future__ import annotations

from typing import Sequence

import networkx as nx
import numpy as np

from ..exceptions import ValidationError
from ..graph import Quotient, WeightedGraph


def clique_plus_isolated(n: int, c_n: int) -> WeightedGraph:
    """K_{c_n} on vertices 0..c_n-1 followed by n - c_n isolated vertices."""
    if n < 1 or not 0 <= c_n <= n:
        raise ValidationError(f"Need n >= 1 and 0 <= c_n <= n, got n={n}, c_n={c_n}")
    graph = nx.disjoint_union(nx.complete_graph(c_n), nx.empty_graph(n - c_n))
    return WeightedGraph.from_networkx(graph)


def cycle_union(cycle_len: int, copies: int = 1) -> WeightedGraph:
    """Disjoint union of ``copies`` cycles of length cycle_len."""
    if cycle_len < 3:
        raise ValidationError(f"cycle_len must be >= 3, got {cycle_len}")
    if copies < 1:
        raise ValidationError(f"copies must be >= 1, got {copies}")
    graph = nx.disjoint_union_all([nx.cycle_graph(cycle_len) for _ in range(copies)])
    return WeightedGraph.from_networkx(graph)


def block_constant_graph(
    sizes: Sequence[int], B: Sequence[Sequence[float]], diagonal: bool = True
) -> WeightedGraph:
    """
    Unit-weight graph with beta_uv = b_ij for u in block i and v in block j.

    Args:
        sizes: Block sizes, laid out consecutively
        B: Symmetric block matrix
        diagonal: Keep the self-loops beta_uu = b_ii (off gives beta_uu = 0)
    """
    B = np.asarray(B, dtype=float)
    sizes = np.asarray(sizes, dtype=int)
    if B.shape != (sizes.size, sizes.size) or not np.array_equal(B, B.T):
        raise ValidationError("B must be a symmetric matrix with one row per block")
    if np.any(sizes < 1):
        raise ValidationError("Block sizes must be positive")
    labels = np.repeat(np.arange(sizes.size), sizes)
    beta = B[np.ix_(labels, labels)]
    if not diagonal:
        np.fill_diagonal(beta, 0.0)
    return WeightedGraph(np.ones(labels.size), beta)


def clique_quotient(
    n: int, c_n: int, a_counts: Sequence[int], b_counts: Sequence[int]
) -> Quotient:
    """
    Quotient of clique_plus_isolated(n, c_n) under a map with a_i clique
    vertices and b_i isolated vertices in class i.

    Raises:
        ValidationError: If the counts do not add up to c_n and n - c_n
    """
    a = np.asarray(a_counts, dtype=float)
    b = np.asarray(b_counts, dtype=float)
    if a.shape != b.shape or a.size == 0 or np.any(a < 0) or np.any(b < 0):
        raise ValidationError("a_counts and b_counts must be nonnegative lists of equal length")
    if a.sum() != c_n or a.sum() + b.sum() != n:
        raise ValidationError(f"Counts must cover the {c_n} clique and {n - c_n} isolated vertices")
    alpha = (a + b) / n
    if c_n < 2:
        return Quotient(alpha, np.zeros((a.size, a.size)))
    edges = np.outer(a, a) - np.diag(a)
    return Quotient(alpha, edges / (c_n * (c_n - 1)))
