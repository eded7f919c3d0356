"""
Weighted graphs and vertex partitions.

A weighted graph carries nonnegative vertex weights alpha_x and a symmetric
real edge-weight matrix beta_xy. Both arrays are frozen after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import networkx as nx
import numpy as np
from scipy.linalg import block_diag

from ..constants import FEASIBILITY_TOL
from ..exceptions import ValidationError
from ..utils.validation import validate_document


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """
    Graph G = (V, alpha, beta) with strictly positive total weight.

    Attributes:
        vertex_weights: Length-n vector of nonnegative weights alpha_x
        edge_weights: Symmetric n x n matrix beta_xy (diagonal allowed)
    """

    vertex_weights: np.ndarray
    edge_weights: np.ndarray

    def __post_init__(self) -> None:
        alpha = np.array(self.vertex_weights, dtype=float).reshape(-1)
        n = alpha.size
        if n == 0:
            raise ValidationError("Graph must have at least one vertex")
        beta = np.array(self.edge_weights, dtype=float)
        if beta.shape != (n, n):
            raise ValidationError(
                f"Edge weights must be {n}x{n}, got shape {beta.shape}"
            )
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(beta))):
            raise ValidationError("Weights must be finite")
        if np.any(alpha < 0):
            raise ValidationError("Vertex weights must be nonnegative")
        if alpha.sum() <= 0:
            raise ValidationError("Total vertex weight must be strictly positive")
        if not np.array_equal(beta, beta.T):
            raise ValidationError("Edge weights must be symmetric")
        object.__setattr__(self, "vertex_weights", _frozen(alpha))
        object.__setattr__(self, "edge_weights", _frozen(beta))

    @property
    def n(self) -> int:
        return self.vertex_weights.size

    @property
    def total_weight(self) -> float:
        """alpha_G."""
        return float(self.vertex_weights.sum())

    @property
    def max_weight(self) -> float:
        """alpha_max(G)."""
        return float(self.vertex_weights.max())

    @property
    def normalized_weights(self) -> np.ndarray:
        return self.vertex_weights / self.total_weight

    @property
    def pair_mass(self) -> np.ndarray:
        """Matrix alpha_x alpha_y beta_xy (exactly symmetric)."""
        return np.outer(self.vertex_weights, self.vertex_weights) * self.edge_weights

    def is_simple(self) -> bool:
        """Unit vertex weights, 0/1 edge weights and no self-loops."""
        beta = self.edge_weights
        return bool(
            np.all(self.vertex_weights == 1.0)
            and np.all((beta == 0.0) | (beta == 1.0))
            and np.all(np.diag(beta) == 0.0)
        )

    def edge_count(self) -> int:
        """Number of unordered pairs with nonzero edge weight, loops included."""
        return int(np.count_nonzero(np.triu(self.edge_weights)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return np.array_equal(self.vertex_weights, other.vertex_weights) and np.array_equal(
            self.edge_weights, other.edge_weights
        )

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_adjacency(
        cls, adjacency: Sequence[Sequence[float]], vertex_weights: Sequence[float] | None = None
    ) -> "WeightedGraph":
        """Build a graph from a dense matrix, unit vertex weights by default."""
        beta = np.asarray(adjacency, dtype=float)
        if vertex_weights is None:
            vertex_weights = np.ones(beta.shape[0])
        return cls(np.asarray(vertex_weights, dtype=float), beta)

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "WeightedGraph":
        """
        Build a graph from the graph JSON format.

        Absent pairs mean beta = 0; the symmetric closure is applied and a
        repeated unordered pair is rejected.

        Raises:
            ValidationError: On schema violations, bad indices or duplicates
        """
        validate_document(document, "graph")
        alpha = np.asarray(document["vertex_weights"], dtype=float)
        n = alpha.size
        beta = np.zeros((n, n))
        seen: set[tuple[int, int]] = set()
        for u, v, weight in document.get("edges", []):
            if u >= n or v >= n:
                raise ValidationError(f"Edge ({u}, {v}) references a missing vertex")
            pair = (min(u, v), max(u, v))
            if pair in seen:
                raise ValidationError(f"Duplicate edge entry {pair}")
            seen.add(pair)
            beta[u, v] = weight
            beta[v, u] = weight
        return cls(alpha, beta)

    def to_dict(self) -> dict[str, Any]:
        rows, cols = np.nonzero(np.triu(self.edge_weights))
        edges = [
            [int(u), int(v), float(self.edge_weights[u, v])] for u, v in zip(rows, cols)
        ]
        return {"vertex_weights": self.vertex_weights.tolist(), "edges": edges}

    @classmethod
    def from_networkx(cls, graph: nx.Graph, weight: str | None = "weight") -> "WeightedGraph":
        """
        Convert a networkx graph; node attribute ``alpha`` sets vertex weights.

        Nodes are taken in ``graph.nodes`` order. Missing ``weight`` edge
        attributes count as 1.
        """
        nodes = list(graph.nodes)
        beta = nx.to_numpy_array(graph, nodelist=nodes, weight=weight, dtype=float)
        alpha = [graph.nodes[v].get("alpha", 1.0) for v in nodes]
        return cls(np.asarray(alpha, dtype=float), beta)

    def to_networkx(self) -> nx.Graph:
        graph = nx.from_numpy_array(np.asarray(self.edge_weights))
        nx.set_node_attributes(
            graph, {v: float(a) for v, a in enumerate(self.vertex_weights)}, "alpha"
        )
        return graph


@dataclass(frozen=True)
class VertexPartition:
    """
    Map phi: V -> [q]; classes may be empty.

    Attributes:
        assignment: Class index per vertex
        q: Number of classes
    """

    assignment: tuple[int, ...]
    q: int

    def __post_init__(self) -> None:
        assignment = tuple(int(c) for c in self.assignment)
        if self.q < 1:
            raise ValidationError(f"Partition needs q >= 1, got {self.q}")
        if any(c < 0 or c >= self.q for c in assignment):
            raise ValidationError(f"Class indices must lie in [0, {self.q})")
        object.__setattr__(self, "assignment", assignment)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=int)

    def indicator(self) -> np.ndarray:
        """n x q one-hot matrix."""
        return np.eye(self.q)[self.as_array()] if self.n else np.zeros((0, self.q))

    def classes(self) -> list[np.ndarray]:
        labels = self.as_array()
        return [np.flatnonzero(labels == i) for i in range(self.q)]

    def class_weights(self, G: WeightedGraph) -> np.ndarray:
        """alpha_{V_i}(G) for every class."""
        check_partition(G, self)
        return np.bincount(self.as_array(), weights=G.vertex_weights, minlength=self.q)

    @classmethod
    def from_classes(cls, classes: Sequence[Sequence[int]], n: int) -> "VertexPartition":
        """Build from explicit vertex lists that must cover range(n) exactly once."""
        assignment = [-1] * n
        for index, members in enumerate(classes):
            for v in members:
                if not 0 <= v < n or assignment[v] != -1:
                    raise ValidationError(f"Vertex {v} missing from range or repeated")
                assignment[v] = index
        if -1 in assignment:
            raise ValidationError("Classes do not cover every vertex")
        return cls(tuple(assignment), max(len(classes), 1))

    @classmethod
    def single_class(cls, n: int) -> "VertexPartition":
        return cls(tuple([0] * n), 1)

    @classmethod
    def singletons(cls, n: int) -> "VertexPartition":
        return cls(tuple(range(n)), max(n, 1))

    def to_dict(self) -> dict[str, Any]:
        return {"assignment": list(self.assignment), "q": self.q}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "VertexPartition":
        return cls(tuple(document["assignment"]), int(document["q"]))


def check_partition(G: WeightedGraph, P: VertexPartition) -> None:
    """Raise ValidationError unless P assigns every vertex of G."""
    if P.n != G.n:
        raise ValidationError(f"Partition covers {P.n} vertices, graph has {G.n}")


def _check_exponent(p: float) -> None:
    if not p >= 1:
        raise ValidationError(f"Norm exponent must be >= 1 or infinity, got {p}")


def graph_norm(G: WeightedGraph, p: float = 1.0) -> float:
    """
    L^p norm of a weighted graph.

    ||G||_p = (sum_xy alpha_x alpha_y / alpha_G^2 |beta_xy|^p)^(1/p); for
    p = inf the maximum |beta_xy| over pairs with positive vertex weights.

    Raises:
        ValidationError: If p < 1
    """
    _check_exponent(p)
    if math.isinf(p):
        positive = G.vertex_weights > 0
        block = np.abs(G.edge_weights[np.ix_(positive, positive)])
        return float(block.max()) if block.size else 0.0
    w = G.normalized_weights
    total = float(np.sum(np.outer(w, w) * np.abs(G.edge_weights) ** p))
    return total ** (1.0 / p)


def scale_graph(G: WeightedGraph, c: float) -> WeightedGraph:
    """cG: same vertex weights, edge weights multiplied by c."""
    return WeightedGraph(G.vertex_weights, c * G.edge_weights)


def degrees(G: WeightedGraph) -> np.ndarray:
    """Weighted degrees deg_x = sum_y alpha_y |beta_xy|."""
    return np.abs(G.edge_weights) @ G.vertex_weights


def is_equipartition(G: WeightedGraph, P: VertexPartition) -> bool:
    """Every class weight lies within alpha_max(G) of alpha_G / q."""
    weights = P.class_weights(G)
    target = G.total_weight / P.q
    return bool(np.all(np.abs(weights - target) <= G.max_weight + FEASIBILITY_TOL))


def disjoint_union(*graphs: WeightedGraph) -> WeightedGraph:
    """Disjoint union, vertices of later graphs appended after earlier ones."""
    if not graphs:
        raise ValidationError("disjoint_union needs at least one graph")
    alpha = np.concatenate([g.vertex_weights for g in graphs])
    beta = block_diag(*[np.asarray(g.edge_weights) for g in graphs])
    return WeightedGraph(alpha, beta)
