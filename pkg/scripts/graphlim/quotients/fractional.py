"""
Step-constant fractional partitions and fractional quotients.

A fractional q-partition rho assigns every step mu of a step graphon a
probability row rho[mu, :]. It induces class weights alpha_i = sum_mu
len_mu rho[mu, i] and the fractional quotient W/rho.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.special import entr

from ..constants import SNAP_TOL, SUM_TOL
from ..exceptions import ValidationError
from ..graph import Quotient, VertexPartition, WeightedGraph, check_partition
from ..graphon.step_graphon import StepGraphon


@dataclass(frozen=True, eq=False)
class StepFractionalPartition:
    """
    Row-stochastic k x q matrix on the steps of a graphon.

    Attributes:
        weights: rho[mu, i] in [0, 1], rows summing to 1
        step_lengths: Lengths of the k steps
    """

    weights: np.ndarray
    step_lengths: np.ndarray

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float)
        lengths = np.array(self.step_lengths, dtype=float).reshape(-1)
        if weights.ndim != 2 or weights.shape[0] != lengths.size:
            raise ValidationError(
                f"Fractional partition must be {lengths.size} x q, got {weights.shape}"
            )
        if np.any(weights < -SUM_TOL) or np.any(weights > 1 + SUM_TOL):
            raise ValidationError("Fractional partition entries must lie in [0, 1]")
        if np.any(np.abs(weights.sum(axis=1) - 1.0) > SUM_TOL):
            raise ValidationError("Fractional partition rows must sum to 1")
        weights = np.clip(weights, 0.0, 1.0)
        weights.setflags(write=False)
        lengths.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "step_lengths", lengths)

    @property
    def k(self) -> int:
        return self.weights.shape[0]

    @property
    def q(self) -> int:
        return self.weights.shape[1]

    @property
    def alpha(self) -> np.ndarray:
        """Class weights alpha_i(rho)."""
        return self.step_lengths @ self.weights

    def is_hard(self) -> bool:
        return bool(np.all((self.weights == 0.0) | (self.weights == 1.0)))

    @classmethod
    def uniform(cls, step_lengths: Sequence[float], q: int) -> "StepFractionalPartition":
        lengths = np.asarray(step_lengths, dtype=float)
        return cls(np.full((lengths.size, q), 1.0 / q), lengths)

    @classmethod
    def constant_rows(cls, step_lengths: Sequence[float], row: Sequence[float]) -> "StepFractionalPartition":
        lengths = np.asarray(step_lengths, dtype=float)
        return cls(np.tile(np.asarray(row, dtype=float), (lengths.size, 1)), lengths)

    @classmethod
    def hard(cls, step_lengths: Sequence[float], labels: Sequence[int], q: int) -> "StepFractionalPartition":
        """Rows are indicator vectors of ``labels``."""
        return cls(np.eye(q)[np.asarray(labels, dtype=int)], np.asarray(step_lengths, dtype=float))

    def to_dict(self) -> dict[str, Any]:
        return {"weights": self.weights.tolist(), "step_lengths": self.step_lengths.tolist()}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "StepFractionalPartition":
        return cls(np.asarray(document["weights"]), np.asarray(document["step_lengths"]))


def check_shapes(W: StepGraphon, rho: StepFractionalPartition) -> None:
    """Raise ValidationError unless rho lives on the steps of W."""
    if rho.k != W.k or np.any(np.abs(rho.step_lengths - W.step_lengths) > SNAP_TOL):
        raise ValidationError(
            f"Fractional partition on {rho.k} steps does not match graphon with {W.k} steps"
        )


def fractional_quotient(W: StepGraphon, rho: StepFractionalPartition) -> Quotient:
    """
    W/rho with alpha_i = sum_mu len_mu rho_mu,i and
    beta_ij = sum_{mu,nu} len_mu len_nu rho_mu,i rho_nu,j W_mu,nu.

    Raises:
        ValidationError: On a step mismatch
    """
    check_shapes(W, rho)
    beta = rho.weights.T @ (W.mass * W.values) @ rho.weights
    return Quotient(rho.alpha, (beta + beta.T) / 2.0)


def entropy(rho: StepFractionalPartition) -> float:
    """Ent(rho) = sum_mu len_mu H(rho[mu, :]), with 0 log 0 = 0."""
    return float(rho.step_lengths @ entr(rho.weights).sum(axis=1))


def fractional_distance(rho: StepFractionalPartition, other: StepFractionalPartition) -> float:
    """Step-weighted d_1(rho, rho') = sum_mu len_mu sum_i |rho_mu,i - rho'_mu,i|."""
    if rho.weights.shape != other.weights.shape:
        raise ValidationError("Fractional partitions have different shapes")
    return float(rho.step_lengths @ np.abs(rho.weights - other.weights).sum(axis=1))


def partition_to_fractional(
    G: WeightedGraph, phi: VertexPartition, blocks: VertexPartition | None = None
) -> StepFractionalPartition:
    """
    rho_phi: the fractional partition induced by a vertex map.

    Without ``blocks`` the steps are the vertices of positive weight (the
    steps of W^G) and rows are indicator vectors. With ``blocks`` the steps
    are the nonempty blocks and row C is alpha_{C cap V_i} / alpha_C.
    """
    check_partition(G, phi)
    if blocks is None:
        keep = G.vertex_weights > 0
        return StepFractionalPartition.hard(
            G.vertex_weights[keep] / G.total_weight, phi.as_array()[keep], phi.q
        )
    check_partition(G, blocks)
    joint = np.zeros((blocks.q, phi.q))
    np.add.at(joint, (blocks.as_array(), phi.as_array()), G.vertex_weights)
    block_weights = joint.sum(axis=1)
    keep = block_weights > 0
    return StepFractionalPartition(
        joint[keep] / block_weights[keep, None], block_weights[keep] / G.total_weight
    )


def average_fractional(
    rho: StepFractionalPartition, groups: Sequence[Sequence[int]]
) -> StepFractionalPartition:
    """
    rho-bar: every row replaced by the length-weighted average of its group.

    The step structure is unchanged.
    """
    flat = sorted(int(i) for group in groups for i in group)
    if flat != list(range(rho.k)):
        raise ValidationError("Groups must partition the steps")
    averaged = np.array(rho.weights)
    for group in groups:
        group = list(group)
        lengths = rho.step_lengths[group]
        averaged[group] = (lengths @ rho.weights[group]) / lengths.sum()
    return StepFractionalPartition(averaged, rho.step_lengths)


def round_fractional(
    G: WeightedGraph, rho: StepFractionalPartition, blocks: VertexPartition
) -> VertexPartition:
    """
    Round a fractional partition on the blocks of G to a vertex map.

    Inside each block C the vertices are laid out in order on [0, alpha_C]
    and vertex v gets the color whose interval of length rho[C, i] alpha_C
    contains its left endpoint. Each color is then off by less than
    alpha_max, so d_1(rho_phi, rho) <= q k alpha_max / alpha_G.

    Args:
        G: Graph
        rho: Fractional partition whose rows follow the nonempty blocks in order
        blocks: Block structure of G

    Returns:
        A q-class vertex map
    """
    check_partition(G, blocks)
    block_weights = blocks.class_weights(G)
    nonempty = np.flatnonzero(block_weights > 0)
    if rho.k != nonempty.size:
        raise ValidationError(f"Expected {nonempty.size} rows, got {rho.k}")
    assignment = np.zeros(G.n, dtype=int)
    members = blocks.classes()
    for row, block in enumerate(nonempty):
        cuts = np.cumsum(rho.weights[row]) * block_weights[block]
        start = 0.0
        for v in members[block]:
            color = int(np.searchsorted(cuts, start, side="right"))
            assignment[v] = min(color, rho.q - 1)
            start += G.vertex_weights[v]
    # zero-weight blocks carry no mass; their vertices keep color 0
    return VertexPartition(tuple(assignment.tolist()), rho.q)
