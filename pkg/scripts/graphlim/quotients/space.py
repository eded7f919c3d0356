"""
Metric structure on quotient sets.

Quotients are compared with the l1 distance d_1 and finite quotient sets
with the Hausdorff metric. Fractional quotient sets of a step graphon are
infinite; sample_quotient_set materializes a finite net and records how far
the net may be from the full set.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import comb

from ..constants import (
    ENUMERATION_BATCH,
    MAX_GRID_POINTS,
    NEAREST_BATCH,
    REFINE_MIN_SHARE,
    REFINE_ROUNDS,
)
from ..exceptions import BudgetExceededError, ValidationError
from ..graph import Quotient
from ..graphon.step_graphon import StepGraphon, graphon_lp_norm
from ..utils.file_ops import load_document, save_json
from ..utils.rng import make_generator
from ..utils.validation import validate_document

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientSet:
    """
    Finite set of q-quotients with its generation record.

    Attributes:
        points: Distinct quotients, all with the same q
        meta: Generation record (method, mesh or samples, seed, radius bound)
    """

    points: tuple[Quotient, ...]
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        points = tuple(self.points)
        if len({p.q for p in points}) > 1:
            raise ValidationError("Quotient set mixes different q")
        object.__setattr__(self, "points", points)

    @property
    def q(self) -> int | None:
        return self.points[0].q if self.points else None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Quotient]:
        return iter(self.points)

    def __contains__(self, item: object) -> bool:
        return item in self.points

    def vectors(self) -> np.ndarray:
        """Points flattened to rows (alpha, beta.ravel())."""
        return np.array([np.concatenate([p.alpha, p.beta.ravel()]) for p in self.points])

    def to_dict(self) -> dict[str, Any]:
        return {"points": [p.to_dict() for p in self.points], "meta": dict(self.meta)}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "QuotientSet":
        validate_document(document, "quotient_set")
        return cls(
            tuple(Quotient.from_dict(p) for p in document["points"]),
            dict(document.get("meta", {})),
        )


def save_quotient_set(path: Path, points: QuotientSet) -> None:
    """Write a quotient set as JSON."""
    save_json(path, points.to_dict())


def load_quotient_set(path: Path) -> QuotientSet:
    """Read a quotient set written by save_quotient_set."""
    return QuotientSet.from_dict(load_document(path))


def d1(a: Quotient, b: Quotient) -> float:
    """
    l1 distance sum |alpha - alpha'| + sum |beta - beta'|.

    Raises:
        ValidationError: If the quotients have different q
    """
    if a.q != b.q:
        raise ValidationError(f"Cannot compare a {a.q}-quotient with a {b.q}-quotient")
    return float(np.abs(a.alpha - b.alpha).sum() + np.abs(a.beta - b.beta).sum())


def _as_set(points: QuotientSet | Iterable[Quotient]) -> QuotientSet:
    return points if isinstance(points, QuotientSet) else QuotientSet(tuple(points))


def directed_distances(A: QuotientSet, B: QuotientSet) -> tuple[float, float]:
    """(sup_a inf_b d_1, sup_b inf_a d_1)."""
    distances = cdist(A.vectors(), B.vectors(), metric="cityblock")
    return float(distances.min(axis=1).max()), float(distances.min(axis=0).max())


def hausdorff(
    A: QuotientSet | Iterable[Quotient], B: QuotientSet | Iterable[Quotient]
) -> float:
    """
    Hausdorff distance between finite quotient sets under d_1.

    Raises:
        ValidationError: If either set is empty or the q differ
    """
    A, B = _as_set(A), _as_set(B)
    if not len(A) or not len(B):
        raise ValidationError("Hausdorff distance needs nonempty sets")
    if A.q != B.q:
        raise ValidationError(f"Cannot compare {A.q}-quotients with {B.q}-quotients")
    return max(directed_distances(A, B))


def simplex_grid(q: int, parts: int) -> np.ndarray:
    """All probability vectors of length q with entries in (1/parts) Z, lexicographic."""
    bars = list(itertools.combinations(range(parts + q - 1), q - 1))
    edges = np.asarray(bars, dtype=int).reshape(len(bars), q - 1)
    edges = np.pad(edges, ((0, 0), (1, 0)), constant_values=-1)
    edges = np.pad(edges, ((0, 0), (0, 1)), constant_values=parts + q - 1)
    return (np.diff(edges, axis=1) - 1).astype(float) / parts


def net_radius(W: StepGraphon, q: int, mesh: float, norm_bound: float | None = None) -> float:
    """d_1 covering radius 2 (1 + 2 ||W||_inf) q delta of a simplex-grid net."""
    bound = graphon_lp_norm(W, math.inf) if norm_bound is None else norm_bound
    return 2.0 * (1.0 + 2.0 * bound) * q * mesh


def fractional_quotient_batch(W: StepGraphon, rhos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Class weights (b, q) and symmetrized betas (b, q, q) of a stack of b partitions."""
    masses = W.mass * W.values
    alphas = np.einsum("bkq,k->bq", rhos, W.step_lengths)
    betas = np.swapaxes(rhos, 1, 2) @ (masses @ rhos)
    return alphas, (betas + np.swapaxes(betas, 1, 2)) / 2.0


def grid_size(k: int, q: int, parts: int) -> int:
    """Number of step partitions whose rows lie on the (1/parts)-grid of the simplex."""
    return int(comb(parts + q - 1, q - 1, exact=True)) ** k


def finest_grid_parts(k: int, q: int, budget: int) -> int:
    """Largest parts >= 1 with grid_size(k, q, parts) <= budget, or 1 when none fits."""
    if q == 1 or grid_size(k, q, 1) > budget:
        return 1
    high = 2
    while grid_size(k, q, high) <= budget:
        high *= 2
    low = high // 2
    while high - low > 1:
        middle = (low + high) // 2
        if grid_size(k, q, middle) <= budget:
            low = middle
        else:
            high = middle
    return low


def grid_partitions(k: int, q: int, parts: int) -> Iterator[np.ndarray]:
    """Yield batches (b, k, q) of all grid partitions in lexicographic order."""
    rows = simplex_grid(q, parts)
    total = rows.shape[0] ** k
    powers = rows.shape[0] ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, ENUMERATION_BATCH):
        index = np.arange(start, min(start + ENUMERATION_BATCH, total), dtype=np.int64)
        yield rows[(index[:, None] // powers[None, :]) % rows.shape[0]]


def _collect(found: dict, alphas: np.ndarray, betas: np.ndarray) -> None:
    for alpha, beta in zip(alphas, betas):
        point = Quotient(alpha, beta)
        found.setdefault(point.key(), point)


def _grid_points(W: StepGraphon, q: int, parts: int) -> dict:
    found: dict = {}
    for rhos in grid_partitions(W.k, q, parts):
        _collect(found, *fractional_quotient_batch(W, rhos))
    return found


def _random_partitions(W: StepGraphon, q: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Half hard rows, half Dirichlet(1/2) rows, stacked as (samples, k, q)."""
    half = samples // 2
    hard = np.eye(q)[rng.integers(0, q, size=(half, W.k))]
    soft = rng.dirichlet(np.full(q, 0.5), size=(samples - half, W.k))
    return np.concatenate([hard, soft])


def _coordinates(W: StepGraphon, rhos: np.ndarray) -> np.ndarray:
    alphas, betas = fractional_quotient_batch(W, rhos)
    return np.concatenate([alphas, betas.reshape(betas.shape[0], -1)], axis=1)


def _nearest_gaps(candidates: np.ndarray, points: np.ndarray) -> np.ndarray:
    gaps = np.empty(candidates.shape[0])
    for start in range(0, candidates.shape[0], NEAREST_BATCH):
        block = candidates[start : start + NEAREST_BATCH]
        gaps[start : start + block.shape[0]] = cdist(block, points, metric="cityblock").min(axis=1)
    return gaps


def local_refinement(
    W: StepGraphon, rhos: np.ndarray, rounds: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Move partitions toward regions of the quotient set the net does not cover.

    Each round moves one random step of every frontier partition a random
    share of the way to a random simplex corner. Moves whose d_1 gap to the
    current net exceeds the median gap of the round are kept and become the
    next frontier, so the added count never exceeds the starting count.

    Returns:
        The kept partitions, stacked as (m, k, q)
    """
    if rhos.shape[0] == 0 or rounds <= 0:
        return rhos[:0]
    q = rhos.shape[2]
    points = _coordinates(W, rhos)
    frontier = rhos
    kept: list[np.ndarray] = []
    for _ in range(rounds):
        count = frontier.shape[0]
        index = np.arange(count)
        steps = rng.integers(0, W.k, size=count)
        corners = rng.integers(0, q, size=count)
        shares = rng.uniform(REFINE_MIN_SHARE, 1.0, size=count)
        moved = frontier.copy()
        rows = moved[index, steps] * (1.0 - shares)[:, None]
        rows[index, corners] += shares
        moved[index, steps] = rows
        candidates = _coordinates(W, moved)
        gaps = _nearest_gaps(candidates, points)
        keep = (gaps > np.median(gaps)) & (gaps > 0)
        if not keep.any():
            break
        frontier = moved[keep]
        kept.append(frontier)
        points = np.vstack([points, candidates[keep]])
    added = sum(block.shape[0] for block in kept)
    logger.debug("Local refinement kept %d moves from %d partitions", added, rhos.shape[0])
    return np.concatenate(kept) if kept else rhos[:0]


def _random_points(
    W: StepGraphon, q: int, samples: int, seed: int, refine_rounds: int
) -> tuple[dict, int]:
    rng = make_generator(seed)
    rhos = _random_partitions(W, q, samples, rng)
    moves = local_refinement(W, rhos, refine_rounds, rng)
    found: dict = {}
    for stack in (rhos, moves):
        for start in range(0, stack.shape[0], ENUMERATION_BATCH):
            _collect(found, *fractional_quotient_batch(W, stack[start : start + ENUMERATION_BATCH]))
    return found, int(moves.shape[0])


def sample_quotient_set(
    W: StepGraphon,
    q: int,
    mesh: float | None = None,
    samples: int = 0,
    seed: int = 0,
    norm_bound: float | None = None,
    refine_rounds: int = REFINE_ROUNDS,
) -> QuotientSet:
    """
    Finite net approximating the fractional quotient set of W.

    With a mesh delta every row of rho runs over the simplex grid with
    entries in (1/ceil(1/delta)) Z and the net is within d_1 distance
    2 (1 + 2 ||W||_inf) q delta of the full set. When the grid is too large
    (or no mesh is given) random hard and Dirichlet rows are drawn instead,
    followed by ``refine_rounds`` passes of local refinement, and no radius
    is certified.

    Args:
        W: Step graphon
        q: Number of classes
        mesh: Grid spacing delta
        samples: Random rho draws used when the grid is not enumerated
        seed: Seed for random draws
        norm_bound: Caller-supplied bound on ||W||_inf (defaults to the max |value|)
        refine_rounds: Local refinement passes after random draws

    Returns:
        QuotientSet with meta recording method, radius and bound source

    Raises:
        ValidationError: If neither a mesh nor samples is given
        BudgetExceededError: If the grid exceeds 10^7 points and samples = 0
    """
    if q < 1:
        raise ValidationError(f"q must be >= 1, got {q}")
    if not (mesh and mesh > 0) and samples <= 0:
        raise ValidationError("sample_quotient_set needs mesh > 0 or samples > 0")
    meta: dict[str, Any] = {
        "q": q,
        "seed": seed,
        "norm_bound": graphon_lp_norm(W, math.inf) if norm_bound is None else norm_bound,
        "norm_bound_source": "sup_norm" if norm_bound is None else "caller",
    }
    points_needed = None
    if mesh and mesh > 0:
        parts = max(1, math.ceil(1.0 / mesh - 1e-9))
        points_needed = grid_size(W.k, q, parts)
        if points_needed <= MAX_GRID_POINTS:
            found = _grid_points(W, q, parts)
            meta.update(
                method="grid",
                mesh=1.0 / parts,
                grid_size=points_needed,
                radius=net_radius(W, q, 1.0 / parts, norm_bound),
            )
            return QuotientSet(tuple(found[key] for key in sorted(found)), meta)
        if samples <= 0:
            raise BudgetExceededError(
                f"Simplex grid has {points_needed} points, more than {MAX_GRID_POINTS}",
                required=points_needed,
                budget=MAX_GRID_POINTS,
            )
        logger.info("Grid of %d points too large; sampling %d rows instead", points_needed, samples)
    found, refined = _random_points(W, q, samples, seed, refine_rounds)
    meta.update(
        method="random",
        samples=samples,
        refine_rounds=refine_rounds,
        refined=refined,
        radius=None,
        grid_size=points_needed,
    )
    return QuotientSet(tuple(found[key] for key in sorted(found)), meta)
