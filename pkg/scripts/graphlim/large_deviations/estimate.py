"""Rate estimates and their CSV table."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

from ..constants import REPORT_TAG
from ..exceptions import ValidationError
from ..utils.formatting import format_float

RATE_COLUMNS = ["n", "eps", "probability", "rate", "stderr", "method"]


@dataclass(frozen=True)
class RateEstimate:
    """
    Finite-size large deviation rate -log P / n.

    Attributes:
        value: Rate in [0, log q], or +inf when the ball has probability 0
        n: Graph size (None for graphon rates)
        eps: Ball radius or constraint tolerance
        method: Estimation method tag
        stderr: Standard error of the probability (Monte Carlo only)
        probability: Ball probability behind the rate (None for graphon rates)
        meta: Extra diagnostics (Wilson interval, net radius, ...)
    """

    value: float
    n: int | None
    eps: float
    method: str
    stderr: float | None = None
    probability: float | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if math.isnan(self.value) or self.value < -1e-12:
            raise ValidationError(f"Rate must be nonnegative or inf, got {self.value}")
        object.__setattr__(self, "value", max(0.0, float(self.value)))

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "n": self.n,
            "eps": self.eps,
            "method": self.method,
            "stderr": self.stderr,
            "probability": self.probability,
            "meta": dict(self.meta),
        }

    def csv_row(self) -> list[str]:
        def cell(value: float | int | None) -> str:
            if value is None:
                return ""
            if isinstance(value, int):
                return str(value)
            return format_float(value)

        return [
            cell(self.n),
            cell(self.eps),
            cell(self.probability),
            cell(self.value),
            cell(self.stderr),
            self.method,
        ]


def rate_from_probability(probability: float, n: int) -> float:
    """-log P / n, +inf for P = 0."""
    if probability <= 0:
        return math.inf
    return max(0.0, -math.log(probability) / n)


def rate_table_csv(estimates: Iterable[RateEstimate]) -> str:
    """Versioned CSV with columns n, eps, probability, rate, stderr, method."""
    buffer = io.StringIO()
    buffer.write(REPORT_TAG + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RATE_COLUMNS)
    for estimate in estimates:
        writer.writerow(estimate.csv_row())
    return buffer.getvalue()
