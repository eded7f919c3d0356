"""Coupling models and energy results."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..constants import SCHEMA_SUM_TOL
from ..exceptions import ValidationError
from ..utils.validation import validate_document


@dataclass(frozen=True, eq=False)
class CouplingModel:
    """
    Spin model parameters.

    Attributes:
        J: Symmetric q x q coupling matrix
        h: Magnetic field (defaults to zero)
        a: Target class weights in the simplex (defaults to uniform)
        eps: Slack on |alpha_i - a_i|
    """

    J: np.ndarray
    h: np.ndarray | None = None
    a: np.ndarray | None = None
    eps: float = 0.0

    def __post_init__(self) -> None:
        J = np.array(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] == 0:
            raise ValidationError(f"J must be a nonempty square matrix, got shape {J.shape}")
        if not np.array_equal(J, J.T):
            raise ValidationError("J must be symmetric")
        q = J.shape[0]
        h = np.zeros(q) if self.h is None else np.array(self.h, dtype=float).reshape(-1)
        a = np.full(q, 1.0 / q) if self.a is None else np.array(self.a, dtype=float).reshape(-1)
        if h.size != q or a.size != q:
            raise ValidationError(f"h and a must have length q={q}")
        if np.any(a < 0) or abs(a.sum() - 1.0) > SCHEMA_SUM_TOL:
            raise ValidationError("a must lie in the simplex")
        if self.eps < 0:
            raise ValidationError("eps must be nonnegative")
        a = a / a.sum()
        for array in (J, h, a):
            array.setflags(write=False)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "eps", float(self.eps))

    @property
    def q(self) -> int:
        return self.J.shape[0]

    @property
    def j_sup(self) -> float:
        """||J||_inf = max |J_ij|."""
        return float(np.abs(self.J).max())

    @property
    def j_l1(self) -> float:
        """||J||_1 = sum |J_ij|."""
        return float(np.abs(self.J).sum())

    def to_dict(self) -> dict[str, Any]:
        return {"J": self.J.tolist(), "h": self.h.tolist(), "a": self.a.tolist(), "eps": self.eps}

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "CouplingModel":
        validate_document(document, "model")
        return cls(
            np.asarray(document["J"], dtype=float),
            document.get("h"),
            document.get("a"),
            float(document.get("eps", 0.0)),
        )


@dataclass(frozen=True)
class EnergyResult:
    """
    Value of an energy optimization.

    exact_flag is true only for full enumeration or closed forms.
    """

    value: float
    optimizer: Any = None
    exact_flag: bool = False
    method: str = ""
    meta: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "method": self.method,
            "exact_flag": self.exact_flag,
            "optimizer": self.optimizer.to_dict() if self.optimizer is not None else None,
            "meta": dict(self.meta),
        }
