"""Regularity verdicts with re-checkable witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..constants import KIND_EQUIPARTITION, KIND_LP, KIND_UNIFORM, VERDICT_FAIL, VERDICT_NO_VIOLATION, VERDICT_PASS
from ..exceptions import ValidationError

KINDS = (KIND_LP, KIND_UNIFORM, KIND_EQUIPARTITION)
VERDICTS = (VERDICT_PASS, VERDICT_FAIL, VERDICT_NO_VIOLATION)


@dataclass(frozen=True)
class RegularityReport:
    """
    Outcome of an upper-regularity check.

    Attributes:
        kind: Lp, uniform or equipartition
        params: Check parameters (C, eta, p, K table, q)
        verdict: pass (certified by exhaustive search), fail, or
            no_violation_found (heuristic search came up empty)
        witness: Offending partition and values on fail
        searched: Number of partitions evaluated
        meta: Search record (mode, seed, budget)
    """

    kind: str
    params: dict[str, Any]
    verdict: str
    witness: dict[str, Any] | None = None
    searched: int = 0
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"Unknown report kind {self.kind!r}")
        if self.verdict not in VERDICTS:
            raise ValidationError(f"Unknown verdict {self.verdict!r}")
        if self.verdict == VERDICT_FAIL and not self.witness:
            raise ValidationError("A failing report must carry a witness")

    @property
    def certified(self) -> bool:
        """True for fail verdicts and for passes backed by exhaustive search."""
        return self.verdict in (VERDICT_PASS, VERDICT_FAIL)

    @property
    def passed(self) -> bool:
        return self.verdict != VERDICT_FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "verdict": self.verdict,
            "certified": self.certified,
            "witness": self.witness,
            "searched": self.searched,
            "meta": dict(self.meta),
        }
