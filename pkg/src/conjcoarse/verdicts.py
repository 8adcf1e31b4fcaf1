"""Three-valued budgeted answers for the semi-decidable checks.

Every checker that quantifies over an infinite group returns a Verdict:
Holds with a certificate, Fails with a finite independently re-checkable
witness, or Unknown carrying the exhausted budget. No checker ever
claims an unverifiable universal; "for all but a bounded set" is
operationalized as "beyond the first ``skip`` enumerated elements, with
at least ``witnesses`` independent violations needed to declare Fails".
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping, Optional


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Budget:
    """Search effort knobs shared by all checkers (and the CLI defaults)."""

    radius: int = 8
    rounds: int = 50
    skip: int = 20
    witnesses: int = 10
    cap: int = 65536

    def as_dict(self) -> dict:
        return {
            "radius": self.radius,
            "rounds": self.rounds,
            "skip": self.skip,
            "witnesses": self.witnesses,
            "cap": self.cap,
        }

    def with_(self, **kw) -> "Budget":
        return replace(self, **kw)


@dataclass(frozen=True, eq=False)
class Verdict:
    status: Status
    witnesses: tuple = ()
    certificate: Optional[Mapping] = None
    budget_used: Mapping = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def to_report(self, prop: str) -> dict:
        return {
            "property": prop,
            "status": self.status.value,
            "witnesses": list(self.witnesses),
            "certificate": _jsonable(self.certificate),
            "budget": dict(self.budget_used),
        }


def _jsonable(obj: Any):
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return items
    return repr(obj)


def holds(certificate=None, witnesses=(), budget_used=None) -> Verdict:
    return Verdict(Status.HOLDS, tuple(witnesses), certificate, budget_used or {})


def fails(witnesses, certificate=None, budget_used=None) -> Verdict:
    return Verdict(Status.FAILS, tuple(witnesses), certificate, budget_used or {})


def unknown(certificate=None, witnesses=(), budget_used=None) -> Verdict:
    return Verdict(Status.UNKNOWN, tuple(witnesses), certificate, budget_used or {})
