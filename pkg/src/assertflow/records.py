"""Assertion records and their lifecycle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

CATEGORIES = ("width", "connectivity", "function")

GENERATED = "generated"
UNMAPPED_FILTERED = "unmapped_filtered"
SYNTAX_ERROR = "syntax_error"
SUBSET_VIOLATION = "subset_violation"
SYNTAX_OK = "syntax_ok"
TRACE_PASS = "trace_pass"
TRACE_FAIL = "trace_fail"
VACUOUS = "vacuous"
INCONCLUSIVE = "inconclusive"

STATUSES = (
    GENERATED,
    UNMAPPED_FILTERED,
    SYNTAX_ERROR,
    SUBSET_VIOLATION,
    SYNTAX_OK,
    TRACE_PASS,
    TRACE_FAIL,
    VACUOUS,
    INCONCLUSIVE,
)

TRANSITIONS = {
    GENERATED: (UNMAPPED_FILTERED, SYNTAX_ERROR, SUBSET_VIOLATION, SYNTAX_OK),
    SYNTAX_OK: (TRACE_PASS, TRACE_FAIL, VACUOUS, INCONCLUSIVE),
}

# Statuses that count as syntactically correct.
SYNTAX_CORRECT = (SYNTAX_OK, TRACE_PASS, TRACE_FAIL, VACUOUS, INCONCLUSIVE)


class StatusTransitionError(ValueError):
    pass


@dataclass
class AssertionRecord:
    id: str
    target_signal: str
    category: str
    sva_text: str
    status: str = GENERATED
    rationale: str = ""
    verdict: Optional[dict] = None
    detail: str = ""
    transcript_ref: Optional[str] = None
    history: list = field(default_factory=lambda: [GENERATED])

    def advance(self, status: str, detail: str = "") -> None:
        if status not in TRANSITIONS.get(self.status, ()):
            raise StatusTransitionError(f"{self.id}: cannot move from {self.status} to {status}")
        self.status = status
        self.history.append(status)
        if detail:
            self.detail = detail

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "target_signal": self.target_signal,
            "category": self.category,
            "sva_text": self.sva_text,
            "status": self.status,
            "rationale": self.rationale,
            "verdict": self.verdict,
            "detail": self.detail,
            "transcript_ref": self.transcript_ref,
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssertionRecord":
        return cls(
            id=data["id"],
            target_signal=data["target_signal"],
            category=data["category"],
            sva_text=data["sva_text"],
            status=data.get("status", GENERATED),
            rationale=data.get("rationale", ""),
            verdict=data.get("verdict"),
            detail=data.get("detail", ""),
            transcript_ref=data.get("transcript_ref"),
            history=list(data.get("history", [data.get("status", GENERATED)])),
        )


def valid_history(history) -> bool:
    if not history or history[0] != GENERATED:
        return False
    return all(b in TRANSITIONS.get(a, ()) for a, b in zip(history, history[1:]))
