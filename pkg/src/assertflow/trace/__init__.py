"""VCD loading and clocked assertion evaluation over recorded traces."""

from .evaluate import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    VACUOUS_PASS,
    EvaluationError,
    NotAWidthAssertion,
    UnknownIdentifierError,
    UnsupportedConstructError,
    Verdict,
    check_width,
    evaluate,
    is_width_assertion,
)
from .vcd import Trace, VcdError, parse_vcd, sample

__all__ = [
    "FAIL",
    "INCONCLUSIVE",
    "PASS",
    "VACUOUS_PASS",
    "EvaluationError",
    "NotAWidthAssertion",
    "Trace",
    "UnknownIdentifierError",
    "UnsupportedConstructError",
    "VcdError",
    "Verdict",
    "check_width",
    "evaluate",
    "is_width_assertion",
    "parse_vcd",
    "sample",
]
