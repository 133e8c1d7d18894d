"""Spec-name to HDL-identifier alignment.

Deterministic tiers run first (exact, normalized, fuzzy); model proposals only
fill the slots those tiers leave unresolved.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Optional

log = logging.getLogger(__name__)

FUZZY_THRESHOLD = 0.8
NORMALIZED_CONFIDENCE = 0.9
LLM_CONFIDENCE = 0.5
METHODS = ("exact", "normalized", "fuzzy", "llm")


class MappingConflictError(ValueError):
    def __init__(self, identifier: str, spec_names):
        self.identifier = identifier
        self.spec_names = sorted(spec_names)
        super().__init__(
            f"HDL identifier '{identifier}' claimed by several spec names: {', '.join(self.spec_names)}"
        )


@dataclass(frozen=True)
class SignalMapping:
    spec_name: str
    hdl_identifier: Optional[str] = None
    method: Optional[str] = None  # None while unresolved
    confidence: float = 0.0

    @property
    def resolved(self) -> bool:
        return self.hdl_identifier is not None

    def to_dict(self) -> dict:
        return {
            "spec_name": self.spec_name,
            "hdl_identifier": self.hdl_identifier,
            "method": self.method,
            "confidence": self.confidence,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SignalMapping":
        return cls(data["spec_name"], data.get("hdl_identifier"), data.get("method"), float(data.get("confidence", 0.0)))


def normalize(name: str) -> str:
    return re.sub(r"[^0-9a-z]", "", name.lower())


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def similarity(a: str, b: str) -> float:
    """Normalized Levenshtein similarity of the normalized forms, in [0, 1]."""
    na, nb = normalize(a), normalize(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 0.0
    return 1.0 - levenshtein(na, nb) / longest


def _candidates(declarations) -> list:
    return [d.identifier for d in declarations if getattr(d, "kind", None) != "parameter"]


def match_one(spec_name: str, identifiers, threshold: float = FUZZY_THRESHOLD) -> SignalMapping:
    if spec_name in identifiers:
        return SignalMapping(spec_name, spec_name, "exact", 1.0)
    key = normalize(spec_name)
    if key:
        normalized = sorted(ident for ident in identifiers if normalize(ident) == key)
        if normalized:
            return SignalMapping(spec_name, normalized[0], "normalized", NORMALIZED_CONFIDENCE)
    best = None
    best_score = -1.0
    for ident in identifiers:
        score = similarity(spec_name, ident)
        if score > best_score or (score == best_score and ident < best):
            best, best_score = ident, score
    if best is not None and best_score >= threshold:
        return SignalMapping(spec_name, best, "fuzzy", best_score)
    return SignalMapping(spec_name)


def match_deterministic(
    spec_names: Iterable[str],
    declarations,
    threshold: float = FUZZY_THRESHOLD,
    conflicts: Optional[list] = None,
) -> list:
    """Run the deterministic tiers for every spec name.

    Two names landing on one identifier raise ``MappingConflictError``, unless
    a ``conflicts`` list is supplied: then the contested names are left
    unresolved and the errors are appended to it.
    """
    identifiers = _candidates(declarations)
    mappings = [match_one(name, identifiers, threshold) for name in spec_names]
    claims: dict = {}
    for m in mappings:
        if m.resolved:
            claims.setdefault(m.hdl_identifier, []).append(m.spec_name)
    contested = set()
    for ident, names in claims.items():
        if len(names) > 1:
            if conflicts is None:
                raise MappingConflictError(ident, names)
            conflicts.append(MappingConflictError(ident, names))
            contested.update(names)
    return [SignalMapping(m.spec_name) if m.spec_name in contested else m for m in mappings]


def merge(deterministic: list, llm_proposals, declarations, confidence: float = LLM_CONFIDENCE, warnings: Optional[list] = None) -> list:
    """Fill unresolved deterministic slots from model proposals.

    ``llm_proposals`` is an iterable of ``(spec_name, identifier)`` pairs or
    mappings.  A proposal is dropped (and noted in ``warnings``) when the
    identifier is not declared or is already taken by another spec name.
    """
    known = set(_candidates(declarations))
    proposals: dict = {}
    for item in llm_proposals:
        if isinstance(item, SignalMapping):
            name, ident = item.spec_name, item.hdl_identifier
        elif isinstance(item, dict):
            name, ident = item.get("spec_name"), item.get("hdl_identifier")
        else:
            name, ident = item
        if name is not None and ident is not None:
            proposals.setdefault(name, ident)

    used = {m.hdl_identifier for m in deterministic if m.resolved}
    merged = []
    for m in deterministic:
        if m.resolved or m.spec_name not in proposals:
            merged.append(m)
            continue
        ident = proposals[m.spec_name]
        if ident not in known:
            _warn(warnings, f"dropped proposal {m.spec_name} -> {ident}: identifier not declared")
            merged.append(m)
        elif ident in used:
            _warn(warnings, f"dropped proposal {m.spec_name} -> {ident}: identifier already mapped")
            merged.append(m)
        else:
            used.add(ident)
            merged.append(SignalMapping(m.spec_name, ident, "llm", confidence))
    return merged


def _warn(sink: Optional[list], message: str) -> None:
    log.warning(message)
    if sink is not None:
        sink.append(message)


def is_injective(mappings) -> bool:
    resolved = [m.hdl_identifier for m in mappings if m.resolved]
    return len(resolved) == len(set(resolved))


def mappings_to_json(mappings) -> str:
    return json.dumps([m.to_dict() for m in mappings], indent=2) + "\n"


def mappings_from_json(text: str) -> list:
    return [SignalMapping.from_dict(d) for d in json.loads(text)]
