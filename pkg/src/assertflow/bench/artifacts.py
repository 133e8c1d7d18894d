"""JSON Schemas for the files ``bench`` writes (report.json, run.json, mappings.json)."""

from __future__ import annotations

import jsonschema

from ..records import CATEGORIES, STATUSES

_COUNT = {"type": "integer", "minimum": 0}
_CELL = {
    "type": "object",
    "required": ["generated", "syntax_correct", "pass"],
    "properties": {"generated": _COUNT, "syntax_correct": _COUNT, "pass": _COUNT},
    "additionalProperties": False,
}
_PERCENT = {"type": "string", "pattern": r"^(\d{1,3}%|—|n-a)$"}
_ERROR = {
    "type": "object",
    "required": ["signal", "stage", "error"],
    "properties": {
        "signal": {"type": ["string", "null"]},
        "stage": {"type": ["string", "null"]},
        "error": {"type": "string"},
    },
}

REPORT_JSON_SCHEMA = {
    "type": "object",
    "required": ["schema", "design", "traces_present", "include_vacuous", "unmapped_signals", "errors", "warnings", "rows", "summary"],
    "properties": {
        "schema": {"const": "assertflow.report/1"},
        "design": {"type": "string"},
        "traces_present": {"type": "boolean"},
        "include_vacuous": {"type": "boolean"},
        "unmapped_signals": {"type": "array", "items": {"type": "string"}},
        "errors": {"type": "array", "items": _ERROR},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "type", "function", "counts"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "type": {"enum": ["io_port", "register", "other"]},
                    "function": {"type": "string"},
                    "counts": {
                        "type": "object",
                        "required": list(CATEGORIES),
                        "additionalProperties": False,
                        "properties": {
                            c: {
                                "type": "object",
                                "required": list(STATUSES),
                                "additionalProperties": False,
                                "properties": {s: _COUNT for s in STATUSES},
                            }
                            for c in CATEGORIES
                        },
                    },
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["categories", "total", "syntax_percent", "pass_percent", "excluded"],
            "properties": {
                "categories": {
                    "type": "object",
                    "required": list(CATEGORIES),
                    "properties": {c: _CELL for c in CATEGORIES},
                },
                "total": _CELL,
                "syntax_percent": _PERCENT,
                "pass_percent": _PERCENT,
                "excluded": {
                    "type": "object",
                    "required": ["unmapped", "vacuous", "inconclusive"],
                    "properties": {"unmapped": _COUNT, "vacuous": _COUNT, "inconclusive": _COUNT},
                },
            },
        },
    },
}

MAPPING_ENTRY_SCHEMA = {
    "type": "object",
    "required": ["spec_name", "hdl_identifier", "method", "confidence"],
    "properties": {
        "spec_name": {"type": "string"},
        "hdl_identifier": {"type": ["string", "null"]},
        "method": {"enum": ["exact", "normalized", "fuzzy", "llm", None]},
        "confidence": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "additionalProperties": False,
}

MAPPINGS_JSON_SCHEMA = {"type": "array", "items": MAPPING_ENTRY_SCHEMA}

RECORD_SCHEMA = {
    "type": "object",
    "required": ["id", "target_signal", "category", "sva_text", "status", "history"],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "target_signal": {"type": "string"},
        "category": {"enum": list(CATEGORIES)},
        "sva_text": {"type": "string"},
        "status": {"enum": list(STATUSES)},
        "rationale": {"type": "string"},
        "verdict": {"type": ["object", "null"]},
        "detail": {"type": "string"},
        "transcript_ref": {"type": ["string", "null"]},
        "history": {"type": "array", "items": {"enum": list(STATUSES)}, "minItems": 1},
    },
}

RUN_JSON_SCHEMA = {
    "type": "object",
    "required": ["schema", "design", "extractions", "mappings", "assertions", "transcript_refs", "errors", "warnings"],
    "properties": {
        "schema": {"const": "assertflow.run/1"},
        "design": {"type": "string"},
        "extractions": {"type": "array", "items": {"type": "object", "required": ["name", "description", "interconnection_signals"]}},
        "mappings": MAPPINGS_JSON_SCHEMA,
        "assertions": {"type": "array", "items": RECORD_SCHEMA},
        "transcript_refs": {"type": "object", "additionalProperties": {"type": "string", "pattern": "^[0-9a-f]{64}$"}},
        "errors": {"type": "array", "items": _ERROR},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}


def validate_artifact(data, schema: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``data`` does not fit ``schema``."""
    jsonschema.validate(data, schema)
