"""JSON shapes each stage's reply must satisfy, and the fenced-block extractor."""

from __future__ import annotations

import json
import re

import jsonschema

from ..records import CATEGORIES

EXTRACTION_SCHEMA = {
    "type": "object",
    "required": ["name", "description", "interconnection_signals"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {
            "type": "object",
            "required": ["definition", "functionality", "interconnection", "additional"],
            "additionalProperties": False,
            "properties": {
                "definition": {"type": "string"},
                "functionality": {"type": "string"},
                "interconnection": {"type": "string"},
                "additional": {"type": "string"},
            },
        },
        "interconnection_signals": {"type": "array", "items": {"type": "string", "minLength": 1}},
    },
}

MAPPING_SCHEMA = {
    "type": "object",
    "required": ["mappings"],
    "additionalProperties": False,
    "properties": {
        "mappings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["spec_name", "hdl_identifier"],
                "additionalProperties": False,
                "properties": {
                    "spec_name": {"type": "string", "minLength": 1},
                    "hdl_identifier": {"type": ["string", "null"]},
                },
            },
        }
    },
}

GENERATION_SCHEMA = {
    "type": "object",
    "required": ["signal", "assertions"],
    "additionalProperties": False,
    "properties": {
        "signal": {"type": "string", "minLength": 1},
        "assertions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["category", "sva"],
                "additionalProperties": False,
                "properties": {
                    "category": {"enum": list(CATEGORIES)},
                    "sva": {"type": "string", "minLength": 1},
                    "rationale": {"type": "string"},
                },
            },
        },
    },
}


class SchemaViolationError(ValueError):
    pass


_FENCE = re.compile(r"```[ \t]*(?:json)?[ \t]*\n(.*?)```", re.S | re.I)


def extract_json(text: str):
    """Parse the first fenced JSON block of a reply (or the whole reply if unfenced)."""
    m = _FENCE.search(text)
    body = m.group(1) if m else text.strip()
    try:
        return json.loads(body)
    except ValueError as exc:
        raise SchemaViolationError(f"reply is not valid JSON: {exc}") from exc


def validate(payload, schema: dict) -> None:
    try:
        jsonschema.validate(payload, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaViolationError(f"{where}: {exc.message}") from exc


def parse_reply(text: str, schema: dict):
    payload = extract_json(text)
    validate(payload, schema)
    return payload
