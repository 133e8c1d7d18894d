"""Load natural-language design specifications and classify their sections."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

SECTION_KINDS = (
    "introduction",
    "io_ports",
    "registers",
    "operation",
    "architecture",
    "usage_examples",
    "other",
)

# First matching rule wins.
_RULES = (
    ("introduction", ("introduction", "overview", "feature")),
    ("io_ports", ("io", "i/o", "port", "interface", "pin")),
    ("registers", ("register",)),
    ("operation", ("operation", "protocol", "timing")),
    ("architecture", ("architecture", "structure", "block")),
    ("usage_examples", ("example", "usage", "waveform")),
)
_RULE_PATTERNS = tuple(
    (kind, re.compile(r"(?<![a-z0-9_])(?:" + "|".join(re.escape(w) for w in words) + r")s?(?![a-z0-9_])"))
    for kind, words in _RULES
)

_MARKDOWN_HEADING = re.compile(r"^#{1,4}\s+\S")
_NUMBERED_HEADING = re.compile(r"^\d+(\.\d+)*\s+\S")


class SpecError(Exception):
    pass


class SpecIOError(SpecError, OSError):
    pass


class SpecEncodingError(SpecError, UnicodeError):
    pass


class EmptyDocumentError(SpecError, ValueError):
    pass


@dataclass(frozen=True)
class SpecSection:
    heading: str
    raw_text: str
    kind: str


@dataclass(frozen=True)
class DesignSpec:
    design_name: str
    sections: tuple
    source_path: Optional[Path] = None

    @property
    def text(self) -> str:
        return "".join(s.raw_text for s in self.sections)

    def sections_of(self, *kinds: str) -> list:
        return [s for s in self.sections if s.kind in kinds]

    def kinds(self) -> set:
        return {s.kind for s in self.sections}


def classify_section(heading: str) -> str:
    """Map a heading to one of the six specification section kinds, or ``other``."""
    lowered = heading.lower()
    for kind, pattern in _RULE_PATTERNS:
        if pattern.search(lowered):
            return kind
    return "other"


def _heading_text(line: str, markdown: bool) -> str:
    line = line.strip()
    return line.lstrip("#").strip() if markdown else line


def split_sections(text: str, markdown: bool) -> tuple:
    pattern = _MARKDOWN_HEADING if markdown else _NUMBERED_HEADING
    sections = []
    heading = None
    chunk: list = []
    for line in text.splitlines(keepends=True):
        if pattern.match(line):
            if chunk:
                sections.append((heading, "".join(chunk)))
            heading = _heading_text(line, markdown)
            chunk = [line]
        else:
            chunk.append(line)
    if chunk:
        sections.append((heading, "".join(chunk)))
    return tuple(
        SpecSection(heading or "", raw, classify_section(heading) if heading else "other")
        for heading, raw in sections
    )


def parse_spec_text(text: str, design_name: str, markdown: bool = True, source_path: Optional[Path] = None) -> DesignSpec:
    if not text.strip():
        raise EmptyDocumentError(f"specification {source_path or design_name} is empty")
    return DesignSpec(design_name, split_sections(text, markdown), source_path)


def load_spec(path, design_name: Optional[str] = None) -> DesignSpec:
    """Read a UTF-8 ``.md``/``.txt`` specification and split it into classified sections.

    Markdown files split at ``#``-``####`` headings; other files split at
    numbered headings such as ``2.1 Registers``.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise SpecIOError(f"cannot read specification {path}: {exc}") from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SpecEncodingError(f"{path} is not valid UTF-8: {exc}") from exc
    if path.suffix.lower() in (".md", ".markdown"):
        markdown = True
    elif path.suffix.lower() == ".txt":
        markdown = False
    else:
        markdown = any(_MARKDOWN_HEADING.match(line) for line in text.splitlines())
    return parse_spec_text(text, design_name or path.stem, markdown, path)
