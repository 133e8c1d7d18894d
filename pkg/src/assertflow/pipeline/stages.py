"""The three model-driven stages, the unmapped-signal filter and the end-to-end run."""

from __future__ import annotations

import json
import logging
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .. import signal_map
from ..llm import ChatRequest
from ..records import CATEGORIES, GENERATED, UNMAPPED_FILTERED, AssertionRecord
from ..spec_ingest import DesignSpec
from ..sva import SvaError, parse_sva, pretty_print, scan_identifiers
from ..verilog_decl import format_declarations
from .knowledge import TOP_K, KnowledgeBase
from .prompts import render
from .schemas import (
    EXTRACTION_SCHEMA,
    GENERATION_SCHEMA,
    MAPPING_SCHEMA,
    SchemaViolationError,
    parse_reply,
)

log = logging.getLogger(__name__)

SPEC_ATTACHMENT = "specification.md"
HDL_ATTACHMENT = "signal_definition.v"


class PipelineError(RuntimeError):
    pass


class PreconditionError(PipelineError, ValueError):
    pass


@dataclass(frozen=True)
class SignalExtraction:
    name: str
    definition: str = ""
    functionality: str = ""
    interconnection: str = ""
    additional: str = ""
    interconnection_signals: tuple = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("extraction name must be non-empty")
        for other in self.interconnection_signals:
            if other not in self.interconnection and other not in self.functionality:
                raise ValueError(f"interconnection signal {other!r} is not mentioned in the description of {self.name}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": {
                "definition": self.definition,
                "functionality": self.functionality,
                "interconnection": self.interconnection,
                "additional": self.additional,
            },
            "interconnection_signals": list(self.interconnection_signals),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SignalExtraction":
        d = data["description"]
        return cls(
            data["name"],
            d["definition"],
            d["functionality"],
            d["interconnection"],
            d["additional"],
            tuple(data["interconnection_signals"]),
        )


@dataclass(frozen=True)
class GeneratedAssertion:
    target_signal: str
    category: str
    sva_text: str
    rationale: str = ""
    transcript_ref: Optional[str] = None

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown assertion category {self.category!r}")


@dataclass
class PipelineRun:
    design: DesignSpec
    extractions: list = field(default_factory=list)
    mappings: list = field(default_factory=list)
    assertions: list = field(default_factory=list)
    transcript_refs: dict = field(default_factory=dict)  # "stage:signal" -> request key
    errors: list = field(default_factory=list)  # {"signal", "stage", "error"}
    warnings: list = field(default_factory=list)

    def kept(self) -> list:
        return [a for a in self.assertions if a.status != UNMAPPED_FILTERED]

    def filtered(self) -> list:
        return [a for a in self.assertions if a.status == UNMAPPED_FILTERED]

    def to_dict(self) -> dict:
        return {
            "schema": "assertflow.run/1",
            "design": self.design.design_name,
            "extractions": [e.to_dict() for e in self.extractions],
            "mappings": [m.to_dict() for m in self.mappings],
            "assertions": [a.to_dict() for a in self.assertions],
            "transcript_refs": dict(sorted(self.transcript_refs.items())),
            "errors": list(self.errors),
            "warnings": list(self.warnings),
        }


def _ask(backend, request: ChatRequest, schema: dict, task: dict, check=None):
    """Send a request; on an unusable reply, ask once for a reformatted one."""
    response = backend.complete(request)
    try:
        payload = parse_reply(response.text, schema)
        if check:
            check(payload)
        return payload, response.request_key
    except (SchemaViolationError, ValueError) as exc:
        first_error = str(exc)
    _, retry_text = render("reformat", task, error=first_error)
    retry = request.followup(response.text, retry_text)
    response = backend.complete(retry)
    try:
        payload = parse_reply(response.text, schema)
        if check:
            check(payload)
    except (SchemaViolationError, ValueError) as exc:
        raise SchemaViolationError(f"reply still invalid after reformat request: {exc}") from exc
    return payload, response.request_key


def _section_hints(design: DesignSpec) -> str:
    lines = [f"- {s.heading} ({s.kind})" for s in design.sections if s.heading]
    return "\n".join(lines) or "- (no headings)"


def analyzer_request(design: DesignSpec, signal: str, known_signals) -> tuple:
    task = {"stage": "spec_analyzer", "signal": signal, "known_signals": list(known_signals)}
    system, user = render(
        "spec_analyzer",
        task,
        signal=signal,
        section_hints=_section_hints(design),
        known_signals=", ".join(known_signals),
        schema=json.dumps(EXTRACTION_SCHEMA, indent=2),
    )
    return ChatRequest(system, (("user", user),), ((SPEC_ATTACHMENT, design.text),)), task


def analyze_signal(design: DesignSpec, signal: str, known_signals, backend) -> tuple:
    request, task = analyzer_request(design, signal, known_signals)

    def check(payload):
        if payload["name"] != signal:
            raise SchemaViolationError(f"reply describes {payload['name']!r}, expected {signal!r}")
        SignalExtraction.from_dict(payload)

    payload, key = _ask(backend, request, EXTRACTION_SCHEMA, task, check)
    return SignalExtraction.from_dict(payload), key


def run_spec_analyzer(design: DesignSpec, signal_names, backend, workers: int = 1) -> list:
    signal_names = list(signal_names)
    if not signal_names:
        raise PreconditionError("no signals requested")
    results = _map_ordered(lambda s: analyze_signal(design, s, signal_names, backend)[0], signal_names, workers)
    return results


def mapper_request(design: DesignSpec, declarations, spec_names) -> tuple:
    task = {"stage": "signal_mapper", "spec_names": list(spec_names)}
    system, user = render(
        "signal_mapper",
        task,
        spec_names="\n".join(f"- {n}" for n in spec_names),
        schema=json.dumps(MAPPING_SCHEMA, indent=2),
    )
    attachments = ((SPEC_ATTACHMENT, design.text), (HDL_ATTACHMENT, format_declarations(declarations)))
    return ChatRequest(system, (("user", user),), attachments), task


def run_signal_mapper(
    design: DesignSpec,
    declarations,
    extractions,
    backend,
    threshold: float = signal_map.FUZZY_THRESHOLD,
    llm_confidence: float = signal_map.LLM_CONFIDENCE,
    warnings: Optional[list] = None,
    conflicts: Optional[list] = None,
    refs: Optional[dict] = None,
) -> list:
    """Deterministic matching first; the model is only asked about what is left.

    When every name resolves deterministically no request is sent.
    """
    names = [e.name if isinstance(e, SignalExtraction) else e for e in extractions]
    deterministic = signal_map.match_deterministic(names, declarations, threshold, conflicts)
    pending = [m.spec_name for m in deterministic if not m.resolved]
    if not pending:
        return deterministic
    request, task = mapper_request(design, declarations, pending)
    payload, key = _ask(backend, request, MAPPING_SCHEMA, task)
    if refs is not None:
        refs["signal_mapper"] = key
    return signal_map.merge(deterministic, payload["mappings"], declarations, llm_confidence, warnings)


def _mapping_rows(extraction: SignalExtraction, mappings, declarations) -> list:
    by_name = {m.spec_name: m for m in mappings}
    decl = {d.identifier: d for d in declarations}
    rows = []
    for name in (extraction.name, *extraction.interconnection_signals):
        m = by_name.get(name)
        if m is None or not m.resolved:
            continue
        d = decl.get(m.hdl_identifier)
        rows.append(
            {
                "spec_name": name,
                "hdl_identifier": m.hdl_identifier,
                "width": d.width_bits if d else None,
                "direction": d.direction if d else None,
                "kind": d.kind if d else None,
                "comment": d.comment if d else "",
            }
        )
    return rows


def retrieval_query(extraction: SignalExtraction) -> str:
    return f"{extraction.name} {extraction.definition} {extraction.functionality}"


def generator_request(
    extraction: SignalExtraction,
    mappings,
    kb: Optional[KnowledgeBase],
    declarations=(),
    clock: Optional[str] = None,
    reset: Optional[str] = None,
    architecture: str = "",
    top_k: int = TOP_K,
) -> tuple:
    rows = _mapping_rows(extraction, mappings, declarations)
    if not rows or rows[0]["spec_name"] != extraction.name:
        raise PreconditionError(f"signal {extraction.name} has no resolved mapping")
    target = rows[0]
    task = {
        "stage": "sva_generator",
        "signal": extraction.name,
        "hdl_identifier": target["hdl_identifier"],
        "width": target["width"],
        "clock": clock,
        "related_identifiers": [r["hdl_identifier"] for r in rows[1:]],
    }
    system, user = render(
        "sva_generator",
        task,
        signal=extraction.name,
        hdl_identifier=target["hdl_identifier"],
        width=target["width"] if target["width"] is not None else "unknown",
        clock=clock or "(unknown)",
        reset=f"`{reset}`" if reset else "(none given)",
        schema=json.dumps(GENERATION_SCHEMA, indent=2),
    )
    attachments = [
        ("extraction.json", json.dumps(extraction.to_dict(), indent=2)),
        ("mapping_table.json", json.dumps(rows, indent=2)),
    ]
    if kb is not None and len(kb):
        passages = kb.retrieve(retrieval_query(extraction), top_k)
        notes = "\n\n".join(f"[{p.doc_id} #{p.index}]\n{p.text}" for p in passages)
        attachments.append(("sva_notes.md", notes))
    if architecture:
        attachments.append(("architecture.md", architecture))
    return ChatRequest(system, (("user", user),), tuple(attachments)), task


def run_sva_generator(
    extraction: SignalExtraction,
    mappings,
    kb: Optional[KnowledgeBase],
    backend,
    declarations=(),
    clock: Optional[str] = None,
    reset: Optional[str] = None,
    architecture: str = "",
) -> list:
    request, task = generator_request(extraction, mappings, kb, declarations, clock, reset, architecture)

    def check(payload):
        if payload["signal"] != extraction.name:
            raise SchemaViolationError(f"reply targets {payload['signal']!r}, expected {extraction.name!r}")

    payload, key = _ask(backend, request, GENERATION_SCHEMA, task, check)
    return [
        GeneratedAssertion(extraction.name, a["category"], a["sva"], a.get("rationale", ""), key)
        for a in payload["assertions"]
    ]


def filter_unmapped(assertions, mappings, declarations, start: int = 0) -> tuple:
    """Split generated assertions into (kept, filtered) records.

    An assertion is filtered when it names an identifier that is neither
    declared nor the target of a resolved mapping.  Unparseable assertions are
    kept so they count against syntax instead.
    """
    known = {d.identifier for d in declarations} | {m.hdl_identifier for m in mappings if m.resolved}
    kept, filtered = [], []
    counters: dict = {}
    for a in assertions:
        counters[a.target_signal] = counters.get(a.target_signal, start) + 1
        record = AssertionRecord(
            id=f"{a.target_signal}-{counters[a.target_signal]:02d}",
            target_signal=a.target_signal,
            category=a.category,
            sva_text=a.sva_text.strip(),
            rationale=a.rationale,
            transcript_ref=a.transcript_ref,
        )
        try:
            tree = parse_sva(a.sva_text)
        except SvaError:
            kept.append(record)
            continue
        record.sva_text = pretty_print(tree)
        unknown = sorted(scan_identifiers(tree) - known)
        if unknown:
            record.advance(UNMAPPED_FILTERED, "unknown identifiers: " + ", ".join(unknown))
            filtered.append(record)
        else:
            kept.append(record)
    return kept, filtered


def _map_ordered(fn, items, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def discover_signals(design: DesignSpec, declarations) -> list:
    """Declared names mentioned in the IO-port and register sections, in order of mention."""
    declared = {d.identifier for d in declarations if d.kind != "parameter"}
    found: list = []
    for section in design.sections_of("io_ports", "registers"):
        for word in _WORD.findall(section.raw_text):
            if word in declared and word not in found:
                found.append(word)
    return found


def guess_clock(declarations) -> Optional[str]:
    for d in declarations:
        if d.direction == "input" and d.width_bits == 1 and re.search(r"cl(oc)?k", d.identifier, re.I):
            return d.identifier
    return None


def run_full(
    design: DesignSpec,
    declarations,
    kb: Optional[KnowledgeBase],
    backend,
    signal_names=None,
    clock: Optional[str] = None,
    reset: Optional[str] = None,
    workers: int = 1,
    threshold: float = signal_map.FUZZY_THRESHOLD,
    llm_confidence: float = signal_map.LLM_CONFIDENCE,
) -> PipelineRun:
    run = PipelineRun(design)
    lock = threading.Lock()
    names = list(signal_names) if signal_names is not None else discover_signals(design, declarations)
    if not names:
        raise PreconditionError("no signals to process")
    clock = clock or guess_clock(declarations)
    if kb is None or not len(kb):
        run.warnings.append("knowledge base is empty; retrieval skipped")
        log.warning(run.warnings[-1])
    architecture = "".join(s.raw_text for s in design.sections_of("architecture"))

    def note_error(signal, stage, exc):
        with lock:
            run.errors.append({"signal": signal, "stage": stage, "error": f"{type(exc).__name__}: {exc}"})

    def stage1(name):
        try:
            extraction, key = analyze_signal(design, name, names, backend)
        except Exception as exc:  # contained per signal
            note_error(name, "spec_analyzer", exc)
            return None
        with lock:
            run.transcript_refs[f"spec_analyzer:{name}"] = key
        return extraction

    run.extractions = [e for e in _map_ordered(stage1, names, workers) if e is not None]

    conflicts: list = []
    refs: dict = {}
    try:
        run.mappings = run_signal_mapper(
            design, declarations, run.extractions, backend, threshold, llm_confidence, run.warnings, conflicts, refs
        )
    except Exception as exc:
        note_error(None, "signal_mapper", exc)
        run.mappings = signal_map.match_deterministic(
            [e.name for e in run.extractions], declarations, threshold, conflicts=[]
        )
    for conflict in conflicts:
        for name in conflict.spec_names:
            note_error(name, "signal_mapper", conflict)
    run.transcript_refs.update(refs)

    resolved = {m.spec_name for m in run.mappings if m.resolved}
    for e in run.extractions:
        if e.name not in resolved:
            run.warnings.append(f"signal {e.name} has no HDL mapping; generation skipped")

    def stage3(extraction):
        if extraction.name not in resolved:
            return []
        try:
            generated = run_sva_generator(
                extraction, run.mappings, kb, backend, declarations, clock, reset, architecture
            )
        except Exception as exc:
            note_error(extraction.name, "sva_generator", exc)
            return []
        if generated:
            with lock:
                run.transcript_refs[f"sva_generator:{extraction.name}"] = generated[0].transcript_ref
        return generated

    generated = [a for batch in _map_ordered(stage3, run.extractions, workers) for a in batch]
    kept, filtered = filter_unmapped(generated, run.mappings, declarations)
    run.assertions = _interleave(generated, kept, filtered)
    run.errors.sort(key=lambda e: (e["signal"] or "", e["stage"]))
    return run


def _interleave(generated, kept, filtered) -> list:
    """Records in generation order regardless of which partition they fell in."""
    by_id = {r.id: r for r in kept + filtered}
    counters: dict = {}
    ordered = []
    for a in generated:
        counters[a.target_signal] = counters.get(a.target_signal, 0) + 1
        ordered.append(by_id[f"{a.target_signal}-{counters[a.target_signal]:02d}"])
    return ordered


__all__ = [
    "GENERATED",
    "GeneratedAssertion",
    "PipelineError",
    "PipelineRun",
    "PreconditionError",
    "SignalExtraction",
    "analyze_signal",
    "discover_signals",
    "filter_unmapped",
    "run_full",
    "run_signal_mapper",
    "run_spec_analyzer",
    "run_sva_generator",
]
