import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assertflow.bench import load_benchmark
from assertflow.llm import ChatRequest, ChatResponse, MockBackend, ReplayBackend, TranscriptStore, task_of
from assertflow.pipeline import (
    GeneratedAssertion,
    KnowledgeBase,
    PreconditionError,
    SchemaViolationError,
    SignalExtraction,
    filter_unmapped,
    run_full,
    run_signal_mapper,
    run_spec_analyzer,
    run_sva_generator,
)
from assertflow.pipeline.knowledge import chunk
from assertflow.pipeline.prompts import STAGES, load_template, render
from assertflow.pipeline.schemas import EXTRACTION_SCHEMA, GENERATION_SCHEMA, MAPPING_SCHEMA, validate
from assertflow.pipeline.stages import analyzer_request, generator_request, mapper_request
from assertflow.records import UNMAPPED_FILTERED
from assertflow.signal_map import SignalMapping
from assertflow.spec_ingest import load_spec, parse_spec_text
from assertflow.verilog_decl import SignalDeclaration

from oracles import bm25_rank

FIXTURE = Path(__file__).parent.parent / "fixtures" / "i2c"
DESIGN = load_benchmark(FIXTURE)
SPEC = load_spec(DESIGN.spec_path, DESIGN.design_name)
DECLS = DESIGN.declarations()
KB = KnowledgeBase.load(DESIGN.kb_dir)


def replay():
    return ReplayBackend(TranscriptStore(DESIGN.transcripts_dir))


def fixture_run(backend=None):
    return run_full(
        SPEC,
        DECLS,
        KB,
        backend or replay(),
        signal_names=[s.name for s in DESIGN.signals],
        clock=DESIGN.clock,
        reset=DESIGN.reset,
    )


class Scripted:
    """Backend that returns canned replies in order and keeps the requests."""

    backend_id = "scripted"

    def __init__(self, *replies):
        self.replies = list(replies)
        self.requests = []

    def complete(self, request):
        self.requests.append(request)
        return ChatResponse(self.replies.pop(0), self.backend_id, request.request_key)


def fenced(payload):
    return "```json\n" + json.dumps(payload) + "\n```"


# prompts


@pytest.mark.parametrize("name", STAGES + ("reformat",))
def test_templates_carry_task_line(name):
    system, user = render(name, {"stage": name}, signal="s", hdl_identifier="s", width=1, clock="clk", reset="r",
                          section_hints="", known_signals="", spec_names="", schema="{}", error="e")
    assert "$" not in user.replace("$bits", "").replace("$rose", "").replace("$fell", "").replace("$stable", "").replace("$past", "").replace("$onehot", "")
    req = ChatRequest(system, (("user", user),))
    assert task_of(req) == {"stage": name}
    if name in STAGES:
        assert load_template(name).system.strip()


def test_stage_inputs_are_isolated():
    analyzer, _ = analyzer_request(SPEC, "ctr", ["ctr", "prer"])
    assert [a[0] for a in analyzer.attachments] == ["specification.md"]
    mapper, _ = mapper_request(SPEC, DECLS, ["ghost"])
    assert [a[0] for a in mapper.attachments] == ["specification.md", "signal_definition.v"]
    extraction = SignalExtraction("ctr", "control register", "enables the core", "")
    mappings = [SignalMapping("ctr", "ctr", "exact", 1.0)]
    gen, task = generator_request(extraction, mappings, KB, DECLS, "wb_clk_i")
    names = [a[0] for a in gen.attachments]
    assert "specification.md" not in names and "signal_definition.v" not in names
    assert names[:3] == ["extraction.json", "mapping_table.json", "sva_notes.md"]
    assert task["width"] == 8 and task["clock"] == "wb_clk_i"
    assert not any("prescale" in text for _, text in gen.attachments[:2])


def test_generator_needs_mapping():
    with pytest.raises(PreconditionError):
        generator_request(SignalExtraction("ghost"), [SignalMapping("ghost")], KB)


# retrieval


def test_bm25_matches_oracle_on_fixture_kb():
    texts = [p.text for p in KB.passages]
    for query in ("implication operator", "reset polarity", "$bits width", "stable past value", "nothing_matches_here"):
        expected = bm25_rank(texts, query)
        for i, want in enumerate(expected):
            assert KB.score(query, i) == pytest.approx(want)
        order = sorted(range(len(texts)), key=lambda i: (-expected[i], KB.passages[i].doc_id, KB.passages[i].index))
        assert KB.retrieve(query, 4) == [KB.passages[i] for i in order[:4]]


def test_implication_query_hits_implication_notes():
    top = KB.retrieve("implication operator", 1)[0]
    assert top.doc_id == "implication.md"


def test_unique_term_ranks_first():
    kb = KnowledgeBase.from_documents({"a.md": "alpha beta", "b.md": "beta gamma", "c.md": "beta beta"})
    assert kb.retrieve("gamma", 1)[0].doc_id == "b.md"


def test_empty_query_keeps_document_order():
    assert [p.doc_id for p in KB.retrieve("", 3)] == [p.doc_id for p in KB.passages[:3]]
    assert KB.retrieve("x", 0) == []


@settings(max_examples=100, deadline=None)
@given(st.lists(st.text("abc ", max_size=30), min_size=1, max_size=6), st.text("abc ", max_size=10))
def test_bm25_property(docs, query):
    kb = KnowledgeBase.from_documents({f"d{i}.md": t for i, t in enumerate(docs)})
    texts = [p.text for p in kb.passages]
    if not texts:
        return
    for i, want in enumerate(bm25_rank(texts, query)):
        assert kb.score(query, i) == pytest.approx(want)


def test_chunking_bounds_and_covers():
    rng = random.Random(4)
    words = [f"w{i}" for i in range(2000)]
    paras, pos = [], 0
    while pos < len(words):
        n = rng.randint(1, 260)
        paras.append(" ".join(words[pos : pos + n]))
        pos += n
    pieces = chunk("\n\n".join(paras))
    assert all(len(p.split()) <= 200 for p in pieces)
    assert [w for p in pieces for w in p.split()] == words


def test_empty_kb_warns():
    run = run_full(SPEC, DECLS, KnowledgeBase(), MockBackend(), signal_names=["ctr"])
    assert any("knowledge base is empty" in w for w in run.warnings)
    assert run.assertions


# stages


def test_reformat_retry_then_success():
    good = {"name": "ctr", "description": {"definition": "d", "functionality": "f", "interconnection": "", "additional": ""},
            "interconnection_signals": []}
    backend = Scripted("sorry, no json here", fenced(good))
    [extraction] = run_spec_analyzer(SPEC, ["ctr"], backend)
    assert extraction.name == "ctr"
    assert len(backend.requests) == 2
    retry = backend.requests[1]
    assert [r for r, _ in retry.messages] == ["user", "assistant", "user"]
    assert task_of(retry)["stage"] == "spec_analyzer"


def test_reformat_retry_then_failure():
    backend = Scripted("nope", fenced({"name": "ctr"}))
    with pytest.raises(SchemaViolationError):
        run_spec_analyzer(SPEC, ["ctr"], backend)
    assert len(backend.requests) == 2


def test_wrong_signal_in_reply_is_rejected():
    wrong = {"name": "prer", "description": {"definition": "", "functionality": "", "interconnection": "", "additional": ""},
             "interconnection_signals": []}
    with pytest.raises(SchemaViolationError):
        run_spec_analyzer(SPEC, ["ctr"], Scripted(fenced(wrong), fenced(wrong)))


def test_extraction_invariant():
    with pytest.raises(ValueError):
        SignalExtraction("ctr", interconnection="drives nothing", interconnection_signals=("prer",))
    with pytest.raises(ValueError):
        SignalExtraction("")
    ok = SignalExtraction("ctr", interconnection="feeds prer", interconnection_signals=("prer",))
    assert SignalExtraction.from_dict(ok.to_dict()) == ok
    validate(ok.to_dict(), EXTRACTION_SCHEMA)


def test_preconditions():
    with pytest.raises(PreconditionError):
        run_spec_analyzer(SPEC, [], MockBackend())
    empty = parse_spec_text("no headings, no ports\n", "x")
    with pytest.raises(PreconditionError):
        run_full(empty, DECLS, KB, MockBackend())


def test_mapper_skips_model_when_all_resolve():
    backend = Scripted()
    maps = run_signal_mapper(SPEC, DECLS, ["ctr", "PRER"], backend)
    assert [m.hdl_identifier for m in maps] == ["ctr", "prer"] and backend.requests == []


def test_mapper_asks_only_for_leftovers():
    reply = {"mappings": [{"spec_name": "prescale register", "hdl_identifier": "prer"}]}
    backend = Scripted(fenced(reply))
    maps = run_signal_mapper(SPEC, DECLS, ["ctr", "prescale register"], backend)
    assert task_of(backend.requests[0])["spec_names"] == ["prescale register"]
    assert maps[1] == SignalMapping("prescale register", "prer", "llm", 0.5)


def test_generator_reply_must_target_signal():
    extraction = SignalExtraction("ctr")
    maps = [SignalMapping("ctr", "ctr", "exact", 1.0)]
    reply = {"signal": "ctr", "assertions": [{"category": "width", "sva": "assert property (@(posedge wb_clk_i) $bits(ctr) == 8);"}]}
    out = run_sva_generator(extraction, maps, KB, Scripted(fenced(reply)), DECLS, "wb_clk_i")
    assert out[0].category == "width" and out[0].transcript_ref
    bad = dict(reply, signal="prer")
    with pytest.raises(SchemaViolationError):
        run_sva_generator(extraction, maps, KB, Scripted(fenced(bad), fenced(bad)), DECLS)


def test_filter_unmapped_partition():
    maps = [SignalMapping("ctr", "ctr", "exact", 1.0)]
    made = [
        GeneratedAssertion("ctr", "width", "assert property (@(posedge wb_clk_i) $bits(ctr) == 8);"),
        GeneratedAssertion("ctr", "function", "assert property (@(posedge wb_clk_i) ctr[7] |-> magic_internal_sig);"),
        GeneratedAssertion("ctr", "function", "assert property (@(posedge wb_clk_i) ctr |-> );"),
        GeneratedAssertion("ctr", "connectivity", "assert property (@(posedge wb_clk_i) ctr[7] |-> ##1 tip);"),
    ]
    kept, filtered = filter_unmapped(made, maps, DECLS)
    assert [r.id for r in kept] == ["ctr-01", "ctr-03", "ctr-04"]
    assert [r.id for r in filtered] == ["ctr-02"]
    assert filtered[0].status == UNMAPPED_FILTERED and "magic_internal_sig" in filtered[0].detail
    assert len(kept) + len(filtered) == len(made)


def test_replay_run_shape():
    run = fixture_run()
    assert run.errors == [] and len(run.extractions) == 23
    assert len(run.assertions) == 59 and len(run.filtered()) == 3
    assert "signal_mapper" not in run.transcript_refs and len(run.transcript_refs) == 46
    ctr = [a.category for a in run.kept() if a.target_signal == "ctr"]
    assert (ctr.count("width"), ctr.count("connectivity"), ctr.count("function")) == (1, 4, 5)
    clk = [a.category for a in run.kept() if a.target_signal == "wb_clk_i"]
    assert clk == ["width"]


def test_replay_is_deterministic():
    assert fixture_run().to_dict() == fixture_run().to_dict()


def test_workers_do_not_change_result():
    one = fixture_run().to_dict()
    many = run_full(SPEC, DECLS, KB, replay(), [s.name for s in DESIGN.signals], DESIGN.clock, DESIGN.reset, workers=4)
    assert many.to_dict() == one


def test_mock_run_is_schema_valid():
    backend = MockBackend(seed=1)
    run = fixture_run(backend)
    assert run.errors == [] and len(run.extractions) == 23
    for e in run.extractions:
        validate(e.to_dict(), EXTRACTION_SCHEMA)
    validate({"mappings": [{"spec_name": m.spec_name, "hdl_identifier": m.hdl_identifier} for m in run.mappings]}, MAPPING_SCHEMA)
    for name in {a.target_signal for a in run.assertions}:
        batch = [{"category": a.category, "sva": a.sva_text} for a in run.assertions if a.target_signal == name]
        validate({"signal": name, "assertions": batch}, GENERATION_SCHEMA)


def test_stage_errors_are_contained():
    backend = Scripted(*(["garbage"] * 4))
    run = run_full(SPEC, DECLS, KB, backend, signal_names=["ctr", "prer"])
    assert {(e["signal"], e["stage"]) for e in run.errors} == {("ctr", "spec_analyzer"), ("prer", "spec_analyzer")}
    assert run.assertions == []


def test_unmapped_signal_skips_generation():
    decls = [SignalDeclaration("clk", "input", "wire", 1), SignalDeclaration("ctr", "input", "wire", 8)]
    run = run_full(SPEC, decls, KB, MockBackend(), signal_names=["ctr", "zzzqqq"])
    assert {a.target_signal for a in run.assertions} == {"ctr"}
    assert any("zzzqqq" in w for w in run.warnings)
