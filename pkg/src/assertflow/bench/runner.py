"""End-to-end benchmark driver: generation, lint, width checks and trace evaluation."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

from ..pipeline import KnowledgeBase, PipelineRun, run_full
from ..records import (
    GENERATED,
    INCONCLUSIVE,
    SUBSET_VIOLATION,
    SYNTAX_ERROR,
    SYNTAX_OK,
    TRACE_FAIL,
    TRACE_PASS,
    VACUOUS,
    AssertionRecord,
)
from ..spec_ingest import load_spec
from ..sva import SvaError, SvaSubsetError, parse_sva
from ..trace import (
    FAIL,
    INCONCLUSIVE as OUT_INCONCLUSIVE,
    PASS,
    EvaluationError,
    VcdError,
    check_width,
    evaluate,
    is_width_assertion,
    parse_vcd,
)
from .design import BenchmarkDesign
from .report import EvalReport, accounting_violations, aggregate, render_report

log = logging.getLogger(__name__)

_STATUS_OF = {PASS: TRACE_PASS, FAIL: TRACE_FAIL, OUT_INCONCLUSIVE: INCONCLUSIVE}


def lint(record: AssertionRecord):
    """Parse a generated record, advancing its status; returns the AST or ``None``."""
    if record.status != GENERATED:
        return None
    try:
        tree = parse_sva(record.sva_text)
    except SvaSubsetError as exc:
        record.advance(SUBSET_VIOLATION, str(exc))
        return None
    except SvaError as exc:
        record.advance(SYNTAX_ERROR, str(exc))
        return None
    record.advance(SYNTAX_OK)
    return tree


def combine(outcomes) -> str:
    """Fold per-trace outcomes: any fail, else any pass, else any inconclusive, else vacuous."""
    outcomes = list(outcomes)
    for wanted in (FAIL, PASS, OUT_INCONCLUSIVE):
        if wanted in outcomes:
            return wanted
    return "vacuous_pass"


def check(record: AssertionRecord, tree, declarations, traces: dict) -> None:
    """Decide a syntax-correct record: statically for width checks, else on every trace."""
    if is_width_assertion(tree):
        try:
            verdict = check_width(tree, declarations)
        except EvaluationError as exc:
            record.verdict = {"outcome": OUT_INCONCLUSIVE, "method": "declaration"}
            record.advance(INCONCLUSIVE, str(exc))
            return
        record.verdict = {"method": "declaration", **verdict.to_dict()}
        record.advance(_STATUS_OF[verdict.outcome], verdict.first_failure[1] if verdict.first_failure else "")
        return
    if not traces:
        return
    per_trace = {}
    notes = []
    for name, trace in traces.items():
        try:
            verdict = evaluate(tree, trace)
        except EvaluationError as exc:
            per_trace[name] = {"outcome": OUT_INCONCLUSIVE, "error": str(exc)}
            notes.append(f"{name}: {exc}")
            continue
        per_trace[name] = verdict.to_dict()
        if verdict.first_failure:
            notes.append(f"{name}: {verdict.first_failure[1]}")
    outcome = combine(v["outcome"] for v in per_trace.values())
    record.verdict = {"method": "trace", "outcome": outcome, "traces": per_trace}
    record.advance(_STATUS_OF.get(outcome, VACUOUS), "; ".join(notes))


def load_traces(paths, warnings: list) -> dict:
    traces = {}
    for path in paths:
        try:
            traces[Path(path).name] = parse_vcd(Path(path))
        except (VcdError, OSError) as exc:
            warnings.append(f"skipped trace {Path(path).name}: {exc}")
    return traces


def evaluate_records(records, declarations, traces: dict) -> None:
    for record in records:
        tree = lint(record)
        if tree is not None:
            check(record, tree, declarations, traces)


def run_bench(
    design: BenchmarkDesign,
    backend,
    kb: Optional[KnowledgeBase],
    workers: int = 1,
    include_vacuous: bool = False,
    out_dir=None,
) -> tuple:
    spec = load_spec(design.spec_path, design.design_name)
    declarations = design.declarations()
    run = run_full(
        spec,
        declarations,
        kb,
        backend,
        signal_names=[s.name for s in design.signals],
        clock=design.clock,
        reset=design.reset,
        workers=workers,
    )
    warnings = list(run.warnings)
    trace_paths = design.trace_files()
    if not trace_paths:
        warnings.append("no traces found; pass column not evaluated")
    traces = load_traces(trace_paths, warnings)
    evaluate_records(run.assertions, declarations, traces)

    unmapped = [m.spec_name for m in run.mappings if not m.resolved]
    report = aggregate(
        run.assertions,
        design.signals,
        design=design.design_name,
        traces_present=bool(traces),
        include_vacuous=include_vacuous,
        unmapped_signals=unmapped,
        errors=run.errors,
        warnings=warnings,
    )
    report.errors.extend({"signal": None, "stage": "accounting", "error": p} for p in accounting_violations(report))
    if out_dir is not None:
        write_artifacts(Path(out_dir), run, report)
    return run, report


def write_artifacts(out_dir: Path, run: PipelineRun, report: EvalReport) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "run.json").write_text(json.dumps(run.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    (out_dir / "mappings.json").write_text(
        json.dumps([m.to_dict() for m in run.mappings], indent=2) + "\n", encoding="utf-8"
    )
    for fmt, name in (("json", "report.json"), ("table", "report.txt"), ("csv", "report.csv")):
        (out_dir / name).write_text(render_report(report, fmt), encoding="utf-8")
