"""Command-line entry point: ``assertflow <command> ...``.

Exit status is 0 on success, 1 when the run recorded errors and 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import signal_map
from .bench import (
    BenchmarkError,
    EvalReport,
    aggregate,
    export_fpv,
    import_fpv_results,
    load_benchmark,
    parse_report,
    render_report,
    run_bench,
)
from .bench.runner import evaluate_records, load_traces
from .llm import BackendError, BackendSettings, make_backend
from .pipeline import KnowledgeBase, SignalExtraction, discover_signals, filter_unmapped, run_sva_generator
from .pipeline.stages import analyze_signal, guess_clock, run_signal_mapper
from .records import AssertionRecord
from .spec_ingest import SpecError, load_spec
from .sva import SvaError, SvaSubsetError, parse_sva, parse_sva_file, pretty_print
from .verilog_decl import DeclarationError, parse_declarations

log = logging.getLogger("assertflow")

EXTRACTIONS_SCHEMA = "assertflow.extractions/1"
ASSERTIONS_SCHEMA = "assertflow.assertions/1"
LINT_SCHEMA = "assertflow.lint/1"
VERDICTS_SCHEMA = "assertflow.verdicts/1"


class UsageError(Exception):
    pass


def _write(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")


def _dump(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _backend(args, fallback_transcripts=None):
    transcripts = args.transcripts or fallback_transcripts
    return make_backend(BackendSettings(args.backend, Path(transcripts) if transcripts else None, args.seed))


def _kb(args, fallback=None):
    directory = args.kb or fallback
    return KnowledgeBase.load(directory) if directory else KnowledgeBase()


def _signal_names(args, spec, declarations):
    if args.signals:
        return [s.strip() for s in args.signals.split(",") if s.strip()]
    if declarations:
        return discover_signals(spec, declarations)
    raise UsageError("give --signals or --hdl so signals can be discovered")


def _load_records(path) -> list:
    path = Path(path)
    if path.suffix in (".sva", ".sv"):
        text = path.read_text(encoding="utf-8")
        return [
            AssertionRecord(f"sva-{i:03d}", "", "function", chunk)
            for i, chunk in enumerate(_split_statements(text), 1)
        ]
    data = _read_json(path)
    if isinstance(data, dict) and "records" in data:
        data = data["records"]
    elif isinstance(data, dict) and "assertions" in data:
        data = data["assertions"]
    return [AssertionRecord.from_dict(d) for d in data]


def _split_statements(text: str) -> list:
    """Cut an .sva file into statements, keeping property blocks whole."""
    statements, current, in_property = [], [], False
    for line in text.splitlines():
        stripped = line.split("//", 1)[0].strip()
        if not stripped and not current:
            continue
        current.append(line)
        if stripped.startswith("property "):
            in_property = True
        if in_property:
            if stripped.startswith("endproperty"):
                in_property = False
            continue
        if stripped.endswith(";") and ("assert" in " ".join(current)):
            statements.append("\n".join(current).strip())
            current = []
    if current and "\n".join(current).strip():
        statements.append("\n".join(current).strip())
    return statements


def cmd_extract(args) -> int:
    spec = load_spec(args.spec)
    declarations = parse_declarations(Path(args.hdl)) if args.hdl else []
    names = _signal_names(args, spec, declarations)
    backend = _backend(args)
    extractions, errors = [], []
    for name in names:
        try:
            extractions.append(analyze_signal(spec, name, names, backend)[0].to_dict())
        except Exception as exc:
            errors.append({"signal": name, "stage": "spec_analyzer", "error": f"{type(exc).__name__}: {exc}"})
    _write(args.output, _dump({"schema": EXTRACTIONS_SCHEMA, "design": spec.design_name, "extractions": extractions, "errors": errors}))
    return 1 if errors else 0


def _extractions(path) -> list:
    data = _read_json(path)
    items = data["extractions"] if isinstance(data, dict) else data
    return [SignalExtraction.from_dict(d) for d in items]


def cmd_map(args) -> int:
    spec = load_spec(args.spec)
    declarations = parse_declarations(Path(args.hdl))
    if args.extractions:
        names = [e.name for e in _extractions(args.extractions)]
    else:
        names = _signal_names(args, spec, declarations)
    warnings, conflicts = [], []
    mappings = run_signal_mapper(
        spec, declarations, names, _backend(args), args.fuzzy_threshold, args.llm_confidence, warnings, conflicts
    )
    for message in warnings + [str(c) for c in conflicts]:
        log.warning(message)
    _write(args.output, signal_map.mappings_to_json(mappings))
    return 1 if conflicts else 0


def cmd_generate(args) -> int:
    spec = load_spec(args.spec)
    declarations = parse_declarations(Path(args.hdl))
    extractions = _extractions(args.extractions)
    mappings = signal_map.mappings_from_json(Path(args.mappings).read_text(encoding="utf-8"))
    backend = _backend(args)
    kb = _kb(args)
    clock = args.clock or guess_clock(declarations)
    architecture = "".join(s.raw_text for s in spec.sections_of("architecture"))
    resolved = {m.spec_name for m in mappings if m.resolved}
    generated, errors = [], []
    for e in extractions:
        if e.name not in resolved:
            log.warning("signal %s has no HDL mapping; skipped", e.name)
            continue
        try:
            generated.extend(run_sva_generator(e, mappings, kb, backend, declarations, clock, args.reset, architecture))
        except Exception as exc:
            errors.append({"signal": e.name, "stage": "sva_generator", "error": f"{type(exc).__name__}: {exc}"})
    kept, filtered = filter_unmapped(generated, mappings, declarations)
    records = [r.to_dict() for r in kept + filtered]
    _write(args.output, _dump({"schema": ASSERTIONS_SCHEMA, "design": spec.design_name, "records": records, "errors": errors}))
    return 1 if errors else 0


def cmd_lint(args) -> int:
    path = Path(args.file)
    results = []
    if path.suffix in (".sva", ".sv"):
        text = path.read_text(encoding="utf-8")
        try:
            trees = parse_sva_file(text)
            results = [{"index": i, "status": "ok", "canonical": pretty_print(t)} for i, t in enumerate(trees, 1)]
        except SvaError as exc:
            chunks = _split_statements(text)
            results = [_lint_one(i, chunk) for i, chunk in enumerate(chunks, 1)]
            if all(r["status"] == "ok" for r in results):
                results.append({"index": len(results) + 1, "status": "syntax_error", "error": exc.to_dict()})
    else:
        for i, rec in enumerate(_load_records(path), 1):
            result = _lint_one(i, rec.sva_text)
            result["id"] = rec.id
            results.append(result)
    bad = [r for r in results if r["status"] != "ok"]
    for r in results:
        label = r.get("id", f"#{r['index']}")
        if r["status"] == "ok":
            print(f"{label}: ok", file=sys.stderr)
        else:
            err = r["error"]
            print(f"{label}: {r['status']} at {err['line']}:{err['column']}: {err['message']}", file=sys.stderr)
    _write(args.output, _dump({"schema": LINT_SCHEMA, "file": str(path), "results": results, "errors": len(bad)}))
    return 1 if bad else 0


def _lint_one(index: int, text: str) -> dict:
    try:
        return {"index": index, "status": "ok", "canonical": pretty_print(parse_sva(text))}
    except SvaSubsetError as exc:
        return {"index": index, "status": "subset_violation", "error": exc.to_dict()}
    except SvaError as exc:
        return {"index": index, "status": "syntax_error", "error": exc.to_dict()}


def cmd_evaluate(args) -> int:
    records = _load_records(args.assertions)
    declarations = parse_declarations(Path(args.hdl)) if args.hdl else []
    warnings: list = []
    traces = load_traces(args.vcd, warnings)
    for w in warnings:
        log.warning(w)
    records = [_reset(r) for r in records]
    evaluate_records(records, declarations, traces)
    for rec in records:
        print(f"{rec.id}: {rec.status}{' (' + rec.detail + ')' if rec.detail else ''}", file=sys.stderr)
    _write(args.output, _dump({"schema": VERDICTS_SCHEMA, "traces": sorted(traces), "records": [r.to_dict() for r in records]}))
    return 1 if warnings else 0


def _reset(rec: AssertionRecord) -> AssertionRecord:
    if rec.status == "unmapped_filtered":
        return rec
    data = rec.to_dict()
    data.update(status="generated", history=["generated"], verdict=None, detail="")
    return AssertionRecord.from_dict(data)


def cmd_bench(args) -> int:
    design = load_benchmark(args.root)
    backend = _backend(args, design.transcripts_dir)
    kb = _kb(args, design.kb_dir)
    out_dir = Path(args.output) if args.output else Path(args.root) / "out"
    run, report = run_bench(design, backend, kb, args.workers, args.include_vacuous, out_dir)
    sys.stdout.write(render_report(report, args.format))
    return 1 if report.errors else 0


def cmd_report(args) -> int:
    path = Path(args.path)
    if path.is_dir():
        report = parse_report((path / "report.json").read_text(encoding="utf-8"))
        if args.fpv_results:
            run = _read_json(path / "run.json")
            records = [AssertionRecord.from_dict(d) for d in run["assertions"]]
            records = import_fpv_results(records, _read_json(args.fpv_results))
            report = aggregate(
                records,
                report.rows,
                report.design,
                True,
                report.include_vacuous or args.include_vacuous,
                report.unmapped_signals,
                report.errors,
                report.warnings,
            )
    else:
        if args.fpv_results:
            raise UsageError("--fpv-results needs a bench output directory, not a report file")
        text = path.read_text(encoding="utf-8")
        report = parse_report(text, "csv" if path.suffix == ".csv" else "json")
    if args.include_vacuous and not report.include_vacuous:
        report = EvalReport(report.design, report.rows, report.traces_present, True, report.unmapped_signals, report.errors, report.warnings)
    sys.stdout.write(render_report(report, args.format))
    return 0


def cmd_export_fpv(args) -> int:
    source = Path(args.dir)
    run = _read_json(source / "run.json")
    records = [AssertionRecord.from_dict(d) for d in run["assertions"]]
    out = Path(args.out) if args.out else source / "fpv"
    labels = export_fpv(records, out, run.get("design") or "design")
    print(f"wrote {len(labels)} assertions to {out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assertflow", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=("live", "replay", "mock"), default="replay")
    parser.add_argument("--transcripts", help="transcript store directory")
    parser.add_argument("--kb", help="knowledge-base directory of .md/.txt notes")
    parser.add_argument("--workers", type=int, default=1, help="parallel per-signal requests")
    parser.add_argument("--seed", type=int, default=0, help="seed for the mock backend")
    parser.add_argument("--include-vacuous", action="store_true", help="count vacuous passes as passes")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="specification -> per-signal extractions JSON")
    p.add_argument("spec")
    p.add_argument("--hdl", help="signal-definition file used to discover signals")
    p.add_argument("--signals", help="comma-separated signal names")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("map", help="specification + HDL -> mappings.json")
    p.add_argument("spec")
    p.add_argument("hdl")
    p.add_argument("--extractions")
    p.add_argument("--signals")
    p.add_argument("--fuzzy-threshold", type=float, default=signal_map.FUZZY_THRESHOLD)
    p.add_argument("--llm-confidence", type=float, default=signal_map.LLM_CONFIDENCE)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("generate", help="extractions + mappings + kb -> assertions JSON")
    p.add_argument("spec")
    p.add_argument("hdl")
    p.add_argument("--extractions", required=True)
    p.add_argument("--mappings", required=True)
    p.add_argument("--clock")
    p.add_argument("--reset")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("lint", help="check assertions against the supported subset")
    p.add_argument("file", help=".sva file or assertions JSON")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("evaluate", help="assertions + VCD traces -> verdicts JSON")
    p.add_argument("assertions", help=".sva file or assertions JSON")
    p.add_argument("--vcd", action="append", required=True)
    p.add_argument("--hdl", help="signal-definition file for static width checks")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="full run on a benchmark root")
    p.add_argument("root")
    p.add_argument("-o", "--output", help="artifact directory (default: <root>/out)")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="render a saved report")
    p.add_argument("path", help="report.json, report.csv or a bench output directory")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--fpv-results", help="formal verdicts to substitute for trace verdicts")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-fpv", help="write a formal-tool bundle from a bench output directory")
    p.add_argument("dir")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_fpv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"assertflow: {exc}", file=sys.stderr)
        return 2
    except (SpecError, DeclarationError, BenchmarkError, BackendError, SvaError, OSError) as exc:
        print(f"assertflow: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
