"""Per-signal, per-category evaluation counts and their table/json/csv renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

from ..records import (
    CATEGORIES,
    GENERATED,
    STATUSES,
    SUBSET_VIOLATION,
    SYNTAX_CORRECT,
    SYNTAX_ERROR,
    SYNTAX_OK,
    TRACE_PASS,
    UNMAPPED_FILTERED,
    VACUOUS,
)

REPORT_SCHEMA = "assertflow.report/1"
EMPTY = "—"
NOT_AVAILABLE = "n-a"

_TYPE_ORDER = ("io_port", "register", "other")
_TYPE_LABEL = {"io_port": "IO Port", "register": "Register", "other": "Other"}
_FUNCTION_ORDER = ("clock", "reset", "control", "data", "")
_CSV_HEADER = ("section", "name", "type", "function", "category", "status", "count")


def _zero() -> dict:
    return {c: {s: 0 for s in STATUSES} for c in CATEGORIES}


@dataclass(frozen=True)
class Cell:
    generated: int = 0
    syntax_correct: int = 0
    passed: int = 0

    def __add__(self, other: "Cell") -> "Cell":
        return Cell(
            self.generated + other.generated,
            self.syntax_correct + other.syntax_correct,
            self.passed + other.passed,
        )


@dataclass
class SignalRow:
    name: str
    type: str = "other"
    function: str = ""
    counts: dict = field(default_factory=_zero)  # category -> status -> n

    def cell(self, category: str, include_vacuous: bool = False) -> Cell:
        c = self.counts[category]
        generated = sum(n for s, n in c.items() if s != UNMAPPED_FILTERED)
        syntax = sum(c[s] for s in SYNTAX_CORRECT)
        passed = c[TRACE_PASS] + (c[VACUOUS] if include_vacuous else 0)
        return Cell(generated, syntax, passed)

    def total(self, include_vacuous: bool = False) -> Cell:
        out = Cell()
        for category in CATEGORIES:
            out = out + self.cell(category, include_vacuous)
        return out

    def status_total(self, status: str) -> int:
        return sum(self.counts[c][status] for c in CATEGORIES)


@dataclass
class EvalReport:
    design: str = ""
    rows: list = field(default_factory=list)
    traces_present: bool = True
    include_vacuous: bool = False
    unmapped_signals: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def row(self, name: str) -> Optional[SignalRow]:
        return next((r for r in self.rows if r.name == name), None)

    def category_total(self, category: str) -> Cell:
        out = Cell()
        for r in self.rows:
            out = out + r.cell(category, self.include_vacuous)
        return out

    def total(self) -> Cell:
        out = Cell()
        for r in self.rows:
            out = out + r.total(self.include_vacuous)
        return out

    def excluded(self) -> dict:
        return {
            "unmapped": sum(r.status_total(UNMAPPED_FILTERED) for r in self.rows),
            "vacuous": sum(r.status_total(VACUOUS) for r in self.rows),
            "inconclusive": sum(r.status_total("inconclusive") for r in self.rows),
        }

    def to_dict(self) -> dict:
        total = self.total()
        return {
            "schema": REPORT_SCHEMA,
            "design": self.design,
            "traces_present": self.traces_present,
            "include_vacuous": self.include_vacuous,
            "unmapped_signals": list(self.unmapped_signals),
            "errors": list(self.errors),
            "warnings": list(self.warnings),
            "rows": [
                {"name": r.name, "type": r.type, "function": r.function, "counts": r.counts} for r in self.rows
            ],
            "summary": {
                "categories": {c: _cell_dict(self.category_total(c)) for c in CATEGORIES},
                "total": _cell_dict(total),
                "syntax_percent": percent(total.syntax_correct, total.generated),
                "pass_percent": percent(total.passed, total.generated) if self.traces_present else NOT_AVAILABLE,
                "excluded": self.excluded(),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        if data.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"not an evaluation report (schema {data.get('schema')!r})")
        rows = []
        for r in data["rows"]:
            counts = _zero()
            for category, by_status in r["counts"].items():
                counts[category].update(by_status)
            rows.append(SignalRow(r["name"], r["type"], r["function"], counts))
        return cls(
            data["design"],
            rows,
            data["traces_present"],
            data["include_vacuous"],
            list(data["unmapped_signals"]),
            list(data["errors"]),
            list(data.get("warnings", [])),
        )


def _cell_dict(cell: Cell) -> dict:
    return {"generated": cell.generated, "syntax_correct": cell.syntax_correct, "pass": cell.passed}


def percent(part: int, whole: int) -> str:
    """Integer percentage rounded half-up, or an em dash when ``whole`` is zero."""
    if whole == 0:
        return EMPTY
    return f"{(200 * part + whole) // (2 * whole)}%"


def _row_key(row: SignalRow, position: dict):
    t = row.type if row.type in _TYPE_ORDER else "other"
    f = row.function if row.function in _FUNCTION_ORDER else ""
    return (_TYPE_ORDER.index(t), _FUNCTION_ORDER.index(f), position[row.name])


def aggregate(
    records,
    manifest=(),
    design: str = "",
    traces_present: bool = True,
    include_vacuous: bool = False,
    unmapped_signals=(),
    errors=(),
    warnings=(),
) -> EvalReport:
    """Count records per signal and category.

    ``manifest`` is a sequence of objects with ``name``, ``type`` and
    ``function`` attributes.  Signals that only appear in ``records`` get a row
    of type ``other``.
    """
    rows: dict = {}
    for sig in manifest:
        rows[sig.name] = SignalRow(sig.name, sig.type, sig.function)
    for rec in records:
        row = rows.get(rec.target_signal)
        if row is None:
            row = rows[rec.target_signal] = SignalRow(rec.target_signal)
        row.counts[rec.category][rec.status] += 1
    position = {name: i for i, name in enumerate(rows)}
    ordered = sorted(rows.values(), key=lambda r: _row_key(r, position))
    return EvalReport(
        design,
        ordered,
        traces_present,
        include_vacuous,
        list(unmapped_signals),
        list(errors),
        list(warnings),
    )


def accounting_violations(report: EvalReport) -> list:
    """Bookkeeping identities a finished report must satisfy; empty when it does.

    Every counted record reached a lint verdict, and with traces present every
    syntax-correct record also reached an evaluation verdict.  Totals are
    sums of their parts.
    """
    problems = []
    for row in report.rows:
        for category in CATEGORIES:
            c = row.counts[category]
            cell = row.cell(category, report.include_vacuous)
            where = f"{row.name}/{category}"
            if c[GENERATED]:
                problems.append(f"{where}: {c[GENERATED]} record(s) never linted")
            if cell.generated != c[SYNTAX_ERROR] + c[SUBSET_VIOLATION] + cell.syntax_correct:
                problems.append(f"{where}: generated count does not split into lint outcomes")
            if report.traces_present and c[SYNTAX_OK]:
                problems.append(f"{where}: {c[SYNTAX_OK]} syntax-correct record(s) never evaluated")
            if not cell.passed <= cell.syntax_correct <= cell.generated:
                problems.append(f"{where}: pass <= syntax <= generated violated")
    by_category = Cell()
    for category in CATEGORIES:
        by_category = by_category + report.category_total(category)
    by_row = Cell()
    for row in report.rows:
        by_row = by_row + row.total(report.include_vacuous)
    if not by_category == by_row == report.total():
        problems.append("design total differs from the sum of its rows or categories")
    return problems


def _fmt_cell(cell: Cell, traces_present: bool) -> str:
    if cell.generated == 0:
        return EMPTY
    passed = str(cell.passed) if traces_present else NOT_AVAILABLE
    return f"{cell.generated}/{cell.syntax_correct}/{passed}"


def _fmt_percent(cell: Cell, traces_present: bool) -> str:
    if cell.generated == 0:
        return EMPTY
    passed = percent(cell.passed, cell.generated) if traces_present else NOT_AVAILABLE
    return f"{percent(cell.syntax_correct, cell.generated)}/{passed}"


def render_table(report: EvalReport) -> str:
    header = ["Type", "Function", "Signal", "Width", "Connectivity", "Function", "Signal Total"]
    lines = []
    previous = (None, None)
    for r in report.rows:
        key = (r.type, r.function)
        type_label = _TYPE_LABEL.get(r.type, r.type) if r.type != previous[0] else ""
        func_label = r.function.capitalize() if key != previous else ""
        previous = key
        cells = [_fmt_cell(r.cell(c, report.include_vacuous), report.traces_present) for c in CATEGORIES]
        total = _fmt_cell(r.total(report.include_vacuous), report.traces_present)
        lines.append([type_label, func_label, r.name, *cells, total])
    totals = [report.category_total(c) for c in CATEGORIES]
    grand = report.total()
    lines.append(["Design Total", "", "", *(_fmt_cell(t, report.traces_present) for t in totals), _fmt_cell(grand, report.traces_present)])
    lines.append(["", "", "", *(_fmt_percent(t, report.traces_present) for t in totals), _fmt_percent(grand, report.traces_present)])

    widths = [max(len(str(row[i])) for row in [header, *lines]) for i in range(len(header))]

    def fmt(row):
        return "  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip()

    title = f"Design: {report.design or '(unnamed)'}  cells: generated/syntax-correct/pass"
    out = [title, fmt(header), fmt(["-" * w for w in widths])]
    out.extend(fmt(row) for row in lines[:-2])
    out.append(fmt(["-" * w for w in widths]))
    out.extend(fmt(row) for row in lines[-2:])
    excluded = report.excluded()
    out.append("")
    out.append(
        f"Excluded from pass: unmapped {excluded['unmapped']}, vacuous {excluded['vacuous']}"
        f"{' (counted as pass)' if report.include_vacuous else ''}, inconclusive {excluded['inconclusive']}"
    )
    if not report.traces_present:
        out.append("No traces available: pass column not evaluated.")
    if report.unmapped_signals:
        out.append("Unmapped signals (no assertions generated): " + ", ".join(report.unmapped_signals))
    if report.errors:
        out.append(f"Errors ({len(report.errors)}):")
        for e in report.errors:
            out.append(f"  [{e.get('stage')}] {e.get('signal') or '-'}: {e.get('error')}")
    return "\n".join(out) + "\n"


def render_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    if report.design:
        writer.writerow(["meta", "design", "", "", "", "", report.design])
    if not report.traces_present:
        writer.writerow(["meta", "traces_present", "", "", "", "", 0])
    if report.include_vacuous:
        writer.writerow(["meta", "include_vacuous", "", "", "", "", 1])
    for r in report.rows:
        writer.writerow(["signal", r.name, r.type, r.function, "", "", ""])
        for c in CATEGORIES:
            for s in STATUSES:
                if r.counts[c][s]:
                    writer.writerow(["count", r.name, r.type, r.function, c, s, r.counts[c][s]])
    for name in report.unmapped_signals:
        writer.writerow(["unmapped", name, "", "", "", "", ""])
    for e in report.errors:
        writer.writerow(["error", e.get("signal") or "", e.get("stage") or "", e.get("error") or "", "", "", ""])
    for w in report.warnings:
        writer.writerow(["warning", w, "", "", "", "", ""])
    return buf.getvalue()


def report_from_csv(text: str) -> EvalReport:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != _CSV_HEADER:
        raise ValueError("not an evaluation report CSV")
    report = EvalReport()
    rows: dict = {}
    for section, name, type_, function, category, status, count in reader:
        if section == "meta":
            if name == "design":
                report.design = count
            elif name == "traces_present":
                report.traces_present = bool(int(count))
            elif name == "include_vacuous":
                report.include_vacuous = bool(int(count))
        elif section == "signal":
            rows[name] = SignalRow(name, type_, function)
        elif section == "count":
            rows[name].counts[category][status] = int(count)
        elif section == "unmapped":
            report.unmapped_signals.append(name)
        elif section == "error":
            report.errors.append({"signal": name or None, "stage": type_ or None, "error": function})
        elif section == "warning":
            report.warnings.append(name)
    report.rows = list(rows.values())
    return report


def render_report(report: EvalReport, fmt: str = "table") -> str:
    if fmt == "table":
        return render_table(report)
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return render_csv(report)
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str, fmt: str = "json") -> EvalReport:
    if fmt == "json":
        return EvalReport.from_dict(json.loads(text))
    if fmt == "csv":
        return report_from_csv(text)
    raise ValueError(f"cannot parse report format {fmt!r}")
