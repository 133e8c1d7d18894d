"""Hand-off to an external formal tool and import of its verdicts.

``export_fpv`` writes the syntax-correct assertions as one labelled ``.sva``
file, a driver script with placeholders for the user's tool, and a results
template.  Filling the template with ``"pass"``/``"fail"`` per label and
importing it replaces trace verdicts with formal ones.
"""

from __future__ import annotations

import dataclasses
import json
import re
import stat
from pathlib import Path

from ..records import SYNTAX_CORRECT, TRACE_FAIL, TRACE_PASS, AssertionRecord
from ..sva import parse_sva, pretty_print

RESULTS_SCHEMA = "assertflow.fpv-results/1"

_DRIVER = """#!/usr/bin/env bash
# Driver stub for running {sva} under a formal property checker.
#
# Placeholders to fill in before use:
#   FPV_TOOL     command that launches your formal tool
#   RTL_FILES    golden RTL sources, space separated
#   TOP_MODULE   top-level module the assertions bind to (default: {top})
#
# The tool must report one verdict per assertion label.  Write them into
# results.json using results_template.json as the shape ("pass" or "fail"),
# then run:  assertflow report <bench-output-dir> --fpv-results results.json
set -euo pipefail
cd "$(dirname "$0")"
: "${{FPV_TOOL:?set FPV_TOOL to your formal tool command}}"
: "${{RTL_FILES:?set RTL_FILES to the golden RTL sources}}"
TOP_MODULE="${{TOP_MODULE:-{top}}}"
# Tool-specific invocation goes here, for example:
#   $FPV_TOOL --top "$TOP_MODULE" $RTL_FILES {sva}
echo "edit run_fpv.sh to invoke $FPV_TOOL on $TOP_MODULE with {sva}" >&2
exit 1
"""


def label_for(record_id: str) -> str:
    return "a_" + re.sub(r"[^A-Za-z0-9_]", "_", record_id)


def export_fpv(records, out_dir, design: str = "design") -> dict:
    """Write the bundle; returns ``{label: record id}`` for the exported assertions."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sva_name = f"{design}_assertions.sva"
    labels = {}
    lines = [f"// Assertions for {design}; labels map to record ids in labels.json", ""]
    for rec in records:
        if rec.status not in SYNTAX_CORRECT:
            continue
        tree = dataclasses.replace(parse_sva(rec.sva_text), label=label_for(rec.id))
        labels[tree.label] = rec.id
        lines.append(f"// {rec.id} ({rec.category}) for {rec.target_signal}")
        lines.append(pretty_print(tree))
        lines.append("")
    (out / sva_name).write_text("\n".join(lines), encoding="utf-8")
    driver = out / "run_fpv.sh"
    driver.write_text(_DRIVER.format(sva=sva_name, top=design), encoding="utf-8")
    driver.chmod(driver.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    (out / "labels.json").write_text(json.dumps(labels, indent=2) + "\n", encoding="utf-8")
    template = {"schema": RESULTS_SCHEMA, "results": {label: None for label in labels}}
    (out / "results_template.json").write_text(json.dumps(template, indent=2) + "\n", encoding="utf-8")
    return labels


def import_fpv_results(records, results: dict) -> list:
    """Copies of ``records`` with formal verdicts substituted where given.

    ``results`` maps labels (or record ids) to ``"pass"`` or ``"fail"``;
    other values and syntax-incorrect records are left untouched.
    """
    if results.get("schema") not in (None, RESULTS_SCHEMA):
        raise ValueError(f"unexpected results schema {results.get('schema')!r}")
    table = results.get("results", results)
    out = []
    for rec in records:
        verdict = table.get(label_for(rec.id), table.get(rec.id))
        if rec.status in SYNTAX_CORRECT and verdict in ("pass", "fail"):
            status = TRACE_PASS if verdict == "pass" else TRACE_FAIL
            history = [s for s in rec.history if s not in SYNTAX_CORRECT] + ["syntax_ok", status]
            rec = AssertionRecord.from_dict(
                {**rec.to_dict(), "status": status, "history": history, "verdict": {"method": "fpv", "outcome": verdict}}
            )
        out.append(rec)
    return out
