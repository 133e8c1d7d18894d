"""Benchmark contract, run driver, metric aggregation and report rendering."""

from .artifacts import MAPPINGS_JSON_SCHEMA, REPORT_JSON_SCHEMA, RUN_JSON_SCHEMA, validate_artifact
from .design import (
    BenchmarkDesign,
    BenchmarkError,
    ManifestError,
    ManifestSignal,
    ManifestValidationError,
    MissingComponentError,
    load_benchmark,
)
from .fpv import export_fpv, import_fpv_results
from .report import (
    Cell,
    EvalReport,
    SignalRow,
    accounting_violations,
    aggregate,
    parse_report,
    percent,
    render_report,
)
from .runner import evaluate_records, run_bench

__all__ = [
    "MAPPINGS_JSON_SCHEMA",
    "REPORT_JSON_SCHEMA",
    "RUN_JSON_SCHEMA",
    "BenchmarkDesign",
    "BenchmarkError",
    "Cell",
    "EvalReport",
    "ManifestError",
    "ManifestSignal",
    "ManifestValidationError",
    "MissingComponentError",
    "SignalRow",
    "accounting_violations",
    "aggregate",
    "evaluate_records",
    "export_fpv",
    "import_fpv_results",
    "load_benchmark",
    "parse_report",
    "percent",
    "render_report",
    "run_bench",
    "validate_artifact",
]
