"""Benchmark directory contract and its ``bench.toml`` manifest.

A benchmark root holds a natural-language specification, a signal-definition
HDL file and the golden RTL, plus optional traces and recorded transcripts::

    [design]
    name = "i2c"
    spec = "spec/i2c_spec.md"
    signal_definition = "hdl/i2c_signals.v"
    golden_rtl = "rtl"
    traces = "traces"            # optional
    transcripts = "transcripts"  # optional
    knowledge_base = "kb"        # optional
    clock = "wb_clk_i"           # optional
    reset = "wb_rst_i"           # optional

    [[signals]]
    name = "wb_clk_i"
    type = "io_port"      # io_port | register
    function = "clock"    # clock | reset | control | data
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .. import signal_map
from ..verilog_decl import parse_declarations

MANIFEST = "bench.toml"
SIGNAL_TYPES = ("io_port", "register")
FUNCTIONS = ("clock", "reset", "control", "data")


class BenchmarkError(ValueError):
    pass


class MissingComponentError(BenchmarkError):
    def __init__(self, component: str, path: Path):
        self.component = component
        self.path = path
        super().__init__(f"benchmark is missing its {component}: {path}")


class ManifestError(BenchmarkError):
    pass


class ManifestValidationError(BenchmarkError):
    def __init__(self, names):
        self.names = list(names)
        super().__init__("manifest signals not found in the signal definition: " + ", ".join(self.names))


@dataclass(frozen=True)
class ManifestSignal:
    name: str
    type: str
    function: str


@dataclass(frozen=True)
class BenchmarkDesign:
    root: Path
    design_name: str
    spec_path: Path
    signal_definition_path: Path
    golden_rtl_dir: Path
    traces_dir: Optional[Path]
    transcripts_dir: Optional[Path]
    signals: tuple
    kb_dir: Optional[Path] = None
    clock: Optional[str] = None
    reset: Optional[str] = None

    def signal(self, name: str) -> Optional[ManifestSignal]:
        return next((s for s in self.signals if s.name == name), None)

    def trace_files(self) -> list:
        if self.traces_dir is None or not self.traces_dir.is_dir():
            return []
        return sorted(self.traces_dir.glob("*.vcd"))

    def declarations(self) -> list:
        return parse_declarations(self.signal_definition_path)


def _require(table: dict, key: str, kind=str):
    if key not in table:
        raise ManifestError(f"manifest lacks required key '{key}'")
    value = table[key]
    if not isinstance(value, kind):
        raise ManifestError(f"manifest key '{key}' must be a {kind.__name__}")
    return value


def load_benchmark(root) -> BenchmarkDesign:
    root = Path(root)
    manifest_path = root / MANIFEST
    if not manifest_path.is_file():
        raise MissingComponentError("manifest", manifest_path)
    try:
        data = tomllib.loads(manifest_path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"{manifest_path}: {exc}") from exc

    design = data.get("design")
    if not isinstance(design, dict):
        raise ManifestError("manifest lacks a [design] table")
    name = _require(design, "name")
    spec = root / _require(design, "spec")
    hdl = root / _require(design, "signal_definition")
    rtl = root / _require(design, "golden_rtl")
    if not spec.is_file():
        raise MissingComponentError("specification", spec)
    if not hdl.is_file():
        raise MissingComponentError("signal definition", hdl)
    if not rtl.is_dir() or not any(p.suffix in (".v", ".sv") for p in rtl.iterdir()):
        raise MissingComponentError("golden RTL", rtl)

    entries = data.get("signals", [])
    if not isinstance(entries, list) or not entries:
        raise ManifestError("manifest lists no [[signals]]")
    signals = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise ManifestError("each [[signals]] entry must be a table")
        sig = ManifestSignal(_require(entry, "name"), _require(entry, "type"), _require(entry, "function"))
        if sig.type not in SIGNAL_TYPES:
            raise ManifestError(f"signal {sig.name}: type must be one of {', '.join(SIGNAL_TYPES)}")
        if sig.function not in FUNCTIONS:
            raise ManifestError(f"signal {sig.name}: function must be one of {', '.join(FUNCTIONS)}")
        signals.append(sig)
    names = [s.name for s in signals]
    if len(set(names)) != len(names):
        raise ManifestError("manifest lists a signal more than once")

    declarations = parse_declarations(hdl)
    mapped = signal_map.match_deterministic(names, declarations, conflicts=[])
    unmatched = [m.spec_name for m in mapped if not m.resolved]
    if unmatched:
        raise ManifestValidationError(unmatched)

    def optional_dir(key):
        return root / design[key] if key in design else None

    return BenchmarkDesign(
        root=root,
        design_name=name,
        spec_path=spec,
        signal_definition_path=hdl,
        golden_rtl_dir=rtl,
        traces_dir=optional_dir("traces"),
        transcripts_dir=optional_dir("transcripts"),
        signals=tuple(signals),
        kb_dir=optional_dir("knowledge_base"),
        clock=design.get("clock"),
        reset=design.get("reset"),
    )
