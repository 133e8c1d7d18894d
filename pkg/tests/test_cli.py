import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from assertflow.bench import MAPPINGS_JSON_SCHEMA, REPORT_JSON_SCHEMA, RUN_JSON_SCHEMA, validate_artifact
from assertflow.cli import main

FIXTURE = Path(__file__).parent.parent / "fixtures" / "i2c"
SPEC = FIXTURE / "spec" / "i2c_master_spec.md"
HDL = FIXTURE / "hdl" / "i2c_signals.v"
TRACE = FIXTURE / "traces" / "run_a.vcd"
REPLAY = ["--transcripts", str(FIXTURE / "transcripts")]


def run(*argv):
    return main([str(a) for a in argv])


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["bench"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["--workers", "0", "lint", "x.sva"])
    assert info.value.code == 2
    assert run("--backend", "mock", "extract", SPEC) == 2  # no --signals and no --hdl


def test_missing_input_exit_1(tmp_path):
    assert run("bench", tmp_path) == 1
    assert run("lint", tmp_path / "none.sva") == 1


def test_lint(tmp_path, capsys):
    good = tmp_path / "good.sva"
    good.write_text("assert property (@(posedge clk) a |-> ##1 b);\nassert property (@(posedge clk) $bits(x) == 8);\n")
    out = tmp_path / "lint.json"
    assert run("lint", good, "-o", out) == 0
    data = json.loads(out.read_text())
    assert [r["status"] for r in data["results"]] == ["ok", "ok"] and data["errors"] == 0

    bad = tmp_path / "bad.sva"
    bad.write_text(
        "assert property (@(posedge clk) a |-> b);\n"
        "assert property (@(posedge clk) a |-> );\n"
        "assert property (@(posedge clk) a throughout b);\n"
    )
    assert run("lint", bad, "-o", out) == 1
    results = json.loads(out.read_text())["results"]
    assert [r["status"] for r in results] == ["ok", "syntax_error", "subset_violation"]
    assert results[1]["error"]["line"] == 1
    err = capsys.readouterr().err
    assert "#2: syntax_error at 1:" in err


def test_evaluate(tmp_path):
    sva = tmp_path / "a.sva"
    sva.write_text(
        "assert property (@(posedge wb_clk_i) $bits(prer) == 16);\n"
        "assert property (@(posedge wb_clk_i) wb_ack_o |-> wb_cyc_i);\n"
        "assert property (@(posedge wb_clk_i) wb_ack_o |-> wb_ack_o);\n"
    )
    out = tmp_path / "verdicts.json"
    assert run("evaluate", sva, "--vcd", TRACE, "--hdl", HDL, "-o", out) == 0
    data = json.loads(out.read_text())
    assert data["traces"] == ["run_a.vcd"]
    assert data["records"][0]["status"] == "trace_pass"
    assert data["records"][0]["verdict"]["method"] == "declaration"
    assert all(r["status"] in ("trace_pass", "trace_fail", "vacuous", "inconclusive") for r in data["records"])


def test_evaluate_bad_trace_exit_1(tmp_path):
    sva = tmp_path / "a.sva"
    sva.write_text("assert property (@(posedge clk) a);\n")
    vcd = tmp_path / "broken.vcd"
    vcd.write_text("$var wire 1 ! a $end\n#0\n")
    assert run("evaluate", sva, "--vcd", vcd, "-o", tmp_path / "v.json") == 1


def test_stage_commands(tmp_path):
    ext = tmp_path / "ext.json"
    maps = tmp_path / "mappings.json"
    gen = tmp_path / "gen.json"
    assert run(*REPLAY, "extract", SPEC, "--signals", "ctr,prer", "-o", ext) == 1  # not recorded with this signal list
    assert run("--backend", "mock", "extract", SPEC, "--signals", "ctr,prer", "-o", ext) == 0
    assert [e["name"] for e in json.loads(ext.read_text())["extractions"]] == ["ctr", "prer"]
    assert run("--backend", "mock", "map", SPEC, HDL, "--extractions", ext, "-o", maps) == 0
    table = json.loads(maps.read_text())
    assert [m["hdl_identifier"] for m in table] == ["ctr", "prer"]
    assert run("--backend", "mock", "--kb", FIXTURE / "kb", "generate", SPEC, HDL, "--extractions", ext, "--mappings", maps, "-o", gen) == 0
    records = json.loads(gen.read_text())["records"]
    assert records and {r["target_signal"] for r in records} == {"ctr", "prer"}
    assert run("lint", gen, "-o", tmp_path / "l.json") == 0


def test_bench_report_and_export(tmp_path, capsys):
    out = tmp_path / "out"
    assert run(*REPLAY, "bench", FIXTURE, "-o", out) == 0
    table = capsys.readouterr().out
    assert "56/56/50" in table and "100%/89%" in table
    for name in ("run.json", "mappings.json", "report.json", "report.txt", "report.csv"):
        assert (out / name).is_file()

    assert run("report", out / "report.json", "--format", "csv") == 0
    csv_text = capsys.readouterr().out
    (tmp_path / "r.csv").write_text(csv_text)
    assert run("report", tmp_path / "r.csv") == 0
    assert "56/56/50" in capsys.readouterr().out
    assert run("--include-vacuous", "report", out) == 0
    capsys.readouterr()

    assert run("export-fpv", out, "--out", tmp_path / "fpv") == 0
    labels = json.loads((tmp_path / "fpv" / "labels.json").read_text())
    template = json.loads((tmp_path / "fpv" / "results_template.json").read_text())
    template["results"] = {label: "pass" for label in labels}
    results = tmp_path / "results.json"
    results.write_text(json.dumps(template))
    assert run("report", out, "--fpv-results", results, "--format", "json") == 0
    summary = json.loads(capsys.readouterr().out)["summary"]
    assert summary["total"] == {"generated": 56, "syntax_correct": 56, "pass": 56}
    assert run("report", out / "report.json", "--fpv-results", results) == 2


def test_bench_cache_miss_exit_1(tmp_path, capsys):
    store = tmp_path / "empty"
    store.mkdir()
    assert run("--transcripts", store, "bench", FIXTURE, "-o", tmp_path / "out") == 1
    assert "CacheMissError" in capsys.readouterr().out


def test_console_script_mock_bench(tmp_path):
    root = tmp_path / "design"
    shutil.copytree(FIXTURE, root)
    env = {k: v for k, v in os.environ.items() if not k.startswith("ASSERTFLOW_LLM")}
    env.update(http_proxy="http://127.0.0.1:9", https_proxy="http://127.0.0.1:9")
    proc = subprocess.run(
        [sys.executable, "-m", "assertflow.cli", "--backend", "mock", "bench", str(root)],
        capture_output=True,
        text=True,
        env=env,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    out = root / "out"
    validate_artifact(json.loads((out / "report.json").read_text()), REPORT_JSON_SCHEMA)
    validate_artifact(json.loads((out / "run.json").read_text()), RUN_JSON_SCHEMA)
    validate_artifact(json.loads((out / "mappings.json").read_text()), MAPPINGS_JSON_SCHEMA)
