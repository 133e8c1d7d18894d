"""Cross-check fixture verdicts with Verilator's own assertion engine.

Inlines every syntax-correct assertion of a bench run into a copy of the
golden RTL, simulates the fixture testbench with ``--assert`` and compares the
set of assertions Verilator reports as failing with the set our trace
evaluator marked ``trace_fail``.

    python tools/crosscheck_verilator.py <bench-output-dir> [fixture_root]

Needs the ``verilator`` pip package (``verilator-cli``).
"""

import json
import re
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "i2c"
RUNS = (("run_a", "02", "a5"), ("run_b", "04", "3c"))


def checker_text(records) -> str:
    lines = []
    for rec in records:
        if rec["status"] not in ("trace_pass", "trace_fail", "vacuous", "inconclusive"):
            continue
        label = "a_" + re.sub(r"[^A-Za-z0-9_]", "_", rec["id"])
        body = rec["sva_text"].rstrip().rstrip(";")
        body = re.sub(r"^(\w+:\s*)?", "", body)
        lines.append(f'    {label}: {body} else $display("ASSERT_FAIL {label}");')
    return "\n".join(lines)


def main(out_dir: Path, root: Path) -> int:
    run = json.loads((out_dir / "run.json").read_text())
    records = run["assertions"]
    rtl = (root / "rtl" / "i2c_master.v").read_text()
    patched = rtl.replace("endmodule", checker_text(records) + "\n\nendmodule")
    ours = {"a_" + re.sub(r"[^A-Za-z0-9_]", "_", r["id"]) for r in records if r["status"] == "trace_fail"}
    theirs = set()
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "i2c_master.v").write_text(patched)
        shutil.copy(root / "sim" / "tb.v", tmp / "tb.v")
        for name, prer, byte in RUNS:
            cmd = [
                "verilator-cli", "--binary", "--timing", "--assert", "-Wno-fatal", "-Wno-lint",
                "--top-module", "tb", f'-DVCD_FILE="{name}.vcd"', f"-DPRER_LO=8'h{prer}",
                f"-DSLAVE_BYTE=8'h{byte}", "--Mdir", f"obj_{name}", "tb.v", "i2c_master.v",
                "-MAKEFLAGS", "PYTHON3=python3",
            ]
            subprocess.run(cmd, cwd=tmp, check=True, capture_output=True)
            out = subprocess.run([f"./obj_{name}/Vtb"], cwd=tmp, check=True, capture_output=True, text=True).stdout
            theirs |= set(re.findall(r"ASSERT_FAIL (\w+)", out))
    # width assertions are decided statically and never fail in simulation
    print(f"trace evaluator fails: {sorted(ours)}")
    print(f"verilator fails:       {sorted(theirs)}")
    agree = ours == theirs
    print("agreement" if agree else "DISAGREEMENT")
    return 0 if agree else 1


if __name__ == "__main__":
    sys.exit(main(Path(sys.argv[1]), Path(sys.argv[2]) if len(sys.argv) > 2 else FIXTURE))
