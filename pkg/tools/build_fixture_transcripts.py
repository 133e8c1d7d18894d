"""Record the i2c fixture's replay transcripts from the authored replies.

Runs the real pipeline against a scripted backend that answers each request
from ``i2c_fixture_content`` and appends every exchange to the fixture's
transcript store, so replay runs see byte-identical requests.

    python tools/build_fixture_transcripts.py [fixture_root]
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from i2c_fixture_content import ASSERTIONS, EXTRACTIONS  # noqa: E402

from assertflow.bench import load_benchmark, run_bench  # noqa: E402
from assertflow.llm import ChatResponse, ReplayBackend, TranscriptStore, task_of  # noqa: E402
from assertflow.pipeline import KnowledgeBase  # noqa: E402

TIMESTAMP = "2026-10-17T00:00:00+00:00"


def fenced(payload) -> str:
    return "```json\n" + json.dumps(payload, indent=2) + "\n```"


class ScriptedBackend:
    backend_id = "scripted"

    def __init__(self, store: TranscriptStore):
        self.store = store

    def complete(self, request):
        task = task_of(request)
        stage = task.get("stage")
        if stage == "spec_analyzer":
            text = fenced(EXTRACTIONS[task["signal"]])
        elif stage == "sva_generator":
            text = fenced({"signal": task["signal"], "assertions": ASSERTIONS[task["signal"]]})
        else:
            raise RuntimeError(f"no scripted reply for stage {stage!r}")
        self.store.record(request, text, timestamp=TIMESTAMP)
        return ChatResponse(text, self.backend_id, request.request_key)


def main(root: Path) -> int:
    design = load_benchmark(root)
    store_dir = design.transcripts_dir
    for old in store_dir.glob("*.jsonl"):
        old.unlink()
    store = TranscriptStore(store_dir)
    kb = KnowledgeBase.load(design.kb_dir)
    _, report = run_bench(design, ScriptedBackend(store), kb)
    print(f"recorded {len(store)} transcripts in {store_dir}")

    _, replayed = run_bench(design, ReplayBackend(TranscriptStore(store_dir)), kb)
    total = replayed.total()
    print(f"replay totals: {total.generated}/{total.syntax_correct}/{total.passed}")
    return 1 if replayed.errors else 0


if __name__ == "__main__":
    default = Path(__file__).resolve().parent.parent / "fixtures" / "i2c"
    sys.exit(main(Path(sys.argv[1]) if len(sys.argv) > 1 else default))
