"""Chat-completion backends: live HTTP, transcript replay and a deterministic mock.

Every request has a stable ``request_key`` (SHA-256 over a canonical JSON
serialization), which is how transcripts recorded from a live run are found
again in replay mode.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import re
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

log = logging.getLogger(__name__)

ENV_ENDPOINT = "ASSERTFLOW_LLM_ENDPOINT"
ENV_API_KEY = "ASSERTFLOW_LLM_API_KEY"
ENV_MODEL = "ASSERTFLOW_LLM_MODEL"


class BackendError(RuntimeError):
    pass


class CacheMissError(BackendError, KeyError):
    def __init__(self, key: str):
        super().__init__(f"no transcript recorded for request {key}")
        self.key = key

    def __str__(self) -> str:
        return self.args[0]


class TranscriptConflictError(BackendError):
    def __init__(self, key: str):
        super().__init__(f"transcript store already holds different text for request {key}")
        self.key = key


class ConfigurationError(BackendError):
    pass


def _norm(text: str) -> str:
    return text.replace("\r\n", "\n").replace("\r", "\n")


@dataclass(frozen=True)
class ChatRequest:
    system_instructions: str
    messages: tuple = ()  # (role, content) pairs, role in {"user", "assistant"}
    attachments: tuple = ()  # (name, text) pairs
    temperature: float = 0.0
    max_tokens: int = 4096

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        for role, _ in self.messages:
            if role not in ("user", "assistant"):
                raise ValueError(f"unsupported message role {role!r}")

    def canonical(self) -> dict:
        return {
            "system_instructions": _norm(self.system_instructions),
            "messages": [[role, _norm(content)] for role, content in self.messages],
            "attachments": [[name, _norm(text)] for name, text in self.attachments],
            "decode_params": {"temperature": float(self.temperature), "max_tokens": int(self.max_tokens)},
        }

    @property
    def request_key(self) -> str:
        blob = json.dumps(self.canonical(), ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def followup(self, assistant_text: str, user_text: str) -> "ChatRequest":
        return ChatRequest(
            self.system_instructions,
            self.messages + (("assistant", assistant_text), ("user", user_text)),
            self.attachments,
            self.temperature,
            self.max_tokens,
        )

    @classmethod
    def from_canonical(cls, data: dict) -> "ChatRequest":
        params = data.get("decode_params", {})
        return cls(
            data["system_instructions"],
            tuple((r, c) for r, c in data.get("messages", [])),
            tuple((n, t) for n, t in data.get("attachments", [])),
            params.get("temperature", 0.0),
            params.get("max_tokens", 4096),
        )


@dataclass(frozen=True)
class ChatResponse:
    text: str
    backend_id: str
    request_key: str


class TranscriptStore:
    """Append-only JSON-lines store of ``request_key -> response`` records.

    All ``*.jsonl`` files in the directory are indexed; new records are
    appended to ``filename``.  Unparseable lines are skipped and listed in
    ``load_errors`` so a damaged store degrades to per-request cache misses.
    """

    def __init__(self, directory, filename: str = "transcripts.jsonl"):
        self.directory = Path(directory)
        self.path = self.directory / filename
        self.index: dict = {}
        self.load_errors: list = []
        self._lock = threading.Lock()
        self._load()

    def _load(self) -> None:
        if not self.directory.is_dir():
            return
        for path in sorted(self.directory.glob("*.jsonl")):
            for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                    key = record["key"]
                    record["response"]
                except (ValueError, KeyError, TypeError) as exc:
                    self.load_errors.append(f"{path.name}:{lineno}: {exc}")
                    continue
                self.index.setdefault(key, record)

    def __contains__(self, key: str) -> bool:
        return key in self.index

    def __len__(self) -> int:
        return len(self.index)

    def get(self, key: str) -> Optional[dict]:
        return self.index.get(key)

    def record(self, request: ChatRequest, response_text: str, timestamp: Optional[str] = None) -> dict:
        key = request.request_key
        with self._lock:
            existing = self.index.get(key)
            if existing is not None:
                if existing["response"] != response_text:
                    raise TranscriptConflictError(key)
                return existing
            record = {
                "key": key,
                "request": request.canonical(),
                "response": response_text,
                "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
            }
            self.directory.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            self.index[key] = record
            return record


def record(request: ChatRequest, response_text: str, store: TranscriptStore) -> dict:
    return store.record(request, response_text)


class ReplayBackend:
    backend_id = "replay"

    def __init__(self, store: TranscriptStore):
        self.store = store

    def complete(self, request: ChatRequest) -> ChatResponse:
        key = request.request_key
        found = self.store.get(key)
        if found is None:
            raise CacheMissError(key)
        return ChatResponse(found["response"], self.backend_id, key)


class LiveBackend:
    """OpenAI-compatible chat-completions client; every response is recorded."""

    backend_id = "live"

    def __init__(self, endpoint: str, api_key: str, model: str, store: Optional[TranscriptStore] = None, timeout: float = 300.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self.model = model
        self.store = store
        self.timeout = timeout

    @classmethod
    def from_env(cls, store: Optional[TranscriptStore] = None) -> "LiveBackend":
        missing = [v for v in (ENV_ENDPOINT, ENV_API_KEY, ENV_MODEL) if not os.environ.get(v)]
        if missing:
            raise ConfigurationError("live backend needs environment variables: " + ", ".join(missing))
        return cls(os.environ[ENV_ENDPOINT], os.environ[ENV_API_KEY], os.environ[ENV_MODEL], store)

    def payload(self, request: ChatRequest) -> dict:
        messages = [{"role": "system", "content": request.system_instructions}]
        for name, text in request.attachments:
            messages.append({"role": "user", "content": f"Attached file `{name}`:\n\n{text}"})
        messages.extend({"role": role, "content": content} for role, content in request.messages)
        return {
            "model": self.model,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }

    def complete(self, request: ChatRequest) -> ChatResponse:
        body = json.dumps(self.payload(request)).encode("utf-8")
        http_request = urllib.request.Request(
            self.endpoint,
            data=body,
            headers={"Content-Type": "application/json", "Authorization": f"Bearer {self.api_key}"},
        )
        try:
            with urllib.request.urlopen(http_request, timeout=self.timeout) as resp:
                data = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            raise BackendError(f"HTTP {exc.code} from {self.endpoint}: {exc.reason}") from exc
        except (urllib.error.URLError, OSError) as exc:
            raise BackendError(f"cannot reach {self.endpoint}: {exc}") from exc
        try:
            text = data["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"unexpected response shape from {self.endpoint}") from exc
        if not text.strip():
            raise BackendError("model returned an empty response (refusal)")
        if self.store is not None:
            self.store.record(request, text)
        return ChatResponse(text, self.backend_id, request.request_key)


_TASK = re.compile(r"^TASK:\s*(\{.*\})\s*$", re.M)


def task_of(request: ChatRequest) -> dict:
    """The machine-readable task header every pipeline prompt carries."""
    for role, content in reversed(request.messages):
        if role != "user":
            continue
        m = _TASK.search(content)
        if m:
            return json.loads(m.group(1))
    return {}


def _fenced(payload) -> str:
    return "```json\n" + json.dumps(payload, indent=2) + "\n```\n"


class MockBackend:
    """Template-driven stand-in for tests and smoke runs.

    Responses are schema-valid and deterministic for a given seed but carry
    no semantic insight: they are assembled from the request's own task
    header and attachments.
    """

    backend_id = "mock"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def complete(self, request: ChatRequest) -> ChatResponse:
        task = task_of(request)
        stage = task.get("stage")
        rng = random.Random(f"{self.seed}:{request.request_key}")
        attachments = dict(request.attachments)
        if stage == "spec_analyzer":
            text = self._analyze(task, attachments)
        elif stage == "signal_mapper":
            text = self._map(task, attachments)
        elif stage == "sva_generator":
            text = self._generate(task, rng)
        else:
            text = "mock backend: no task header found"
        return ChatResponse(text, self.backend_id, request.request_key)

    def _analyze(self, task: dict, attachments: dict) -> str:
        name = task["signal"]
        others = [s for s in task.get("known_signals", []) if s != name]
        spec = "\n".join(attachments.values())
        lines = [ln.strip() for ln in spec.splitlines() if re.search(rf"\b{re.escape(name)}\b", ln)]
        related = []
        for ln in lines:
            for other in others:
                if other not in related and re.search(rf"\b{re.escape(other)}\b", ln):
                    related.append(other)
        related = related[:4]
        interconnection = "Related to " + ", ".join(related) + "." if related else "No related signals found."
        payload = {
            "name": name,
            "description": {
                "definition": lines[0][:200] if lines else f"{name} (no definition found)",
                "functionality": " ".join(lines[1:3])[:400],
                "interconnection": interconnection,
                "additional": "",
            },
            "interconnection_signals": related,
        }
        return _fenced(payload)

    def _map(self, task: dict, attachments: dict) -> str:
        hdl = attachments.get("signal_definition.v", "")
        idents = re.findall(r"\b([A-Za-z_][A-Za-z0-9_$]*)\s*;", hdl)
        mappings = []
        for name in task.get("spec_names", []):
            key = re.sub(r"[^0-9a-z]", "", name.lower())
            hit = next((i for i in idents if key and key in re.sub(r"[^0-9a-z]", "", i.lower())), None)
            mappings.append({"spec_name": name, "hdl_identifier": hit})
        return _fenced({"mappings": mappings})

    def _generate(self, task: dict, rng: random.Random) -> str:
        target = task["hdl_identifier"]
        clock = task.get("clock") or target
        width = task.get("width")
        assertions = []
        if width:
            assertions.append(
                {
                    "category": "width",
                    "sva": f"assert property (@(posedge {clock}) $bits({target}) == {width});",
                    "rationale": "declared width",
                }
            )
        peers = [p for p in task.get("related_identifiers", []) if p != target]
        if peers and rng.random() < 0.5:
            assertions.append(
                {
                    "category": "connectivity",
                    "sva": f"assert property (@(posedge {clock}) $rose({target}) |-> ##[0:2] $stable({peers[0]}));",
                    "rationale": "mock connectivity template",
                }
            )
        return _fenced({"signal": task["signal"], "assertions": assertions})


def complete(request: ChatRequest, backend) -> ChatResponse:
    return backend.complete(request)


@dataclass
class BackendSettings:
    kind: str = "replay"  # live, replay, mock
    transcripts: Optional[Path] = None
    seed: int = 0
    extra: dict = field(default_factory=dict)


def make_backend(settings: BackendSettings):
    if settings.kind == "mock":
        return MockBackend(settings.seed)
    if settings.transcripts is None:
        raise ConfigurationError(f"{settings.kind} backend needs a transcripts directory")
    store = TranscriptStore(settings.transcripts)
    if settings.kind == "replay":
        return ReplayBackend(store)
    if settings.kind == "live":
        return LiveBackend.from_env(store)
    raise ConfigurationError(f"unknown backend {settings.kind!r}")
