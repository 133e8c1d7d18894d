"""Reference-note corpus with BM25 passage retrieval."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

K1 = 1.2
B = 0.75
PASSAGE_WORDS = 200
TOP_K = 4


@dataclass(frozen=True)
class Passage:
    doc_id: str
    index: int
    text: str


def tokenize(text: str) -> list:
    return text.lower().split()


def chunk(text: str, limit: int = PASSAGE_WORDS) -> list:
    """Pack whole paragraphs into passages of at most ``limit`` words.

    A paragraph longer than the limit is cut into ``limit``-word pieces.
    """
    paragraphs = [p.strip() for p in text.replace("\r\n", "\n").split("\n\n") if p.strip()]
    passages: list = []
    current: list = []
    count = 0
    for para in paragraphs:
        words = para.split()
        if len(words) > limit:
            if current:
                passages.append("\n\n".join(current))
                current, count = [], 0
            for start in range(0, len(words), limit):
                passages.append(" ".join(words[start : start + limit]))
            continue
        if current and count + len(words) > limit:
            passages.append("\n\n".join(current))
            current, count = [], 0
        current.append(para)
        count += len(words)
    if current:
        passages.append("\n\n".join(current))
    return passages


class KnowledgeBase:
    def __init__(self, passages=()):
        self.passages = list(passages)
        self._tokens = [tokenize(p.text) for p in self.passages]
        self._tf = [Counter(t) for t in self._tokens]
        self._df: Counter = Counter()
        for tf in self._tf:
            self._df.update(tf.keys())
        total = sum(len(t) for t in self._tokens)
        self._avgdl = total / len(self._tokens) if self._tokens else 0.0

    @classmethod
    def from_documents(cls, documents: dict) -> "KnowledgeBase":
        passages = []
        for doc_id in sorted(documents):
            for i, text in enumerate(chunk(documents[doc_id])):
                passages.append(Passage(doc_id, i, text))
        return cls(passages)

    @classmethod
    def load(cls, directory) -> "KnowledgeBase":
        root = Path(directory)
        documents = {}
        if root.is_dir():
            for path in sorted(root.rglob("*")):
                if path.is_file() and path.suffix.lower() in (".md", ".txt"):
                    documents[path.relative_to(root).as_posix()] = path.read_text(encoding="utf-8")
        return cls.from_documents(documents)

    def __len__(self) -> int:
        return len(self.passages)

    def idf(self, term: str) -> float:
        n = len(self.passages)
        df = self._df.get(term, 0)
        return math.log((n - df + 0.5) / (df + 0.5) + 1.0)

    def score(self, query: str, position: int) -> float:
        tf = self._tf[position]
        length = len(self._tokens[position])
        norm = K1 * (1 - B + B * length / self._avgdl) if self._avgdl else K1
        total = 0.0
        for term in tokenize(query):
            f = tf.get(term, 0)
            if f:
                total += self.idf(term) * f * (K1 + 1) / (f + norm)
        return total

    def retrieve(self, query: str, top_k: int = TOP_K) -> list:
        """Top ``top_k`` passages by BM25; ties go to the earlier (doc_id, index)."""
        ranked = sorted(
            range(len(self.passages)),
            key=lambda i: (-self.score(query, i), self.passages[i].doc_id, self.passages[i].index),
        )
        return [self.passages[i] for i in ranked[: max(top_k, 0)]]
