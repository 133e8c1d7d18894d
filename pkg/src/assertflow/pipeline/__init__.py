"""Specification-to-assertion pipeline: analyzer, mapper, generator and filtering."""

from .knowledge import KnowledgeBase, Passage
from .schemas import SchemaViolationError
from .stages import (
    GeneratedAssertion,
    PipelineError,
    PipelineRun,
    PreconditionError,
    SignalExtraction,
    discover_signals,
    filter_unmapped,
    run_full,
    run_signal_mapper,
    run_spec_analyzer,
    run_sva_generator,
)


def retrieve(kb: KnowledgeBase, query: str, top_k: int = 4) -> list:
    return kb.retrieve(query, top_k)


__all__ = [
    "GeneratedAssertion",
    "KnowledgeBase",
    "Passage",
    "PipelineError",
    "PipelineRun",
    "PreconditionError",
    "SchemaViolationError",
    "SignalExtraction",
    "discover_signals",
    "filter_unmapped",
    "retrieve",
    "run_full",
    "run_signal_mapper",
    "run_spec_analyzer",
    "run_sva_generator",
]
