"""Prompt templates shipped as package data (``assertflow/prompts/*.txt``).

A template holds the system instructions and the user message, separated by a
line containing only ``---``.  Substitution uses ``string.Template`` so JSON
braces in templates need no escaping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from string import Template

STAGES = ("spec_analyzer", "signal_mapper", "sva_generator")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    system: str
    user: Template


@lru_cache(maxsize=None)
def load_template(name: str) -> PromptTemplate:
    text = resources.files("assertflow.prompts").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    if "\n---\n" in text:
        system, user = text.split("\n---\n", 1)
    else:
        system, user = "", text
    return PromptTemplate(name, system.strip() + "\n", Template(user))


def task_line(task: dict) -> str:
    return json.dumps(task, sort_keys=True, separators=(",", ":"))


def render(name: str, task: dict, **fields) -> tuple:
    """Return ``(system_instructions, user_message)`` for a template."""
    template = load_template(name)
    return template.system, template.user.substitute(task=task_line(task), **fields)
