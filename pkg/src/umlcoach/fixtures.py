"""Bundled exercise: the Wakaba Trading Company e-commerce modeling problem.

The answer key ships with the package so the CLI, the service and the test
suite all have one known-good diagram to work against.  It is an instructor
style reconstruction for this exercise, not a canonical solution.
"""

from __future__ import annotations

import json
from importlib import resources

from .model import ClassDiagram, Exercise, diagram_from_doc

_ANSWER_FILE = "wakaba_answer.json"
_EXERCISE_FILE = "wakaba_exercise.json"


def _read_data(name: str) -> str:
    return resources.files("umlcoach.data").joinpath(name).read_text(encoding="utf-8")


def wakaba_answer_text() -> str:
    """The answer key exactly as stored (canonical cdx/1 text)."""
    return _read_data(_ANSWER_FILE)


def wakaba_answer() -> ClassDiagram:
    return diagram_from_doc(json.loads(wakaba_answer_text()))


def wakaba_exercise() -> Exercise:
    raw = json.loads(_read_data(_EXERCISE_FILE))
    vocabulary = raw.get("vocabulary")
    return Exercise(
        id=raw["id"],
        problem_text=raw["problemText"],
        answer_key=diagram_from_doc(raw["answerKey"]),
        vocabulary=tuple(vocabulary) if vocabulary else None,
    )
