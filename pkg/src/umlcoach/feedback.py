"""Learner-facing check result: layout moves plus name colors, never scores.

Color code per element name, against a candidate pool from the answer key:

* red: some candidate matches completely (best name similarity is 1.0)
* blue: no candidate shares anything (best similarity is 0.0)
* black: partial match, anything strictly between

Class names are colored against every answer class name, because a class can
partially match an answer class it was never paired with and that hint is the
point.  Attribute names are colored against the attributes of the class's
corresponding answer class when one exists, otherwise against the whole
answer attribute pool.

The serialized result intentionally carries no similarity value of any kind;
positions and colors are the entire feedback channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .layout import ClassMove, find_correspondences, transform_layout
from .matching import MatchConfig
from .model import ClassDiagram
from .names import name_sim
from .similarity import CaSTable, DEFAULT_CAS_TABLE

RED = "red"
BLACK = "black"
BLUE = "blue"


@dataclass(frozen=True)
class CheckResult:
    moves: tuple[ClassMove, ...]
    class_colors: dict[str, str]
    attribute_colors: dict[str, str]

    def to_doc(self) -> dict:
        return {
            "moves": [
                {"classId": m.class_id, "x": m.x, "y": m.y, "corresponding": m.corresponding}
                for m in self.moves
            ],
            "classColors": dict(self.class_colors),
            "attributeColors": dict(self.attribute_colors),
        }


def color_for_name(name: str, candidates: Iterable[str]) -> str:
    """Color from the best name similarity against ``candidates`` (0 if empty)."""
    best = 0.0
    for candidate in candidates:
        score = name_sim(name, candidate)
        if score > best:
            best = score
        if best == 1.0:
            break
    if best == 1.0:
        return RED
    if best == 0.0:
        return BLUE
    return BLACK


def build_check_result(
    student: ClassDiagram,
    answer: ClassDiagram,
    cfg: MatchConfig | None = None,
    table: CaSTable | None = None,
) -> CheckResult:
    """Everything one press of the check button produces."""
    cfg = cfg or MatchConfig()
    if table is None:
        table = DEFAULT_CAS_TABLE
    correspondences = find_correspondences(student, answer, cfg)
    layout = transform_layout(student, answer, cfg, correspondences)

    answer_class_names = [node.name for node in answer.classes]
    answer_by_id = {node.id: node for node in answer.classes}
    all_answer_attr_names = [attr.name for _, attr in answer.iter_attributes()]
    corresponding = correspondences.student_to_answer()

    class_colors: dict[str, str] = {}
    attribute_colors: dict[str, str] = {}
    for node in student.classes:
        class_colors[node.id] = color_for_name(node.name, answer_class_names)
        answer_id = corresponding.get(node.id)
        if answer_id is not None:
            pool = [attr.name for attr in answer_by_id[answer_id].attributes]
        else:
            pool = all_answer_attr_names
        for attr in node.attributes:
            attribute_colors[attr.id] = color_for_name(attr.name, pool)

    return CheckResult(
        moves=layout.moves,
        class_colors=class_colors,
        attribute_colors=attribute_colors,
    )
