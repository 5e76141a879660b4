"""Answer-layout transfer: correspondence search, coordinate rewrite, relationship keep.

The transform rewrites nothing but class coordinates.  Student classes with a
corresponding answer class take that class's exact position; the rest are
parked at (0, 0) in the top-left corner, stacking when there are several.
Relationships need no handling at all since they carry no coordinates, which
is precisely why the converted diagram is always recognizably the student's
own work.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .matching import MatchConfig, pairwise_class_similarity
from .model import ClassDiagram
from .names import normalize_name


@dataclass(frozen=True)
class Correspondence:
    answer_id: str
    student_id: str
    cs: float


@dataclass(frozen=True)
class CorrespondenceSet:
    entries: tuple[Correspondence, ...]
    non_corresponding_student_ids: tuple[str, ...]

    def student_to_answer(self) -> dict[str, str]:
        return {entry.student_id: entry.answer_id for entry in self.entries}


@dataclass(frozen=True)
class ClassMove:
    class_id: str
    x: int
    y: int
    corresponding: bool


@dataclass(frozen=True)
class LayoutResult:
    moves: tuple[ClassMove, ...]
    converted_diagram: ClassDiagram


class StaleLayoutError(ValueError):
    """A layout result applied to a diagram it was not produced from."""

    def __init__(self, class_id: str):
        self.class_id = class_id
        super().__init__(f"layout does not cover diagram class {class_id!r}")


def find_correspondences(
    student: ClassDiagram, answer: ClassDiagram, cfg: MatchConfig
) -> CorrespondenceSet:
    """One-to-one assignment of answer classes to their best student class.

    Answer classes are processed in canonical order; each picks the unconsumed
    student class with the highest pairwise class similarity, accepted only
    when that similarity reaches the correspondence threshold.  Ties between
    student classes go to the lexicographically earlier normalized name, then
    the earlier id.
    """
    remaining = sorted(student.classes, key=lambda c: (normalize_name(c.name), c.id))
    entries: list[Correspondence] = []
    for ca in sorted(answer.classes, key=lambda c: (normalize_name(c.name), c.id)):
        best = None
        best_score = 0.0
        for candidate in remaining:
            score = pairwise_class_similarity(candidate, ca, cfg)
            if score > best_score:
                best, best_score = candidate, score
        if best is not None and best_score >= cfg.correspondence_threshold:
            entries.append(Correspondence(ca.id, best.id, best_score))
            remaining.remove(best)
    corresponding = {entry.student_id for entry in entries}
    leftovers = tuple(
        node.id for node in student.classes if node.id not in corresponding
    )
    return CorrespondenceSet(entries=tuple(entries), non_corresponding_student_ids=leftovers)


def transform_layout(
    student: ClassDiagram,
    answer: ClassDiagram,
    cfg: MatchConfig | None = None,
    correspondences: CorrespondenceSet | None = None,
) -> LayoutResult:
    """Rewrite student class coordinates to the answer's arrangement.

    Only (x, y) change; names, attributes, sizes and relationships pass
    through untouched.  No elements are ever created, so answer classes with
    no counterpart simply leave empty space in the converted layout.
    """
    cfg = cfg or MatchConfig()
    if correspondences is None:
        correspondences = find_correspondences(student, answer, cfg)
    target = correspondences.student_to_answer()
    answer_by_id = {node.id: node for node in answer.classes}

    moves: list[ClassMove] = []
    converted = []
    for node in student.classes:
        answer_id = target.get(node.id)
        if answer_id is not None:
            counterpart = answer_by_id[answer_id]
            move = ClassMove(node.id, counterpart.x, counterpart.y, corresponding=True)
        else:
            move = ClassMove(node.id, 0, 0, corresponding=False)
        moves.append(move)
        converted.append(replace(node, x=move.x, y=move.y))

    return LayoutResult(
        moves=tuple(moves),
        converted_diagram=replace(student, classes=tuple(converted)),
    )


def apply_layout(student: ClassDiagram, result: LayoutResult) -> ClassDiagram:
    """Apply a layout result to the diagram it was produced from.

    Raises :class:`StaleLayoutError` naming the first id that does not line
    up, which happens when the diagram was edited after the result was made.
    """
    moves_by_id = {move.class_id: move for move in result.moves}
    for node in student.classes:
        if node.id not in moves_by_id:
            raise StaleLayoutError(node.id)
    student_ids = {node.id for node in student.classes}
    for move in result.moves:
        if move.class_id not in student_ids:
            raise StaleLayoutError(move.class_id)
    converted = tuple(
        replace(node, x=moves_by_id[node.id].x, y=moves_by_id[node.id].y)
        for node in student.classes
    )
    return replace(student, classes=converted)
