import random

import pytest

from umlcoach.layout import (
    StaleLayoutError,
    apply_layout,
    find_correspondences,
    transform_layout,
)
from umlcoach.matching import MatchConfig
from umlcoach.model import ClassDiagram, Relationship
from umlcoach.similarity import class_diagram_similarity

from .conftest import make_class, random_diagram

CFG = MatchConfig()


def fig1_student(answer_key: ClassDiagram) -> ClassDiagram:
    """Four correctly named classes (with the answer's attributes) laid out
    somewhere else entirely, plus the relationships the learner drew."""
    wanted = {"Cart", "Customer", "Order", "Product"}
    by_name = {node.name: node for node in answer_key.classes}
    classes = []
    for i, name in enumerate(sorted(wanted)):
        src = by_name[name]
        classes.append(
            make_class(
                f"s{i + 1}",
                name,
                x=700 - 150 * i,
                y=50 + 90 * i,
                attrs=[(f"s{i + 1}x{j}", attr.name) for j, attr in enumerate(src.attributes)],
            )
        )
    ids = {node.name: node.id for node in classes}
    relationships = (
        Relationship("sr1", ids["Customer"], ids["Order"], mult_a="1", mult_b="*"),
        Relationship("sr2", ids["Cart"], ids["Product"]),
    )
    return ClassDiagram(classes=tuple(classes), relationships=relationships)


class TestFindCorrespondences:
    def test_fixture_self(self, answer_key):
        cs = find_correspondences(answer_key, answer_key, CFG)
        assert len(cs.entries) == 6
        assert all(entry.cs == 1.0 for entry in cs.entries)
        assert cs.non_corresponding_student_ids == ()

    def test_four_matching_names(self, answer_key):
        student = fig1_student(answer_key)
        cs = find_correspondences(student, answer_key, CFG)
        assert len(cs.entries) == 4
        matched_names = {
            next(n.name for n in student.classes if n.id == e.student_id) for e in cs.entries
        }
        assert matched_names == {"Cart", "Customer", "Order", "Product"}

    def test_below_threshold_is_non_corresponding(self):
        student = ClassDiagram(classes=(make_class("s1", "Memo"),))
        answer = ClassDiagram(classes=(make_class("a1", "Customer"),))
        cs = find_correspondences(student, answer, CFG)
        assert cs.entries == ()
        assert cs.non_corresponding_student_ids == ("s1",)

    def test_threshold_is_inclusive(self):
        # Attribute-free classes compare on the name alone; engineer a pair
        # whose class similarity is exactly 0.4: common pairs {ab,bc} give
        # 2*2/(4+6) for "abcde" vs "zzqrabc".
        student = ClassDiagram(classes=(make_class("s1", "abcde"),))
        answer = ClassDiagram(classes=(make_class("a1", "zzqrabc"),))
        from umlcoach.names import name_sim

        score = name_sim("abcde", "zzqrabc")
        assert score == pytest.approx(0.4, abs=1e-15)
        cs = find_correspondences(student, answer, CFG)
        assert len(cs.entries) == 1

    def test_tie_prefers_earlier_student_name(self):
        # "zz order" and "aa order" both share exactly {or,rd,de,er} with
        # "order" and have the same pair count, so their scores tie.
        student = ClassDiagram(
            classes=(make_class("s1", "zz order"), make_class("s2", "aa order"))
        )
        answer = ClassDiagram(classes=(make_class("a1", "order"),))
        cs = find_correspondences(student, answer, MatchConfig(correspondence_threshold=0.1))
        assert cs.entries[0].student_id == "s2"

    def test_one_to_one_both_ways(self):
        rng = random.Random(3)
        for _ in range(100):
            student = random_diagram(rng, "s")
            answer = random_diagram(rng, "a")
            cs = find_correspondences(student, answer, CFG)
            students = [e.student_id for e in cs.entries]
            answers = [e.answer_id for e in cs.entries]
            assert len(set(students)) == len(students)
            assert len(set(answers)) == len(answers)
            assert set(students) | set(cs.non_corresponding_student_ids) == {
                node.id for node in student.classes
            }


class TestTransformLayout:
    def test_identity_on_fixture(self, answer_key):
        result = transform_layout(answer_key, answer_key)
        assert result.converted_diagram == answer_key
        assert all(move.corresponding for move in result.moves)

    def test_fig1_positions_transfer_exactly(self, answer_key):
        student = fig1_student(answer_key)
        result = transform_layout(student, answer_key)
        positions = {node.name: (node.x, node.y) for node in answer_key.classes}
        for node in result.converted_diagram.classes:
            assert (node.x, node.y) == positions[node.name]

    def test_extra_class_parks_at_origin(self, answer_key):
        student = fig1_student(answer_key)
        extra = make_class("s9", "NoteClass", x=400, y=400)
        student = ClassDiagram(classes=student.classes + (extra,), relationships=student.relationships)
        result = transform_layout(student, answer_key)
        moves = {move.class_id: move for move in result.moves}
        assert moves["s9"].corresponding is False
        assert (moves["s9"].x, moves["s9"].y) == (0, 0)
        assert all(move.corresponding for cid, move in moves.items() if cid != "s9")

    def test_zero_correspondences_parks_everything(self, answer_key):
        student = ClassDiagram(
            classes=(make_class("s1", "Zzz", x=100, y=100), make_class("s2", "Qqq", x=200, y=200))
        )
        result = transform_layout(student, answer_key)
        assert all((move.x, move.y) == (0, 0) for move in result.moves)
        assert all(not move.corresponding for move in result.moves)

    def test_structure_preserved(self, answer_key):
        rng = random.Random(7)
        for _ in range(50):
            student = random_diagram(rng, "s")
            converted = transform_layout(student, answer_key).converted_diagram
            assert [node.id for node in converted.classes] == [node.id for node in student.classes]
            assert [node.name for node in converted.classes] == [
                node.name for node in student.classes
            ]
            assert [node.attributes for node in converted.classes] == [
                node.attributes for node in student.classes
            ]
            assert [(node.width, node.height) for node in converted.classes] == [
                (node.width, node.height) for node in student.classes
            ]
            assert converted.relationships == student.relationships

    def test_similarity_unchanged_by_transform(self, answer_key):
        rng = random.Random(13)
        for _ in range(30):
            student = random_diagram(rng, "s")
            converted = transform_layout(student, answer_key).converted_diagram
            assert class_diagram_similarity(student, answer_key) == class_diagram_similarity(
                converted, answer_key
            )

    def test_idempotent(self, answer_key):
        student = fig1_student(answer_key)
        first = transform_layout(student, answer_key)
        applied = apply_layout(student, first)
        second = transform_layout(applied, answer_key)
        assert second.moves == first.moves
        assert second.converted_diagram == first.converted_diagram

    def test_deterministic(self, answer_key):
        student = fig1_student(answer_key)
        assert transform_layout(student, answer_key) == transform_layout(student, answer_key)


class TestApplyLayout:
    def test_apply_returns_converted(self, answer_key):
        student = fig1_student(answer_key)
        result = transform_layout(student, answer_key)
        assert apply_layout(student, result) == result.converted_diagram

    def test_apply_twice_is_stable(self, answer_key):
        student = fig1_student(answer_key)
        result = transform_layout(student, answer_key)
        once = apply_layout(student, result)
        assert apply_layout(once, result) == once

    def test_stale_result_names_missing_id(self, answer_key):
        student = fig1_student(answer_key)
        result = transform_layout(student, answer_key)
        edited = ClassDiagram(
            classes=student.classes + (make_class("s9", "Late"),),
            relationships=student.relationships,
        )
        with pytest.raises(StaleLayoutError) as err:
            apply_layout(edited, result)
        assert err.value.class_id == "s9"

    def test_stale_result_on_removed_class(self, answer_key):
        student = fig1_student(answer_key)
        result = transform_layout(student, answer_key)
        shrunk = ClassDiagram(classes=student.classes[:-1], relationships=())
        with pytest.raises(StaleLayoutError):
            apply_layout(shrunk, result)
