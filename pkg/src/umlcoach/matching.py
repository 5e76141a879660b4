"""Greedy extraction of comparison pairs between a student diagram and an answer key.

The pairing procedure is greedy, one-to-one and deterministic: elements are
processed in a canonical order (lexicographic by normalized name, ties by id)
and each takes the best not-yet-consumed partner.  Canonical ordering is what
makes the whole pipeline invariant to how input lists happen to be ordered.

Two thresholds with deliberately different comparisons coexist here:

* name pairing requires ``name_sim > name_threshold`` (strict),
* layout correspondence requires class similarity ``>= correspondence_threshold``
  (inclusive); see :mod:`umlcoach.layout`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ClassDiagram, ClassNode, Relationship
from .names import name_sim, normalize_name


@dataclass(frozen=True)
class MatchConfig:
    """Thresholds for pairing and correspondence; both in [0, 1]."""

    name_threshold: float = 0.5
    correspondence_threshold: float = 0.4

    def __post_init__(self) -> None:
        for label, value in (
            ("name_threshold", self.name_threshold),
            ("correspondence_threshold", self.correspondence_threshold),
        ):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{label} must be within [0, 1], got {value}")


@dataclass(frozen=True)
class ClassPair:
    student_id: str
    answer_id: str
    cns: float


@dataclass(frozen=True)
class ClassMatching:
    pairs: tuple[ClassPair, ...]
    missing_answer_class_ids: tuple[str, ...]
    unmatched_student_class_ids: tuple[str, ...]

    @property
    def nmc(self) -> int:
        return len(self.missing_answer_class_ids)

    def answer_for(self, student_id: str) -> str | None:
        for pair in self.pairs:
            if pair.student_id == student_id:
                return pair.answer_id
        return None


@dataclass(frozen=True)
class AttributePair:
    student_id: str
    answer_id: str
    ans: float


@dataclass(frozen=True)
class AttributeMatching:
    pairs: tuple[AttributePair, ...]
    nma: int


PARALLEL = "parallel"
CROSSED = "crossed"


@dataclass(frozen=True)
class RelationshipPair:
    student_id: str
    answer_id: str
    #: ``parallel`` compares endA with endA, ``crossed`` compares endA with endB.
    end_alignment: str


@dataclass(frozen=True)
class RelationshipMatching:
    pairs: tuple[RelationshipPair, ...]
    nmr: int


def _canonical_named(items, name_of):
    return sorted(items, key=lambda item: (normalize_name(name_of(item)), item.id))


def _greedy_name_pairs(
    students, answers, threshold: float
) -> tuple[list[tuple[str, str, float]], list[str], list[str]]:
    """Shared greedy procedure over anything with ``id`` and ``name``."""
    remaining = _canonical_named(answers, lambda a: a.name)
    pairs: list[tuple[str, str, float]] = []
    unmatched_students: list[str] = []
    for student in _canonical_named(students, lambda s: s.name):
        best = None
        best_score = 0.0
        for candidate in remaining:
            score = name_sim(student.name, candidate.name)
            if score > best_score:
                best, best_score = candidate, score
        if best is not None and best_score > threshold:
            pairs.append((student.id, best.id, best_score))
            remaining.remove(best)
        else:
            unmatched_students.append(student.id)
    return pairs, [a.id for a in remaining], unmatched_students


def match_classes(student: ClassDiagram, answer: ClassDiagram, cfg: MatchConfig) -> ClassMatching:
    """Pair student classes with answer classes on name similarity alone.

    Leftover answer classes are the missing classes; their count is the
    matching's ``nmc``.
    """
    pairs, missing, unmatched = _greedy_name_pairs(
        student.classes, answer.classes, cfg.name_threshold
    )
    return ClassMatching(
        pairs=tuple(ClassPair(s, a, score) for s, a, score in pairs),
        missing_answer_class_ids=tuple(missing),
        unmatched_student_class_ids=tuple(unmatched),
    )


def match_attributes(cs: ClassNode, ca: ClassNode, cfg: MatchConfig) -> AttributeMatching:
    """Pair the attributes of one matched class pair; same greedy procedure."""
    pairs, missing, _ = _greedy_name_pairs(cs.attributes, ca.attributes, cfg.name_threshold)
    return AttributeMatching(
        pairs=tuple(AttributePair(s, a, score) for s, a, score in pairs),
        nma=len(missing),
    )


def pairwise_class_similarity(cs: ClassNode, ca: ClassNode, cfg: MatchConfig) -> float:
    """Class similarity of an arbitrary (student, answer) class pair.

    ``(name score + summed attribute scores) / (1 + NA + NMA)`` where NA is the
    student's attribute count.  No threshold gates the class-name term, so a
    pair can still score on attribute evidence when the names diverge; the
    pairing pipeline in :func:`match_classes` keeps its own gate.
    """
    am = match_attributes(cs, ca, cfg)
    numerator = name_sim(cs.name, ca.name) + sum(pair.ans for pair in am.pairs)
    return numerator / (1 + len(cs.attributes) + am.nma)


def _alignments(rs: Relationship, ra: Relationship, correspondence: dict[str, str]) -> list[str]:
    """Valid end alignments given the student-to-answer class pairing."""
    a = correspondence.get(rs.end_a)
    b = correspondence.get(rs.end_b)
    out = []
    if a == ra.end_a and b == ra.end_b:
        out.append(PARALLEL)
    if a == ra.end_b and b == ra.end_a:
        out.append(CROSSED)
    return out


def match_relationships(
    student: ClassDiagram,
    answer: ClassDiagram,
    cm: ClassMatching,
    cfg: MatchConfig | None = None,
    cas_table=None,
) -> RelationshipMatching:
    """Pair relationships whose end classes are matched class pairs.

    Candidates are consumed greedily by the student relationship's best
    achievable pair score (ties by answer id); for self loops both end
    alignments are tried and the better one kept.  ``cfg`` and ``cas_table``
    default to the package defaults and only influence which candidate wins
    when several are eligible.
    """
    from .similarity import DEFAULT_CAS_TABLE, relationship_similarity

    cfg = cfg or MatchConfig()
    table = cas_table if cas_table is not None else DEFAULT_CAS_TABLE
    correspondence = {pair.student_id: pair.answer_id for pair in cm.pairs}

    def rel_key(diagram: ClassDiagram, rel: Relationship) -> tuple:
        ends = sorted(
            normalize_name(diagram.class_by_id(end).name) for end in (rel.end_a, rel.end_b)
        )
        return (ends[0], ends[1], rel.id)

    remaining = sorted(answer.relationships, key=lambda r: rel_key(answer, r))
    pairs: list[RelationshipPair] = []
    for rs in sorted(student.relationships, key=lambda r: rel_key(student, r)):
        best: tuple[float, str, str] | None = None  # (score, answer id, alignment)
        for ra in remaining:
            for alignment in _alignments(rs, ra, correspondence):
                score = relationship_similarity(rs, ra, alignment, cfg, table)
                if best is None or score > best[0] or (score == best[0] and ra.id < best[1]):
                    best = (score, ra.id, alignment)
        if best is not None:
            pairs.append(RelationshipPair(rs.id, best[1], best[2]))
            remaining = [r for r in remaining if r.id != best[1]]
    return RelationshipMatching(pairs=tuple(pairs), nmr=len(remaining))
