"""Scalar similarity formulas and the full diagram-vs-answer report.

Score structure: per-class scores aggregate name and attribute evidence,
per-relationship scores aggregate name and multiplicity evidence, and the
diagram score is the plain mean of the two aggregates.  Missing answer
elements enter through the aggregate denominators, never as negative terms.

Degenerate 0/0 aggregates (both diagrams lack classes, or both lack
relationships) score 1.0 so that self-similarity is always exactly 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matching import (
    AttributeMatching,
    ClassMatching,
    MatchConfig,
    RelationshipPair,
    match_attributes,
    match_classes,
    match_relationships,
    PARALLEL,
)
from .model import ClassDiagram, ClassNode, Multiplicity, Relationship, MULTIPLICITY_TOKENS
from .names import name_sim, normalize_name


class CaSTable:
    """Symmetric multiplicity-pair similarity lookup.

    Keys are unordered token pairs (``None`` for an absent multiplicity);
    diagonal entries must be 1.0 and every value must lie in [0, 1].
    """

    def __init__(self, scores: dict[frozenset, float]):
        tokens = (*MULTIPLICITY_TOKENS, None)
        self._scores: dict[frozenset, float] = {}
        for a in tokens:
            for b in tokens:
                key = frozenset((a, b))
                if key not in scores:
                    raise ValueError(f"table misses pair ({a!r}, {b!r})")
                value = scores[key]
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"score for ({a!r}, {b!r}) out of [0, 1]: {value}")
                if a == b and value != 1.0:
                    raise ValueError(f"diagonal entry for {a!r} must be 1.0, got {value}")
                self._scores[key] = value

    def lookup(self, m1: Multiplicity, m2: Multiplicity) -> float:
        return self._scores[frozenset((m1, m2))]

    @classmethod
    def from_pairs(cls, entries: list[tuple[Multiplicity, Multiplicity, float]]) -> "CaSTable":
        return cls({frozenset((a, b)): score for a, b, score in entries})


def _default_table() -> CaSTable:
    # Tokens read as intervals (1=[1,1], 0..1=[0,1], 1..*=[1,inf], *=[0,inf]);
    # 0.5 per shared endpoint.  Both multiplicities absent scores 1.0, a mixed
    # absent/present pair scores 0.0.
    lower = {"1": 1, "0..1": 0, "1..*": 1, "*": 0}
    upper = {"1": 1, "0..1": 1, "1..*": None, "*": None}
    entries: list[tuple[Multiplicity, Multiplicity, float]] = []
    for a in MULTIPLICITY_TOKENS:
        for b in MULTIPLICITY_TOKENS:
            score = 0.5 * (lower[a] == lower[b]) + 0.5 * (upper[a] == upper[b])
            entries.append((a, b, score))
        entries.append((a, None, 0.0))
    entries.append((None, None, 1.0))
    return CaSTable.from_pairs(entries)


DEFAULT_CAS_TABLE = _default_table()


def cas_table_from_doc(doc: dict) -> CaSTable:
    """Read a table from config JSON: ``{"pairs": [{"a","b","score"}, ...]}``.

    ``a``/``b`` are multiplicity tokens or ``null`` for an absent
    multiplicity; every unordered pair must be covered.
    """
    entries: list[tuple[Multiplicity, Multiplicity, float]] = []
    for i, raw in enumerate(doc.get("pairs", [])):
        try:
            entries.append((raw["a"], raw["b"], float(raw["score"])))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"pairs[{i}] must carry 'a', 'b' and a numeric 'score'") from exc
    return CaSTable.from_pairs(entries)


def cas_table_to_doc(table: CaSTable) -> dict:
    pairs = []
    seen: set[frozenset] = set()
    for a in (*MULTIPLICITY_TOKENS, None):
        for b in (*MULTIPLICITY_TOKENS, None):
            key = frozenset((a, b))
            if key in seen:
                continue
            seen.add(key)
            pairs.append({"a": a, "b": b, "score": table.lookup(a, b)})
    return {"pairs": pairs}


@dataclass(frozen=True)
class SimilarityReport:
    cds: float
    cs_all: float
    rs_all: float
    #: (student class id, class score), canonical class order
    per_class: tuple[tuple[str, float], ...]
    #: (student relationship id, relationship score), canonical order
    per_relationship: tuple[tuple[str, float], ...]
    nmc: int
    nmr: int
    #: (student class id, answer class id, missing attribute count) per matched pair
    nma: tuple[tuple[str, str, int], ...]

    def to_doc(self) -> dict:
        return {
            "cds": self.cds,
            "csAll": self.cs_all,
            "rsAll": self.rs_all,
            "perClass": [{"studentClassId": cid, "cs": score} for cid, score in self.per_class],
            "perRelationship": [
                {"studentRelationshipId": rid, "rs": score} for rid, score in self.per_relationship
            ],
            "nmc": self.nmc,
            "nmr": self.nmr,
            "nma": [
                {"studentClassId": sid, "answerClassId": aid, "count": count}
                for sid, aid, count in self.nma
            ],
        }


def class_similarity(
    cs: ClassNode, cm: ClassMatching, am: AttributeMatching | None = None
) -> float:
    """Per-class score: 0 when the class is unpaired, else the name score plus
    summed attribute scores over ``1 + NA + NMA``."""
    pair = next((p for p in cm.pairs if p.student_id == cs.id), None)
    if pair is None:
        return 0.0
    if am is None:
        raise ValueError(f"attribute matching required for paired class {cs.id}")
    return (pair.cns + sum(p.ans for p in am.pairs)) / (1 + len(cs.attributes) + am.nma)


def overall_class_similarity(
    student: ClassDiagram, cm: ClassMatching, per_class: dict[str, float]
) -> float:
    """Aggregate class score over student classes plus missing answer classes.

    Summation runs in canonical class order so the result is bit-identical no
    matter how the input lists were ordered.
    """
    denominator = len(student.classes) + cm.nmc
    if denominator == 0:
        return 1.0
    ordered = sorted(student.classes, key=lambda node: (normalize_name(node.name), node.id))
    return sum(per_class[node.id] for node in ordered) / denominator


def relationship_name_similarity(rs: Relationship, ra: Relationship, cfg: MatchConfig) -> float:
    """Name score of a matched relationship pair.

    Two unnamed relationships agree completely (1.0); a named one against an
    unnamed one cannot (0.0).  Otherwise the name similarity counts only when
    it exceeds the name threshold.
    """
    empty_s = not normalize_name(rs.name)
    empty_a = not normalize_name(ra.name)
    if empty_s and empty_a:
        return 1.0
    if empty_s or empty_a:
        return 0.0
    score = name_sim(rs.name, ra.name)
    return score if score > cfg.name_threshold else 0.0


def multiplicity_similarity(m1: Multiplicity, m2: Multiplicity, table: CaSTable) -> float:
    return table.lookup(m1, m2)


def relationship_similarity(
    rs: Relationship,
    ra: Relationship,
    end_alignment: str,
    cfg: MatchConfig,
    table: CaSTable,
) -> float:
    """Pair score: (name score + both aligned end multiplicity scores) / 3."""
    rns = relationship_name_similarity(rs, ra, cfg)
    if end_alignment == PARALLEL:
        ends = ((rs.mult_a, ra.mult_a), (rs.mult_b, ra.mult_b))
    else:
        ends = ((rs.mult_a, ra.mult_b), (rs.mult_b, ra.mult_a))
    cas = sum(multiplicity_similarity(m1, m2, table) for m1, m2 in ends)
    return (rns + cas) / 3


def overall_relationship_similarity(
    student: ClassDiagram, nmr: int, per_relationship: dict[str, float]
) -> float:
    denominator = len(student.relationships) + nmr
    if denominator == 0:
        return 1.0
    ordered = sorted(student.relationships, key=lambda rel: _relationship_order_key(student, rel))
    return sum(per_relationship[rel.id] for rel in ordered) / denominator


def _relationship_order_key(diagram: ClassDiagram, rel: Relationship) -> tuple:
    ends = sorted(normalize_name(diagram.class_by_id(end).name) for end in (rel.end_a, rel.end_b))
    return (ends[0], ends[1], rel.id)


def class_diagram_similarity(
    student: ClassDiagram,
    answer: ClassDiagram,
    cfg: MatchConfig | None = None,
    table: CaSTable | None = None,
) -> SimilarityReport:
    """Run the full pipeline and assemble a report.

    The report ignores all coordinates and sizes; translating every class
    leaves it unchanged.  List fields are in canonical element order so the
    report is also invariant to input list order.
    """
    cfg = cfg or MatchConfig()
    table = table or DEFAULT_CAS_TABLE

    cm = match_classes(student, answer, cfg)
    answer_by_id = {node.id: node for node in answer.classes}
    student_by_id = {node.id: node for node in student.classes}

    per_class: dict[str, float] = {node.id: 0.0 for node in student.classes}
    nma_entries: list[tuple[str, str, int]] = []
    for pair in cm.pairs:
        cs_node = student_by_id[pair.student_id]
        am = match_attributes(cs_node, answer_by_id[pair.answer_id], cfg)
        per_class[pair.student_id] = class_similarity(cs_node, cm, am)
        nma_entries.append((pair.student_id, pair.answer_id, am.nma))

    rm = match_relationships(student, answer, cm, cfg, table)
    answer_rel_by_id = {rel.id: rel for rel in answer.relationships}
    pair_by_student: dict[str, RelationshipPair] = {p.student_id: p for p in rm.pairs}
    per_relationship: dict[str, float] = {}
    for rel in student.relationships:
        pair = pair_by_student.get(rel.id)
        if pair is None:
            per_relationship[rel.id] = 0.0
        else:
            per_relationship[rel.id] = relationship_similarity(
                rel, answer_rel_by_id[pair.answer_id], pair.end_alignment, cfg, table
            )

    cs_all = overall_class_similarity(student, cm, per_class)
    rs_all = overall_relationship_similarity(student, rm.nmr, per_relationship)

    class_order = sorted(
        student.classes, key=lambda node: (normalize_name(node.name), node.id)
    )
    rel_order = sorted(
        student.relationships, key=lambda rel: _relationship_order_key(student, rel)
    )

    return SimilarityReport(
        cds=(cs_all + rs_all) / 2,
        cs_all=cs_all,
        rs_all=rs_all,
        per_class=tuple((node.id, per_class[node.id]) for node in class_order),
        per_relationship=tuple((rel.id, per_relationship[rel.id]) for rel in rel_order),
        nmc=cm.nmc,
        nmr=rm.nmr,
        nma=tuple(nma_entries),
    )
