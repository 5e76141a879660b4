"""Domain types for class diagrams and the cdx/1 interchange format.

All types are immutable values; edits are modeled as building new values.
Coordinates are integer pixels with the origin at the top-left of the
drawing area (x grows rightward, y downward).  Relationships are undirected
and carry no coordinates of their own, only the ids of the classes at their
two ends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Iterator

from .names import normalize_name

FORMAT_NAME = "cdx/1"

#: The closed set of multiplicity tokens; ``None`` represents an absent
#: multiplicity and compares as its own token.
MULTIPLICITY_TOKENS = ("1", "0..1", "1..*", "*")

Multiplicity = str | None


class DiagramFormatError(ValueError):
    """Raised when a document cannot be parsed into a valid diagram.

    ``path`` locates the offending element, e.g. ``classes[2].attributes[0].id``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Violation:
    """A broken invariant found by :func:`validate_diagram`."""

    rule: str
    element_id: str
    detail: str


@dataclass(frozen=True)
class Attribute:
    id: str
    name: str


@dataclass(frozen=True)
class ClassNode:
    id: str
    name: str
    x: int
    y: int
    width: int
    height: int
    attributes: tuple[Attribute, ...] = ()


@dataclass(frozen=True)
class Relationship:
    id: str
    end_a: str
    end_b: str
    name: str = ""
    mult_a: Multiplicity = None
    mult_b: Multiplicity = None


@dataclass(frozen=True)
class ClassDiagram:
    classes: tuple[ClassNode, ...] = ()
    relationships: tuple[Relationship, ...] = ()

    def class_by_id(self, class_id: str) -> ClassNode:
        for node in self.classes:
            if node.id == class_id:
                return node
        raise KeyError(class_id)

    def iter_attributes(self) -> Iterator[tuple[ClassNode, Attribute]]:
        for node in self.classes:
            for attr in node.attributes:
                yield node, attr


@dataclass(frozen=True)
class Exercise:
    id: str
    problem_text: str
    answer_key: ClassDiagram
    vocabulary: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Session:
    id: str
    exercise_id: str
    learner_id: str
    created_at: str  # ISO-8601 UTC


# --------------------------------------------------------------------------- parsing

def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise DiagramFormatError(path, f"missing required field '{key}'")
    return obj[key]


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise DiagramFormatError(path, f"expected string, got {type(value).__name__}")
    return value


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DiagramFormatError(path, f"expected integer, got {type(value).__name__}")
    return value


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise DiagramFormatError(path, f"expected array, got {type(value).__name__}")
    return value


def _as_obj(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise DiagramFormatError(path, f"expected object, got {type(value).__name__}")
    return value


def _parse_multiplicity(obj: dict, key: str, path: str) -> Multiplicity:
    if key not in obj or obj[key] is None:
        return None
    token = _as_str(obj[key], f"{path}.{key}")
    if token not in MULTIPLICITY_TOKENS:
        raise DiagramFormatError(
            f"{path}.{key}",
            f"multiplicity {token!r} not one of {', '.join(MULTIPLICITY_TOKENS)}",
        )
    return token


def diagram_from_doc(doc: Any, path: str = "$") -> ClassDiagram:
    """Build a validated :class:`ClassDiagram` from a decoded cdx/1 object.

    Unknown fields are ignored; list order is preserved.  Raises
    :class:`DiagramFormatError` with a path to the offending element.
    """
    obj = _as_obj(doc, path)
    fmt = _as_str(_require(obj, "format", path), f"{path}.format")
    if fmt != FORMAT_NAME:
        raise DiagramFormatError(f"{path}.format", f"unsupported format {fmt!r}")

    classes: list[ClassNode] = []
    for i, raw in enumerate(_as_list(_require(obj, "classes", path), f"{path}.classes")):
        cpath = f"{path}.classes[{i}]"
        cobj = _as_obj(raw, cpath)
        attributes: list[Attribute] = []
        for j, raw_attr in enumerate(
            _as_list(_require(cobj, "attributes", cpath), f"{cpath}.attributes")
        ):
            apath = f"{cpath}.attributes[{j}]"
            aobj = _as_obj(raw_attr, apath)
            attributes.append(
                Attribute(
                    id=_as_str(_require(aobj, "id", apath), f"{apath}.id"),
                    name=_as_str(_require(aobj, "name", apath), f"{apath}.name"),
                )
            )
        classes.append(
            ClassNode(
                id=_as_str(_require(cobj, "id", cpath), f"{cpath}.id"),
                name=_as_str(_require(cobj, "name", cpath), f"{cpath}.name"),
                x=_as_int(_require(cobj, "x", cpath), f"{cpath}.x"),
                y=_as_int(_require(cobj, "y", cpath), f"{cpath}.y"),
                width=_as_int(_require(cobj, "width", cpath), f"{cpath}.width"),
                height=_as_int(_require(cobj, "height", cpath), f"{cpath}.height"),
                attributes=tuple(attributes),
            )
        )

    relationships: list[Relationship] = []
    for i, raw in enumerate(
        _as_list(_require(obj, "relationships", path), f"{path}.relationships")
    ):
        rpath = f"{path}.relationships[{i}]"
        robj = _as_obj(raw, rpath)
        name = ""
        if "name" in robj and robj["name"] is not None:
            name = _as_str(robj["name"], f"{rpath}.name")
        relationships.append(
            Relationship(
                id=_as_str(_require(robj, "id", rpath), f"{rpath}.id"),
                end_a=_as_str(_require(robj, "endA", rpath), f"{rpath}.endA"),
                end_b=_as_str(_require(robj, "endB", rpath), f"{rpath}.endB"),
                name=name,
                mult_a=_parse_multiplicity(robj, "multA", rpath),
                mult_b=_parse_multiplicity(robj, "multB", rpath),
            )
        )

    diagram = ClassDiagram(classes=tuple(classes), relationships=tuple(relationships))
    violations = validate_diagram(diagram)
    if violations:
        v = violations[0]
        raise DiagramFormatError(
            _violation_path(diagram, v, path), f"{v.rule} on {v.element_id!r}: {v.detail}"
        )
    return diagram


def parse_diagram(document: str) -> ClassDiagram:
    """Parse cdx/1 text into a structurally valid diagram."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DiagramFormatError("$", f"malformed JSON: {exc}") from exc
    return diagram_from_doc(doc)


def _violation_path(diagram: ClassDiagram, v: Violation, root: str) -> str:
    for i, node in enumerate(diagram.classes):
        if node.id == v.element_id:
            return f"{root}.classes[{i}]"
        for j, attr in enumerate(node.attributes):
            if attr.id == v.element_id:
                return f"{root}.classes[{i}].attributes[{j}]"
    for i, rel in enumerate(diagram.relationships):
        if rel.id == v.element_id:
            return f"{root}.relationships[{i}]"
    return root


# --------------------------------------------------------------------------- serialization

def diagram_to_doc(diagram: ClassDiagram) -> dict:
    """Canonical document form: fixed key order, lists in stored order.

    Relationship ``multA``/``multB`` are omitted when absent; ``name`` is
    always emitted (possibly empty) so structurally equal diagrams produce
    identical documents.
    """
    classes = []
    for node in diagram.classes:
        classes.append(
            {
                "id": node.id,
                "name": node.name,
                "x": node.x,
                "y": node.y,
                "width": node.width,
                "height": node.height,
                "attributes": [{"id": a.id, "name": a.name} for a in node.attributes],
            }
        )
    relationships = []
    for rel in diagram.relationships:
        entry: dict[str, Any] = {"id": rel.id, "name": rel.name, "endA": rel.end_a, "endB": rel.end_b}
        if rel.mult_a is not None:
            entry["multA"] = rel.mult_a
        if rel.mult_b is not None:
            entry["multB"] = rel.mult_b
        relationships.append(entry)
    return {"format": FORMAT_NAME, "classes": classes, "relationships": relationships}


def serialize_diagram(diagram: ClassDiagram) -> str:
    """Canonical UTF-8 text; deterministic, ends with a newline."""
    return json.dumps(diagram_to_doc(diagram), ensure_ascii=False, indent=1) + "\n"


# --------------------------------------------------------------------------- validation

def validate_diagram(diagram: ClassDiagram) -> list[Violation]:
    """Check every structural invariant; violations are data, not failures."""
    violations: list[Violation] = []
    class_ids: set[str] = set()
    element_ids: set[str] = set()

    for node in diagram.classes:
        if node.id in class_ids:
            violations.append(Violation("duplicate-id", node.id, "class id used twice"))
        class_ids.add(node.id)
        element_ids.add(node.id)
        if not normalize_name(node.name):
            violations.append(Violation("empty-name", node.id, "class name empty after normalization"))
        if node.width <= 0:
            violations.append(Violation("non-positive-size", node.id, f"width {node.width} must be > 0"))
        if node.height <= 0:
            violations.append(Violation("non-positive-size", node.id, f"height {node.height} must be > 0"))

    attr_ids: set[str] = set()
    for node, attr in diagram.iter_attributes():
        if attr.id in attr_ids or attr.id in class_ids:
            violations.append(Violation("duplicate-id", attr.id, "attribute id used twice"))
        attr_ids.add(attr.id)
        if not normalize_name(attr.name):
            violations.append(
                Violation("empty-name", attr.id, f"attribute name empty after normalization (class {node.id})")
            )

    rel_ids: set[str] = set()
    for rel in diagram.relationships:
        if rel.id in rel_ids or rel.id in class_ids or rel.id in attr_ids:
            violations.append(Violation("duplicate-id", rel.id, "relationship id used twice"))
        rel_ids.add(rel.id)
        for end in (rel.end_a, rel.end_b):
            if end not in class_ids:
                violations.append(
                    Violation("dangling-end", rel.id, f"relationship end references unknown class {end!r}")
                )
        for mult in (rel.mult_a, rel.mult_b):
            if mult is not None and mult not in MULTIPLICITY_TOKENS:
                violations.append(Violation("bad-multiplicity", rel.id, f"token {mult!r} outside the enum"))

    return violations


def move_class(diagram: ClassDiagram, class_id: str, x: int, y: int) -> ClassDiagram:
    """New diagram with one class repositioned; everything else shared."""
    classes = tuple(
        replace(node, x=x, y=y) if node.id == class_id else node for node in diagram.classes
    )
    return replace(diagram, classes=classes)
