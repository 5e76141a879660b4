"""Shared fixtures: the bundled answer key, the misspelled-order scenario and
a random diagram generator over a small fixed vocabulary."""

from __future__ import annotations

import random

import pytest

from umlcoach.fixtures import wakaba_answer
from umlcoach.model import Attribute, ClassDiagram, ClassNode, Relationship

WORDS = ("order", "orders", "cart", "customer", "product", "item", "code", "memo")
MULTIPLICITIES = (None, "1", "0..1", "1..*", "*")


@pytest.fixture(scope="session")
def answer_key() -> ClassDiagram:
    return wakaba_answer()


def make_class(cid, name, x=0, y=0, attrs=(), width=160, height=80):
    return ClassNode(
        id=cid,
        name=name,
        x=x,
        y=y,
        width=width,
        height=height,
        attributes=tuple(Attribute(id=aid, name=aname) for aid, aname in attrs),
    )


@pytest.fixture
def oder_student() -> ClassDiagram:
    """Two classes, one misspelled, one relationship; scores are hand-known."""
    return ClassDiagram(
        classes=(
            make_class("s1", "Customer", 10, 10, [("s1a1", "name")]),
            make_class("s2", "Oder", 260, 10, [("s2a1", "order code")]),
        ),
        relationships=(Relationship("sr1", "s1", "s2", mult_a="1", mult_b="*"),),
    )


@pytest.fixture
def oder_answer() -> ClassDiagram:
    return ClassDiagram(
        classes=(
            make_class("t1", "Customer", 40, 40, [("t1a1", "name")]),
            make_class("t2", "Order", 320, 40, [("t2a1", "order code")]),
        ),
        relationships=(Relationship("tr1", "t1", "t2", mult_a="1", mult_b="*"),),
    )


def random_diagram(
    rng: random.Random,
    prefix: str,
    max_classes: int = 4,
    max_attrs: int = 3,
    max_relationships: int = 4,
) -> ClassDiagram:
    """Diagram over the fixed vocabulary; names may repeat across classes."""
    n_classes = rng.randint(0, max_classes)
    classes = []
    attr_counter = 0
    for i in range(n_classes):
        n_attrs = rng.randint(0, max_attrs)
        attrs = []
        for _ in range(n_attrs):
            attr_counter += 1
            attrs.append((f"{prefix}a{attr_counter}", rng.choice(WORDS)))
        classes.append(
            make_class(
                f"{prefix}c{i + 1}",
                rng.choice(WORDS),
                x=rng.randint(0, 900),
                y=rng.randint(0, 600),
                attrs=attrs,
            )
        )
    relationships = []
    if classes:
        for j in range(rng.randint(0, max_relationships)):
            relationships.append(
                Relationship(
                    id=f"{prefix}r{j + 1}",
                    end_a=rng.choice(classes).id,
                    end_b=rng.choice(classes).id,
                    name=rng.choice(("", "", rng.choice(WORDS))),
                    mult_a=rng.choice(MULTIPLICITIES),
                    mult_b=rng.choice(MULTIPLICITIES),
                )
            )
    return ClassDiagram(classes=tuple(classes), relationships=tuple(relationships))


def shuffled(diagram: ClassDiagram, rng: random.Random) -> ClassDiagram:
    """Same diagram with every list (classes, attributes, relationships) reordered."""
    classes = list(diagram.classes)
    rng.shuffle(classes)
    reordered = []
    for node in classes:
        attrs = list(node.attributes)
        rng.shuffle(attrs)
        reordered.append(
            ClassNode(
                id=node.id,
                name=node.name,
                x=node.x,
                y=node.y,
                width=node.width,
                height=node.height,
                attributes=tuple(attrs),
            )
        )
    relationships = list(diagram.relationships)
    rng.shuffle(relationships)
    return ClassDiagram(classes=tuple(reordered), relationships=tuple(relationships))
