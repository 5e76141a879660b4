"""Class-diagram modeling-exercise assistant.

Grades learner diagrams against an instructor answer key, transfers the
answer's class layout onto the learner's work, colors element names by how
well they match, logs every edit as a snapshot and computes instructor
analytics over recorded sessions.
"""

from .feedback import BLACK, BLUE, RED, CheckResult, build_check_result, color_for_name
from .layout import (
    ClassMove,
    Correspondence,
    CorrespondenceSet,
    LayoutResult,
    StaleLayoutError,
    apply_layout,
    find_correspondences,
    transform_layout,
)
from .matching import (
    AttributeMatching,
    ClassMatching,
    MatchConfig,
    RelationshipMatching,
    match_attributes,
    match_classes,
    match_relationships,
    pairwise_class_similarity,
)
from .model import (
    Attribute,
    ClassDiagram,
    ClassNode,
    DiagramFormatError,
    Exercise,
    Multiplicity,
    MULTIPLICITY_TOKENS,
    Relationship,
    Session,
    Violation,
    diagram_from_doc,
    diagram_to_doc,
    parse_diagram,
    serialize_diagram,
    validate_diagram,
)
from .names import bigram_bag, name_sim, normalize_name
from .similarity import (
    CaSTable,
    DEFAULT_CAS_TABLE,
    SimilarityReport,
    class_diagram_similarity,
    class_similarity,
    multiplicity_similarity,
    overall_class_similarity,
    overall_relationship_similarity,
    relationship_name_similarity,
    relationship_similarity,
)

__version__ = "0.1.0"
