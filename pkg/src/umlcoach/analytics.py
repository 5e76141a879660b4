"""Instructor-side computations over recorded sessions.

A similarity series samples a session's snapshot log on a fixed grid: at each
tick the latest snapshot at or before the tick is scored, making the series a
step function of recorded states (diagrams are never interpolated).  The last
snapshot is always scored as the final point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .matching import MatchConfig
from .model import ClassDiagram
from .similarity import CaSTable, SimilarityReport, class_diagram_similarity
from .stats import pearson
from .store import SnapshotRecord, parse_timestamp

CSV_HEADER = "elapsed_s,cds,cs_all,rs_all"


@dataclass(frozen=True)
class SeriesPoint:
    elapsed_s: int
    cds: float
    cs_all: float
    rs_all: float


@dataclass(frozen=True)
class SimilaritySeries:
    points: tuple[SeriesPoint, ...]

    def to_doc(self) -> dict:
        return {
            "points": [
                {"elapsedS": p.elapsed_s, "cds": p.cds, "csAll": p.cs_all, "rsAll": p.rs_all}
                for p in self.points
            ]
        }

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for p in self.points:
            lines.append(f"{p.elapsed_s},{p.cds!r},{p.cs_all!r},{p.rs_all!r}")
        return "\n".join(lines) + "\n"


def similarity_series(
    snapshots: Sequence[SnapshotRecord],
    answer: ClassDiagram,
    cfg: MatchConfig | None = None,
    table: CaSTable | None = None,
    interval_seconds: int = 60,
) -> SimilaritySeries:
    """Score a session at fixed intervals from its first snapshot.

    Elapsed times are whole seconds.  Ticks fall strictly inside the session
    span; the final point is the last snapshot at the rounded-up span, so a
    one-snapshot session yields exactly one point at zero.
    """
    if not snapshots:
        raise ValueError("session has no snapshots")
    if interval_seconds <= 0:
        raise ValueError(f"interval must be positive, got {interval_seconds}")

    timed = sorted(
        ((parse_timestamp(record.ts), record) for record in snapshots),
        key=lambda pair: (pair[0], pair[1].seq),
    )
    start = timed[0][0]
    span_ms = round((timed[-1][0] - start).total_seconds() * 1000)

    def score(record: SnapshotRecord) -> SimilarityReport:
        return class_diagram_similarity(record.diagram, answer, cfg, table)

    points: list[SeriesPoint] = []
    tick = 0
    while tick * interval_seconds * 1000 < span_ms:
        elapsed = tick * interval_seconds
        cutoff_ms = elapsed * 1000
        latest = None
        for moment, record in timed:
            if round((moment - start).total_seconds() * 1000) <= cutoff_ms:
                latest = record
            else:
                break
        report = score(latest)
        points.append(SeriesPoint(elapsed, report.cds, report.cs_all, report.rs_all))
        tick += 1

    final = score(timed[-1][1])
    points.append(
        SeriesPoint(math.ceil(span_ms / 1000), final.cds, final.cs_all, final.rs_all)
    )
    return SimilaritySeries(points=tuple(points))


def per_class_averages(
    reports: Sequence[SimilarityReport], answer: ClassDiagram
) -> dict[str, float]:
    """Mean per-answer-class score across reports, keyed by answer class name.

    A report in which an answer class went unmatched contributes zero for that
    class.  Assumes the answer key has distinct class names, which any sane
    answer key does.
    """
    if not reports:
        raise ValueError("no reports to average")
    means: dict[str, float] = {}
    for node in answer.classes:
        total = 0.0
        for report in reports:
            student_id = next(
                (sid for sid, aid, _ in report.nma if aid == node.id), None
            )
            if student_id is not None:
                total += dict(report.per_class)[student_id]
        means[node.name] = total / len(reports)
    return means


def usage_similarity_correlation(
    sessions: Sequence[Sequence[SnapshotRecord]],
    answer: ClassDiagram,
    cfg: MatchConfig | None = None,
    table: CaSTable | None = None,
) -> float:
    """Correlation between per-session check counts and final diagram scores."""
    if len(sessions) < 2:
        raise ValueError("need at least two sessions")
    checks: list[float] = []
    finals: list[float] = []
    for snapshots in sessions:
        if not snapshots:
            raise ValueError("session has no snapshots")
        ordered = sorted(snapshots, key=lambda record: record.seq)
        checks.append(sum(1 for record in ordered if record.event == "check"))
        finals.append(class_diagram_similarity(ordered[-1].diagram, answer, cfg, table).cds)
    return pearson(checks, finals)
