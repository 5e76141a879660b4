"""Append-only per-session snapshot log, one JSON Lines file per session.

Every learner edit, check and submission lands here as a full copy of the
diagram, so any past state can be replayed and scored later.  One line per
record::

    {"session":"s1","seq":1,"ts":"2025-01-01T00:00:00.000Z","event":"edit","diagram":{...}}

Appends fsync before returning, which is all the durability a desk-scale
exercise needs.  Appends to one session are serialized in-process; reads may
run concurrently and observe a prefix.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .model import ClassDiagram, diagram_from_doc, diagram_to_doc

EVENTS = ("edit", "check", "submit")


class UnknownSessionError(LookupError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"unknown session {session_id!r}")


class DuplicateSessionError(ValueError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"session {session_id!r} already exists")


@dataclass(frozen=True)
class SnapshotRecord:
    session_id: str
    seq: int
    ts: str  # UTC, millisecond precision, e.g. 2025-01-01T00:00:00.000Z
    event: str
    diagram: ClassDiagram

    def to_doc(self) -> dict:
        return {
            "session": self.session_id,
            "seq": self.seq,
            "ts": self.ts,
            "event": self.event,
            "diagram": diagram_to_doc(self.diagram),
        }


def record_from_doc(doc: dict) -> SnapshotRecord:
    return SnapshotRecord(
        session_id=doc["session"],
        seq=doc["seq"],
        ts=doc["ts"],
        event=doc["event"],
        diagram=diagram_from_doc(doc["diagram"]),
    )


def parse_timestamp(ts: str) -> datetime:
    return datetime.strptime(ts, "%Y-%m-%dT%H:%M:%S.%fZ").replace(tzinfo=timezone.utc)


def format_timestamp(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.") + (
        f"{moment.microsecond // 1000:03d}Z"
    )


def read_snapshot_log(path: Path | str) -> list[SnapshotRecord]:
    """Parse one session's JSONL file, e.g. for offline analysis."""
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(record_from_doc(json.loads(line)))
    return records


class SnapshotStore:
    """File-backed store rooted at ``root/sessions/<sessionId>.jsonl``.

    ``clock`` exists for tests; record timestamps are clamped to be
    non-decreasing within a session regardless of what the clock returns.
    """

    def __init__(self, root: Path | str, clock: Callable[[], datetime] | None = None):
        self.root = Path(root)
        self._sessions_dir = self.root / "sessions"
        self._sessions_dir.mkdir(parents=True, exist_ok=True)
        self._clock = clock or (lambda: datetime.now(timezone.utc))
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, session_id: str) -> Path:
        if not session_id or "/" in session_id or session_id.startswith("."):
            raise UnknownSessionError(session_id)
        return self._sessions_dir / f"{session_id}.jsonl"

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def create_session(self, session_id: str) -> None:
        path = self._path(session_id)
        with self._lock(session_id):
            if path.exists():
                raise DuplicateSessionError(session_id)
            path.touch()

    def session_exists(self, session_id: str) -> bool:
        try:
            return self._path(session_id).exists()
        except UnknownSessionError:
            return False

    def append_snapshot(self, session_id: str, event: str, diagram: ClassDiagram) -> SnapshotRecord:
        if event not in EVENTS:
            raise ValueError(f"event must be one of {EVENTS}, got {event!r}")
        path = self._path(session_id)
        with self._lock(session_id):
            if not path.exists():
                raise UnknownSessionError(session_id)
            previous = self._read(path)
            ts = format_timestamp(self._clock())
            if previous and previous[-1].ts > ts:
                ts = previous[-1].ts
            record = SnapshotRecord(
                session_id=session_id,
                seq=len(previous) + 1,
                ts=ts,
                event=event,
                diagram=diagram,
            )
            line = json.dumps(record.to_doc(), ensure_ascii=False) + "\n"
            with open(path, "a", encoding="utf-8") as handle:
                handle.write(line)
                handle.flush()
                os.fsync(handle.fileno())
            return record

    def list_snapshots(self, session_id: str) -> list[SnapshotRecord]:
        path = self._path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        return self._read(path)

    def count_check_events(self, session_id: str) -> int:
        return sum(1 for record in self.list_snapshots(session_id) if record.event == "check")

    def session_ids(self) -> list[str]:
        return sorted(path.stem for path in self._sessions_dir.glob("*.jsonl"))

    @staticmethod
    def _read(path: Path) -> list[SnapshotRecord]:
        return read_snapshot_log(path)
