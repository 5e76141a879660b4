"""HTTP facade: exercises, sessions, snapshot ingestion, the check button, analytics.

Two static bearer-token classes drive authorization: learner tokens may work
on exercises and their own sessions but never see a similarity value or the
answer key; instructor tokens additionally manage exercises and read the
numeric analytics.  The check endpoint always recomputes from the latest
stored snapshot, so what the learner saw and what the log says never drift
apart.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Body, Depends, FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse, Response

from .analytics import per_class_averages, similarity_series
from .feedback import build_check_result
from .layout import transform_layout
from .matching import MatchConfig
from .model import (
    ClassDiagram,
    DiagramFormatError,
    Exercise,
    Session,
    diagram_from_doc,
    diagram_to_doc,
)
from .similarity import CaSTable, DEFAULT_CAS_TABLE, cas_table_from_doc, class_diagram_similarity
from .stats import DegenerateSampleError, t_test_two_tailed
from .store import SnapshotStore, format_timestamp

LEARNER = "learner"
INSTRUCTOR = "instructor"


@dataclass
class ServiceConfig:
    storage_root: Path
    listen: str = "127.0.0.1:8080"
    learner_tokens: tuple[str, ...] = ()
    instructor_tokens: tuple[str, ...] = ()
    match: MatchConfig = field(default_factory=MatchConfig)
    cas_table: CaSTable = field(default_factory=lambda: DEFAULT_CAS_TABLE)
    static_dir: Path | None = None

    @classmethod
    def from_file(cls, path: Path | str) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_doc(raw, base_dir=Path(path).parent)

    @classmethod
    def from_doc(cls, raw: dict, base_dir: Path | None = None) -> "ServiceConfig":
        base = base_dir or Path.cwd()
        storage = Path(raw["storageRoot"])
        if not storage.is_absolute():
            storage = base / storage
        table = DEFAULT_CAS_TABLE
        if raw.get("casTable") is not None:
            table = cas_table_from_doc(raw["casTable"])
        static_dir = None
        if raw.get("staticDir"):
            static_dir = Path(raw["staticDir"])
            if not static_dir.is_absolute():
                static_dir = base / static_dir
        return cls(
            storage_root=storage,
            listen=raw.get("listen", "127.0.0.1:8080"),
            learner_tokens=tuple(raw.get("learnerTokens", ())),
            instructor_tokens=tuple(raw.get("instructorTokens", ())),
            match=MatchConfig(
                name_threshold=raw.get("nameThreshold", 0.5),
                correspondence_threshold=raw.get("correspondenceThreshold", 0.4),
            ),
            cas_table=table,
            static_dir=static_dir,
        )


class Registry:
    """File-backed exercises and session metadata under the storage root."""

    def __init__(self, root: Path):
        self.root = root
        self.exercises_dir = root / "exercises"
        self.sessions_dir = root / "sessions"
        self.exercises_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)

    def save_exercise(self, exercise: Exercise) -> None:
        doc = {
            "id": exercise.id,
            "problemText": exercise.problem_text,
            "answerKey": diagram_to_doc(exercise.answer_key),
        }
        if exercise.vocabulary:
            doc["vocabulary"] = list(exercise.vocabulary)
        path = self.exercises_dir / f"{exercise.id}.json"
        path.write_text(json.dumps(doc, ensure_ascii=False, indent=1), encoding="utf-8")

    def load_exercise(self, exercise_id: str) -> Exercise | None:
        path = self.exercises_dir / f"{exercise_id}.json"
        if not _safe_id(exercise_id) or not path.exists():
            return None
        raw = json.loads(path.read_text(encoding="utf-8"))
        vocabulary = raw.get("vocabulary")
        return Exercise(
            id=raw["id"],
            problem_text=raw["problemText"],
            answer_key=diagram_from_doc(raw["answerKey"]),
            vocabulary=tuple(vocabulary) if vocabulary else None,
        )

    def save_session(self, session: Session) -> None:
        path = self.sessions_dir / f"{session.id}.meta.json"
        path.write_text(
            json.dumps(
                {
                    "id": session.id,
                    "exerciseId": session.exercise_id,
                    "learnerId": session.learner_id,
                    "createdAt": session.created_at,
                },
                ensure_ascii=False,
            ),
            encoding="utf-8",
        )

    def load_session(self, session_id: str) -> Session | None:
        path = self.sessions_dir / f"{session_id}.meta.json"
        if not _safe_id(session_id) or not path.exists():
            return None
        raw = json.loads(path.read_text(encoding="utf-8"))
        return Session(
            id=raw["id"],
            exercise_id=raw["exerciseId"],
            learner_id=raw["learnerId"],
            created_at=raw["createdAt"],
        )

    def sessions_for_exercise(self, exercise_id: str) -> list[Session]:
        sessions = []
        for path in sorted(self.sessions_dir.glob("*.meta.json")):
            raw = json.loads(path.read_text(encoding="utf-8"))
            if raw["exerciseId"] == exercise_id:
                sessions.append(
                    Session(raw["id"], raw["exerciseId"], raw["learnerId"], raw["createdAt"])
                )
        sessions.sort(key=lambda s: (s.created_at, s.id))
        return sessions


def _safe_id(value: str) -> bool:
    return bool(value) and "/" not in value and not value.startswith(".")


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="umlcoach", docs_url=None, redoc_url=None)
    registry = Registry(config.storage_root)
    store = SnapshotStore(config.storage_root)
    roles = {token: LEARNER for token in config.learner_tokens}
    roles.update({token: INSTRUCTOR for token in config.instructor_tokens})

    def role_of(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        role = roles.get(header[len("Bearer ") :])
        if role is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return role

    def instructor_only(request: Request) -> str:
        role = role_of(request)
        if role != INSTRUCTOR:
            raise HTTPException(status_code=403, detail="instructor role required")
        return role

    def parse_body_diagram(doc: object) -> ClassDiagram:
        try:
            return diagram_from_doc(doc)
        except DiagramFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    def get_exercise_or_404(exercise_id: str) -> Exercise:
        exercise = registry.load_exercise(exercise_id)
        if exercise is None:
            raise HTTPException(status_code=404, detail="exercise not found")
        return exercise

    def get_session_or_404(session_id: str) -> Session:
        session = registry.load_session(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="session not found")
        return session

    @app.post("/api/exercises", status_code=201)
    def create_exercise(body: dict = Body(...), _: str = Depends(instructor_only)) -> dict:
        if "problemText" not in body or "answerKey" not in body:
            raise HTTPException(status_code=400, detail="problemText and answerKey are required")
        answer = parse_body_diagram(body["answerKey"])
        vocabulary = body.get("vocabulary")
        if vocabulary is not None and (not isinstance(vocabulary, list) or not vocabulary):
            raise HTTPException(status_code=400, detail="vocabulary must be a non-empty array")
        exercise = Exercise(
            id=uuid.uuid4().hex[:12],
            problem_text=str(body["problemText"]),
            answer_key=answer,
            vocabulary=tuple(vocabulary) if vocabulary else None,
        )
        registry.save_exercise(exercise)
        return {"exerciseId": exercise.id}

    @app.get("/api/exercises/{exercise_id}")
    def get_exercise(
        exercise_id: str,
        request: Request,
        include_answer: bool = Query(False, alias="includeAnswer"),
    ) -> dict:
        role = role_of(request)
        exercise = get_exercise_or_404(exercise_id)
        doc: dict = {"exerciseId": exercise.id, "problemText": exercise.problem_text}
        if exercise.vocabulary:
            doc["vocabulary"] = list(exercise.vocabulary)
        # The answer key is reserved for instructors no matter what the query says.
        if include_answer and role == INSTRUCTOR:
            doc["answerKey"] = diagram_to_doc(exercise.answer_key)
        return doc

    @app.post("/api/sessions", status_code=201)
    def create_session(request: Request, body: dict = Body(...)) -> dict:
        role_of(request)
        exercise_id = body.get("exerciseId")
        learner_id = body.get("learnerId")
        if not exercise_id or not learner_id:
            raise HTTPException(status_code=400, detail="exerciseId and learnerId are required")
        get_exercise_or_404(exercise_id)
        session = Session(
            id=uuid.uuid4().hex[:12],
            exercise_id=exercise_id,
            learner_id=str(learner_id),
            created_at=format_timestamp(datetime.now(timezone.utc)),
        )
        registry.save_session(session)
        store.create_session(session.id)
        return {"sessionId": session.id}

    @app.put("/api/sessions/{session_id}/diagram", status_code=204)
    def put_diagram(session_id: str, request: Request, body: dict = Body(...)) -> Response:
        role_of(request)
        get_session_or_404(session_id)
        diagram = parse_body_diagram(body)
        store.append_snapshot(session_id, "edit", diagram)
        return Response(status_code=204)

    @app.post("/api/sessions/{session_id}/submit", status_code=204)
    def submit(session_id: str, request: Request) -> Response:
        role_of(request)
        get_session_or_404(session_id)
        snapshots = store.list_snapshots(session_id)
        if not snapshots:
            raise HTTPException(status_code=409, detail="nothing to submit yet")
        store.append_snapshot(session_id, "submit", snapshots[-1].diagram)
        return Response(status_code=204)

    @app.post("/api/sessions/{session_id}/check")
    def check(session_id: str, request: Request) -> JSONResponse:
        role_of(request)
        session = get_session_or_404(session_id)
        exercise = get_exercise_or_404(session.exercise_id)
        snapshots = store.list_snapshots(session_id)
        if not snapshots:
            raise HTTPException(status_code=409, detail="no diagram snapshot yet")
        result = build_check_result(
            snapshots[-1].diagram, exercise.answer_key, config.match, config.cas_table
        )
        # The snapshot logged for the check is the converted layout, which is
        # exactly the state the learner's canvas shows after the button press.
        converted = transform_layout(
            snapshots[-1].diagram, exercise.answer_key, config.match
        ).converted_diagram
        store.append_snapshot(session_id, "check", converted)
        return JSONResponse(result.to_doc())

    @app.get("/api/sessions/{session_id}/analytics")
    def session_analytics(
        session_id: str,
        request: Request,
        interval: int = Query(60, gt=0),
    ) -> dict:
        instructor_only(request)
        session = get_session_or_404(session_id)
        exercise = get_exercise_or_404(session.exercise_id)
        snapshots = store.list_snapshots(session_id)
        if not snapshots:
            return {"sessionId": session_id, "snapshotCount": 0, "checkCount": 0, "series": None}
        series = similarity_series(
            snapshots, exercise.answer_key, config.match, config.cas_table, interval
        )
        return {
            "sessionId": session_id,
            "snapshotCount": len(snapshots),
            "checkCount": store.count_check_events(session_id),
            "series": series.to_doc(),
        }

    @app.get("/api/exercises/{exercise_id}/report")
    def exercise_report(
        exercise_id: str,
        request: Request,
        group_a: str | None = Query(None, alias="groupA"),
        group_b: str | None = Query(None, alias="groupB"),
    ) -> dict:
        instructor_only(request)
        exercise = get_exercise_or_404(exercise_id)
        per_student: list[dict] = []
        reports = []
        learner_cds: list[tuple[str, float]] = []
        for session in registry.sessions_for_exercise(exercise_id):
            snapshots = store.list_snapshots(session.id)
            if not snapshots:
                continue
            report = class_diagram_similarity(
                snapshots[-1].diagram, exercise.answer_key, config.match, config.cas_table
            )
            reports.append(report)
            learner_cds.append((session.learner_id, report.cds))
            per_student.append(report.to_doc())

        doc: dict = {"exerciseId": exercise_id, "perStudent": per_student}
        if reports:
            doc["perClassAverages"] = per_class_averages(reports, exercise.answer_key)
        if group_a is not None and group_b is not None:
            a = [cds for learner, cds in learner_cds if learner.startswith(group_a)]
            b = [cds for learner, cds in learner_cds if learner.startswith(group_b)]
            try:
                doc["groupComparison"] = t_test_two_tailed(a, b).to_doc()
            except DegenerateSampleError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
        return doc

    if config.static_dir is not None and config.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="editor")

    return app
