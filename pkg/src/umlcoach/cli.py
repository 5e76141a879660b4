"""Batch commands for instructors and CI.

Exit codes: 0 success, 1 domain violation (invalid diagram, degenerate
statistics), 2 I/O or usage error.  All commands are deterministic; grading a
directory orders its reports by filename.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .feedback import build_check_result
from .matching import MatchConfig
from .model import (
    ClassDiagram,
    DiagramFormatError,
    parse_diagram,
    serialize_diagram,
    validate_diagram,
)
from .similarity import CaSTable, DEFAULT_CAS_TABLE, cas_table_from_doc, class_diagram_similarity
from .stats import DegenerateSampleError, WELCH, t_test_two_tailed
from .store import read_snapshot_log
from .analytics import similarity_series
from .layout import transform_layout

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE) from exc


def _load_diagram(path: str) -> ClassDiagram:
    try:
        return parse_diagram(_read_text(path))
    except DiagramFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_DOMAIN) from exc


def _settings(args: argparse.Namespace) -> tuple[MatchConfig, CaSTable, str]:
    """Merge config-file values with flag overrides (flags win)."""
    name_threshold = 0.5
    correspondence_threshold = 0.4
    table = DEFAULT_CAS_TABLE
    variant = WELCH
    if getattr(args, "config", None):
        try:
            raw = json.loads(_read_text(args.config))
        except json.JSONDecodeError as exc:
            raise CliError(f"{args.config}: malformed JSON: {exc}", EXIT_USAGE) from exc
        name_threshold = raw.get("nameThreshold", name_threshold)
        correspondence_threshold = raw.get("correspondenceThreshold", correspondence_threshold)
        variant = raw.get("tTestVariant", variant)
        if raw.get("casTable") is not None:
            try:
                table = cas_table_from_doc(raw["casTable"])
            except ValueError as exc:
                raise CliError(f"{args.config}: {exc}", EXIT_USAGE) from exc
    if getattr(args, "name_threshold", None) is not None:
        name_threshold = args.name_threshold
    if getattr(args, "correspondence_threshold", None) is not None:
        correspondence_threshold = args.correspondence_threshold
    if getattr(args, "cas_table", None):
        try:
            table = cas_table_from_doc(json.loads(_read_text(args.cas_table)))
        except (json.JSONDecodeError, ValueError) as exc:
            raise CliError(f"{args.cas_table}: {exc}", EXIT_USAGE) from exc
    if getattr(args, "variant", None):
        variant = args.variant
    try:
        cfg = MatchConfig(name_threshold, correspondence_threshold)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    return cfg, table, variant


def _student_files(path_arg: str) -> list[Path]:
    path = Path(path_arg)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix == ".json" and p.is_file())
        if not files:
            raise CliError(f"{path_arg}: no .json diagrams in directory", EXIT_USAGE)
        return files
    if path.is_file():
        return [path]
    raise CliError(f"{path_arg}: no such file or directory", EXIT_USAGE)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        diagram = parse_diagram(_read_text(args.diagram))
    except DiagramFormatError as exc:
        print(f"invalid: {exc}")
        return EXIT_DOMAIN
    violations = validate_diagram(diagram)
    if violations:
        for v in violations:
            print(f"violation: {v.rule} on {v.element_id}: {v.detail}")
        return EXIT_DOMAIN
    print(f"ok: {len(diagram.classes)} classes, {len(diagram.relationships)} relationships")
    return EXIT_OK


def cmd_grade(args: argparse.Namespace) -> int:
    cfg, table, _ = _settings(args)
    answer = _load_diagram(args.answer)
    reports = []
    for path in _student_files(args.student):
        student = _load_diagram(str(path))
        reports.append(class_diagram_similarity(student, answer, cfg, table).to_doc())
    payload = json.dumps(reports, ensure_ascii=False, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    cfg, _, _ = _settings(args)
    answer = _load_diagram(args.answer)
    student = _load_diagram(args.student)
    result = transform_layout(student, answer, cfg)
    Path(args.out).write_text(serialize_diagram(result.converted_diagram), encoding="utf-8")
    moved = sum(1 for m in result.moves if m.corresponding)
    print(f"converted: {moved} corresponding, {len(result.moves) - moved} parked at origin")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    cfg, table, _ = _settings(args)
    answer = _load_diagram(args.answer)
    student = _load_diagram(args.student)
    result = build_check_result(student, answer, cfg, table)
    names = {node.id: node.name for node in student.classes}
    names.update({attr.id: attr.name for _, attr in student.iter_attributes()})
    print("moves:")
    for move in result.moves:
        state = "corresponding" if move.corresponding else "parked"
        print(f"  {move.class_id} {names[move.class_id]!r} -> ({move.x}, {move.y}) {state}")
    print("class colors:")
    for class_id, color in result.class_colors.items():
        print(f"  {class_id} {names[class_id]!r}: {color}")
    print("attribute colors:")
    for attr_id, color in result.attribute_colors.items():
        print(f"  {attr_id} {names[attr_id]!r}: {color}")
    if args.show_similarity:
        report = class_diagram_similarity(student, answer, cfg, table)
        print(f"cds: {report.cds!r}")
        print(f"cs_all: {report.cs_all!r}")
        print(f"rs_all: {report.rs_all!r}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg, table, _ = _settings(args)
    answer = _load_diagram(args.answer)
    try:
        snapshots = read_snapshot_log(args.log)
    except OSError as exc:
        raise CliError(f"cannot read {args.log}: {exc}", EXIT_USAGE) from exc
    except (json.JSONDecodeError, KeyError, DiagramFormatError) as exc:
        raise CliError(f"{args.log}: bad snapshot log: {exc}", EXIT_DOMAIN) from exc
    if not snapshots:
        raise CliError(f"{args.log}: empty session", EXIT_DOMAIN)
    series = similarity_series(snapshots, answer, cfg, table, args.interval)
    csv_text = series.to_csv()
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_compare_groups(args: argparse.Namespace) -> int:
    cfg, table, variant = _settings(args)
    answer = _load_diagram(args.answer)

    def grade_dir(path_arg: str) -> dict[str, list[float]]:
        scores: dict[str, list[float]] = {"cds": [], "cs_all": [], "rs_all": []}
        for path in _student_files(path_arg):
            report = class_diagram_similarity(_load_diagram(str(path)), answer, cfg, table)
            scores["cds"].append(report.cds)
            scores["cs_all"].append(report.cs_all)
            scores["rs_all"].append(report.rs_all)
        return scores

    group_a = grade_dir(args.a)
    group_b = grade_dir(args.b)
    out = {}
    try:
        for metric in ("cds", "cs_all", "rs_all"):
            out[metric] = t_test_two_tailed(group_a[metric], group_b[metric], variant).to_doc()
    except DegenerateSampleError as exc:
        raise CliError(f"{metric}: {exc}", EXIT_DOMAIN) from exc
    sys.stdout.write(json.dumps(out, ensure_ascii=False, indent=1) + "\n")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import os

    import uvicorn

    from .service import ServiceConfig, create_app

    try:
        config = ServiceConfig.from_file(args.config)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"bad config {args.config}: {exc}", EXIT_USAGE) from exc
    listen = os.environ.get("UMLCOACH_LISTEN", config.listen)
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise CliError(f"listen address must be host:port, got {listen!r}", EXIT_USAGE)
    app = create_app(config)
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    except (OSError, SystemExit) as exc:
        raise CliError(f"server failed: {exc}", EXIT_USAGE) from exc
    return EXIT_OK


def _add_threshold_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON settings file; flags override its values")
    parser.add_argument("--name-threshold", type=float, dest="name_threshold")
    parser.add_argument(
        "--correspondence-threshold", type=float, dest="correspondence_threshold"
    )
    parser.add_argument("--cas-table", dest="cas_table", help="multiplicity table JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="umlcoach", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check one diagram file")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("grade", help="score student diagrams against an answer key")
    p.add_argument("--answer", required=True)
    p.add_argument("--student", required=True, help="one diagram file or a directory")
    p.add_argument("--out")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("convert", help="rewrite a student's layout to the answer's")
    p.add_argument("--answer", required=True)
    p.add_argument("--student", required=True)
    p.add_argument("--out", required=True)
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("check", help="print moves and name colors for one student diagram")
    p.add_argument("--answer", required=True)
    p.add_argument("--student", required=True)
    p.add_argument("--show-similarity", action="store_true")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="similarity series over one session log")
    p.add_argument("--log", required=True, help="session snapshot JSONL file")
    p.add_argument("--answer", required=True)
    p.add_argument("--interval", type=int, default=60)
    p.add_argument("--csv", help="write the series here instead of stdout")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare-groups", help="t-tests between two graded directories")
    p.add_argument("--a", required=True, help="directory of group A diagrams")
    p.add_argument("--b", required=True, help="directory of group B diagrams")
    p.add_argument("--answer", required=True)
    p.add_argument("--variant", choices=["welch", "student"])
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_compare_groups)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
