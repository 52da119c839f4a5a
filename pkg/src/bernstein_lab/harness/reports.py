"""JSON and CSV serialization of experiment reports."""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

from .experiments import Assertion, ExperimentReport, _plain

ASSERTION_COLUMNS = ["description", "expected", "observed", "tolerance", "passed"]


def report_to_dict(report: ExperimentReport, timestamp: bool = True) -> dict:
    out = {
        "spec": _plain(report.spec),
        "passed": report.passed,
        "tables": _plain(report.tables),
        "assertions": [dict(zip(ASSERTION_COLUMNS, _plain(a.row()))) for a in report.assertions],
        "provenance": _plain(report.provenance),
    }
    if timestamp:
        out["timestamp"] = report.timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    return out


def report_from_dict(d: dict) -> ExperimentReport:
    assertions = [Assertion(a["description"], a["expected"], a["observed"], a["tolerance"], a["passed"])
                  for a in d["assertions"]]
    return ExperimentReport(d["spec"], d["tables"], assertions, d["provenance"], d.get("timestamp"))


def to_json(report: ExperimentReport, timestamp: bool = True) -> str:
    return json.dumps(report_to_dict(report, timestamp), indent=2, sort_keys=True) + "\n"


def _cell(v):
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    return v


def emit_report(report: ExperimentReport, path, fmt: str = "json", timestamp: bool = True) -> list[Path]:
    """Write the report; returns the files written.

    JSON goes to ``path``. CSV writes one file per table plus one for the
    assertions, named ``<stem>_<table>.csv`` next to ``path`` (or inside it
    when ``path`` is a directory).
    """
    path = Path(path)
    fmt = fmt.lower()
    try:
        if fmt == "json":
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(to_json(report, timestamp))
            return [path]
        if fmt != "csv":
            raise ValueError(f"unknown report format {fmt!r}")
        if path.is_dir() or path.suffix == "":
            path.mkdir(parents=True, exist_ok=True)
            base, stem = path, report.spec.get("name", "report")
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            base, stem = path.parent, path.stem
        written = []
        tables = dict(_plain(report.tables))
        tables["assertions"] = {"columns": ASSERTION_COLUMNS, "rows": [_plain(a.row()) for a in report.assertions]}
        for name, table in tables.items():
            out = base / f"{stem}_{name}.csv"
            with out.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(table["columns"])
                for row in table["rows"]:
                    w.writerow([_cell(v) for v in row])
            written.append(out)
        return written
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
