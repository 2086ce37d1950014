"""Batch classification: CSV in, CSV out.

The output echoes key, summary, and description, then adds the team and
sub-team decisions with their confidences. Malformed rows keep their place
in the output with the error column filled in; only a malformed header
fails the whole request.
"""

from __future__ import annotations

import csv
import io
from datetime import datetime

from ..assign import AssignmentPipeline, assign
from ..corpus import IssueRecord

REQUIRED_COLUMNS = ("key", "summary", "description")
OUTPUT_COLUMNS = ("key", "summary", "description", "team", "subteam",
                  "team_confidence", "subteam_confidence", "error")


class BatchHeaderError(ValueError):
    pass


def classify_batch(pipeline: AssignmentPipeline, text: str) -> tuple[str, list[dict]]:
    """Classify every row of an issues CSV.

    Returns (csv_text, rows). Row count and order match the input; the key
    column is passed through verbatim.
    """
    reader = csv.DictReader(io.StringIO(text), restkey="_extra")
    if reader.fieldnames is None:
        raise BatchHeaderError("empty body: missing CSV header")
    missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise BatchHeaderError(f"CSV header missing columns: {missing}")
    rows: list[dict] = []
    now = datetime.now()
    for record in reader:
        out = {c: "" for c in OUTPUT_COLUMNS}
        out["key"] = record.get("key") or ""
        out["summary"] = record.get("summary") or ""
        out["description"] = record.get("description") or ""
        if any(record.get(c) is None for c in REQUIRED_COLUMNS):
            out["error"] = "short row: missing required fields"
            rows.append(out)
            continue
        if "_extra" in record:
            out["error"] = "row has more fields than the header"
            rows.append(out)
            continue
        issue = IssueRecord(
            key=out["key"] or "(unkeyed)",
            summary=out["summary"],
            description=out["description"],
            reporter="",
            created=now,
            updated=now,
        )
        result = assign(pipeline, issue)
        out["team"] = result.team
        out["subteam"] = result.subteam
        out["team_confidence"] = f"{result.team_confidence:.6f}"
        out["subteam_confidence"] = f"{result.subteam_confidence:.6f}"
        rows.append(out)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(OUTPUT_COLUMNS),
                            lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue(), rows
