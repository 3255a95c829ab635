"""Deterministic CSV/JSON serialisation of study rows and summaries."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import fields
from typing import Any, Dict, List, Sequence, Tuple

from .study import BOUND_FIELDS, ROW_FIELDS, BoundRow, StudyResult, StudyRow


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    if isinstance(x, tuple):
        return ";".join(x)
    return str(x)


def _csv(rows, names) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in rows:
        w.writerow([_fmt(getattr(r, k)) for k in names])
    return buf.getvalue().encode("utf-8")


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    return x


def _row_dict(r) -> Dict[str, Any]:
    return {f.name: _jsonable(getattr(r, f.name)) for f in fields(r)}


def _dumps(obj) -> bytes:
    return (json.dumps(obj, indent=1, allow_nan=True) + "\n").encode("utf-8")


def emit(rows: Sequence[StudyRow], fmt: str = "csv", summary: Dict[str, Any] | None = None) -> bytes:
    """CSV with the ``StudyRow`` columns, or JSON ``{"rows": [...], "summary": {...}}``."""
    if fmt == "csv":
        return _csv(rows, ROW_FIELDS)
    if fmt == "json":
        return _dumps({"rows": [_row_dict(r) for r in rows], "summary": summary or {}})
    raise ValueError(f"unknown format {fmt!r}")


def emit_results(results: Sequence[StudyResult], fmt: str = "json") -> bytes:
    """Several named studies in one JSON document."""
    if fmt != "json":
        raise ValueError("multi-study output is JSON only; use one file per study for CSV")
    return _dumps({
        "studies": [{"name": r.name, "rows": [_row_dict(x) for x in r.rows], "summary": r.summary}
                    for r in results],
        "passed": all(r.passed for r in results),
    })


def emit_bounds(rows: Sequence[BoundRow], fmt: str = "csv", summary: Dict[str, Any] | None = None) -> bytes:
    if fmt == "csv":
        return _csv(rows, BOUND_FIELDS)
    if fmt == "json":
        return _dumps({"rows": [_row_dict(r) for r in rows], "summary": summary or {}})
    raise ValueError(f"unknown format {fmt!r}")


def emit_identities(checks, fmt: str = "csv", summary: Dict[str, Any] | None = None) -> bytes:
    names = ("name", "cases", "max_error", "tolerance", "passed")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for c in checks:
            w.writerow([_fmt(getattr(c, k)) for k in names])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        return _dumps({"checks": [{k: getattr(c, k) for k in names} for c in checks],
                       "summary": summary or {}})
    raise ValueError(f"unknown format {fmt!r}")


def _parse_value(name: str, text: str):
    if name == "flags":
        return tuple(x for x in text.split(";") if x)
    if name in ("n", "bits_used"):
        return int(text)
    return float(text)


def parse_csv(data: bytes) -> List[StudyRow]:
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    header = next(reader)
    if tuple(header) != ROW_FIELDS:
        raise ValueError("unexpected CSV header")
    return [StudyRow(**{k: _parse_value(k, v) for k, v in zip(header, line)}) for line in reader]


def parse_json(data: bytes) -> Tuple[List[StudyRow], Dict[str, Any]]:
    doc = json.loads(data.decode("utf-8"))
    rows = []
    for d in doc["rows"]:
        d = dict(d)
        d["flags"] = tuple(d["flags"])
        rows.append(StudyRow(**d))
    return rows, doc.get("summary", {})
