"""Report persistence: JSON Lines records plus a CSV mirror.

Floats are written with 17 significant digits in both files and fields
always appear in ``FIELDS`` order, so two runs of the same config differ
only in ``wall_time``.
"""

import csv
import io
import json
import math
from pathlib import Path

FIELDS = (
    "index", "command", "status",
    "value_re", "value_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
    "rel_error", "method", "diagnostics", "inputs", "wall_time",
)
TIMING_FIELDS = ("wall_time",)


def format_float(x):
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj):
    """Compact JSON with fixed-width float formatting and insertion-order keys."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return "; ".join(value)
    if isinstance(value, (dict, list)):
        return dumps(value)
    return str(value)


def report_paths(out):
    stem = Path(out)
    if stem.suffix in (".jsonl", ".csv"):
        stem = stem.with_suffix("")
    return stem.with_name(stem.name + ".jsonl"), stem.with_name(stem.name + ".csv")


def emit_report(records, out):
    """Write ``<out>.jsonl`` and ``<out>.csv``; returns the two paths."""
    jsonl_path, csv_path = report_paths(out)
    jsonl_path.parent.mkdir(parents=True, exist_ok=True)
    with open(jsonl_path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(dumps({k: rec.get(k) for k in FIELDS}) + "\n")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for rec in records:
        writer.writerow([_csv_cell(rec.get(k)) for k in FIELDS])
    csv_path.write_text(buf.getvalue(), encoding="utf-8")
    return jsonl_path, csv_path


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def read_csv(path):
    """Rows of the CSV mirror with numeric columns converted back to float."""
    numeric = {"value_re", "value_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_error", "wall_time"}
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            for k in numeric:
                row[k] = float(row[k]) if row[k] not in ("", "null") else None
            row["index"] = int(row["index"])
            rows.append(row)
    return rows
