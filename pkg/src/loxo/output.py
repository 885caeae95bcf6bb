"""Delimited and JSON writers shared by the CLI commands.

Floats are written in shortest round-trip form (``repr``), so a value read
back from either format is bit-identical to the one written.
"""

import csv
import json
import math


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_records(stream, columns, rows, fmt="csv"):
    """Write ``rows`` (sequences aligned with ``columns``) as CSV or a JSON array."""
    if fmt == "json":
        records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        stream.write(json.dumps(records))
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def error_record(code, field, message):
    return {"code": code, "field": field, "message": message}


def write_error(stream, code, field, message):
    stream.write(json.dumps(error_record(code, field, message), sort_keys=True))
    stream.write("\n")
