"""Deterministic JSON and CSV output.

Floats are written with 17 significant digits so that a report is a pure
function of its configuration and round-trips exactly.
"""

import csv
import io
import math

import numpy as np

SCHEMA_VERSION = 1


def format_float(v):
    v = float(v)
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    if v == 0.0:
        return "0.0"
    text = f"{v:.17g}"
    return text if ("e" in text or "." in text) else text + ".0"


def _escape(s):
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def dumps(obj, indent=2, _level=0):
    """Serialize dicts, lists, tuples, numpy values, strings, numbers, bools and None."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_escape(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.generic)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def records_to_csv(records):
    """Flatten per-point records; array fields become name_0, name_1, ... columns."""
    if not records:
        return ""
    header = []
    for key, value in records[0].items():
        if isinstance(value, (list, tuple, np.ndarray)):
            header += [f"{key}_{i}" for i in range(len(value))]
        else:
            header.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        row = []
        for value in rec.values():
            values = list(value) if isinstance(value, (list, tuple, np.ndarray)) else [value]
            for v in values:
                row.append(format_float(v) if isinstance(v, (float, np.floating)) else v)
        writer.writerow(row)
    return buf.getvalue()
