"""Input parsing and deterministic report emission (JSON / CSV)."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import InputFormatError, ReportIOError

FLOAT_FORMAT = ".17g"


def ingest_zeros(path):
    """Zero ordinates from a plain-text table: one positive decimal per line,
    strictly ascending, optional leading '#' comment lines."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ReportIOError(f"cannot read zeros file {path}: {exc}") from exc
    out = []
    header = True
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if header and line.startswith("#"):
            continue
        header = False
        if not line:
            continue
        try:
            x = float(line)
        except ValueError:
            raise InputFormatError(f"not a decimal number: {raw!r}", line=lineno) from None
        if not math.isfinite(x) or x <= 0:
            raise InputFormatError(f"ordinate must be positive and finite, got {line}", line=lineno)
        if out and x <= out[-1]:
            raise InputFormatError(f"ordinates not strictly ascending ({line} after {out[-1]!r})",
                                   line=lineno)
        out.append(x)
    if not out:
        warnings.warn(f"zeros file {path} contains no ordinates", stacklevel=2)
    return out


def default_zeros_path():
    return str(resources.files("nymanlab.data").joinpath("zeta_zeros.txt"))


def file_digest(path):
    h = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 16), b""):
                h.update(chunk)
    except OSError as exc:
        raise ReportIOError(f"cannot read {path}: {exc}") from exc
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    argv: list
    input_digests: dict = field(default_factory=dict)
    tool_version: str = ""
    wall_time: float | None = None
    error_bounds: dict = field(default_factory=dict)

    def as_dict(self):
        d = {
            "command": self.command,
            "parameters": self.parameters,
            "argv": list(self.argv),
            "input_digests": self.input_digests,
            "tool_version": self.tool_version,
            "error_bounds": self.error_bounds,
        }
        if self.wall_time is not None:
            d["wall_time"] = self.wall_time
        return d


# ---------------------------------------------------------------------------
# serialisation

def to_plain(obj):
    """Numpy scalars, complex numbers and tuples to JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def format_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, FLOAT_FORMAT)
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def dumps_json(report, indent=2):
    """Sorted keys, floats with 17 significant digits, trailing newline."""
    return _dump(to_plain(report), indent, 0) + "\n"


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, FLOAT_FORMAT)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


def dumps_csv(rows, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(columns)
    for r in rows:
        r = to_plain(r)
        w.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def emit_report(report, fmt="json", destination=None, rows=None, columns=None):
    """Write ``report`` as JSON (default) or its ``rows`` as CSV."""
    if fmt == "json":
        text = dumps_json(report)
    elif fmt == "csv":
        if rows is None or columns is None:
            rows = [flatten(report.get("result", report))]
            columns = sorted(rows[0])
        text = dumps_csv(rows, columns)
    else:
        raise InputFormatError(f"unknown format {fmt!r}")
    if destination in (None, "-"):
        sys.stdout.write(text)
        return text
    try:
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {destination}: {exc}") from exc
    return text


def flatten(d, prefix=""):
    """Nested dicts to one level with dotted keys (lists kept as cells)."""
    out = {}
    for k, v in to_plain(d).items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        else:
            out[key] = v
    return out


def load_schema():
    return json.loads(resources.files("nymanlab.data").joinpath("report_schema.json").read_text())
