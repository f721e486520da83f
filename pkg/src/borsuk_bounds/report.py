"""Deterministic CSV / JSON / markdown emission with atomic file writes."""
import enum
import json
import math
import os
import tempfile

import numpy as np

FORMATS = ("csv", "json", "markdown-table")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, enum.Enum):
        return obj.name
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def fmt_number(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.10g}"
    if x is None:
        return ""
    return str(x)


def to_json(data):
    return json.dumps(_plain(data), sort_keys=True, indent=2) + "\n"


def to_csv(columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(fmt_number(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def to_markdown(rows, columns=None, title=None):
    """Markdown table of dict rows; an empty list renders as ``none``."""
    out = [f"## {title}", ""] if title else []
    if not rows:
        out.append("none")
        return "\n".join(out) + "\n"
    columns = columns or list(rows[0])
    out.append("| " + " | ".join(columns) + " |")
    out.append("|" + "---|" * len(columns))
    for row in rows:
        out.append("| " + " | ".join(fmt_number(row.get(c)) for c in columns) + " |")
    return "\n".join(out) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_report(data, fmt="json", path=None, columns=None, title=None):
    """Render ``data`` and write it to ``path`` (or return the text when ``path`` is None).

    ``csv`` expects ``data = {"columns": [...], "rows": [[...], ...]}``;
    ``markdown-table`` expects a list of dict rows; ``json`` takes anything
    JSON-like.
    """
    if fmt == "json":
        text = to_json(data)
    elif fmt == "csv":
        text = to_csv(data["columns"], data["rows"])
    elif fmt == "markdown-table":
        text = to_markdown(data, columns, title)
    else:
        raise ValueError(f"unknown format {fmt!r}; choose one of {FORMATS}")
    if path is not None:
        write_atomic(path, text)
    return text
