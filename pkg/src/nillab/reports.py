"""Deterministic CSV/JSON emission: byte-identical for identical config + seed.

Every file embeds the resolved configuration and artifact version. Floats are
written with repr (shortest round-trip), JSON keys are sorted, and nothing
time- or path-dependent goes into the payload.
"""

from __future__ import annotations

import json

import numpy as np

SCHEMA_VERSION = 1
ARTIFACT_VERSION = "0.1.0"


def sanitize(obj):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def format_value(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def config_header_lines(config: dict):
    lines = ["# artifact_version=%s" % ARTIFACT_VERSION,
             "# schema_version=%d" % SCHEMA_VERSION]
    for k in sorted(config):
        lines.append("# %s=%s" % (k, format_value(config[k])))
    return lines


def write_csv(path, columns, rows, config: dict):
    """Rows are dicts keyed by column name; header comments carry the config."""
    out = config_header_lines(config)
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(format_value(row[c]) for c in columns))
    text = "\n".join(out) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def write_json(path, payload: dict, config: dict):
    doc = {"schema_version": SCHEMA_VERSION, "artifact_version": ARTIFACT_VERSION,
           "config": sanitize(config), "report": sanitize(payload)}
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text
