"""CSV and JSON output with round-trip-exact numbers."""

from __future__ import annotations

import csv
import json
from importlib import resources

import numpy as np

SCHEMA_VERSION = "1.0"


def fmt(v):
    return "%.17g" % v


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    return obj


def report_document(kind, entries, meta=None):
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "meta": meta or {}, "checks": list(entries)}


def dumps(doc):
    return json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n"


def write_json(path, doc):
    with open(path, "w") as fh:
        fh.write(dumps(doc))


def load_schemas():
    return json.loads(resources.files("greybdg").joinpath("data/schemas.json").read_text())
