"""Deterministic serialization helpers for reports and data files.

All writers format floats with repr (shortest round-trip), sort JSON keys
and avoid timestamps, so byte-identical reruns produce byte-identical
files.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def csv_text(header, rows) -> str:
    """Render rows to CSV text with deterministic float formatting."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def json_text(obj) -> str:
    """Render an object to JSON with sorted keys (deterministic)."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def node_list_csv(labels, values) -> str:
    """Two-column node list (index, value)."""
    return csv_text(["index", "value"], zip(labels, values))


def parse_node_list(text: str):
    """Read a two-column (index, value) CSV; returns (labels, values)."""
    rows = list(csv.reader(io.StringIO(text)))
    if rows and rows[0] and rows[0][0].strip().lower() == "index":
        rows = rows[1:]
    labels = np.array([int(r[0]) for r in rows if r], dtype=int)
    values = np.array([float(r[1]) for r in rows if r], dtype=float)
    return labels, values


def gram_csv(entries: np.ndarray) -> str:
    """Gram dump (row, col, re, im)."""
    rows = []
    n = len(entries)
    for i in range(n):
        for j in range(n):
            v = entries[i, j]
            rows.append((i, j, float(v.real), float(v.imag)))
    return csv_text(["row", "col", "re", "im"], rows)


def trace_csv(samples: np.ndarray) -> str:
    """Circle trace dump (index, re, im)."""
    rows = [(j, float(v.real), float(v.imag)) for j, v in enumerate(samples)]
    return csv_text(["index", "re", "im"], rows)


def spectrum_csv(sizes, singular_values) -> str:
    """Section spectrum dump (N, k, sigma_k)."""
    rows = []
    for n, sv in zip(sizes, singular_values):
        for k, s in enumerate(np.asarray(sv)):
            rows.append((int(n), k, float(s)))
    return csv_text(["N", "k", "sigma_k"], rows)


def inner_spec_json(spec) -> str:
    """Serialize an InnerFunctionSpec (explicit part; clark origin points
    at node-list data embedded inline)."""
    payload = {
        "exp_type": spec.exp_type,
        "zeros": [{"re": z.real, "im": z.imag} for z in spec.zeros],
        "origin": spec.origin,
    }
    if spec.origin == "clark":
        seq = spec.clark_seq
        payload["clark"] = {
            "lambdas": list(map(float, seq.lambdas)),
            "nus": list(map(float, seq.nus)),
            "window": list(seq.window),
            "pairing": bool(spec.clark_tail.pairing),
            "compensate": bool(spec.clark_tail.compensate),
        }
    return json_text(payload)
