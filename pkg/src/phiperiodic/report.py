"""Deterministic report files: JSON with 17-digit floats and CSV tables."""
from __future__ import annotations

import csv
import json
import math
import os

import numpy as np

from .trajectory import write_csv


def _float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(k)) + ": ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else list(obj)
        if not seq:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, bool, type(None), np.number)) for v in seq):
            parts = []
            for v in seq:
                sub = []
                _emit(v, indent, level + 1, sub)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text; floats carry 17 significant digits, key order is insertion order."""
    out = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def write_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def write_trace(trace, path):
    """One row per ascent iterate: iter, m, psi cells, certificate flag."""
    M = len(trace[0]["psi"]) if trace else 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "m"] + [f"psi{c}" for c in range(M)] + ["certificate"])
        for row in trace:
            w.writerow([row["iter"], format(row["m"], ".17g")]
                       + [format(v, ".17g") for v in row["psi"]] + [int(row["certificate"])])


def write_trajectories(trajs, path):
    """Stack several trajectories in one CSV with a leading label column."""
    if len(trajs) == 1:
        write_csv(trajs[0][1], path)
        return
    n = trajs[0][1].n if trajs else 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "t"] + [f"u{j + 1}" for j in range(n)])
        for label, u in trajs:
            U = np.vstack([u.nodes, u.nodes[:1]])
            t = np.arange(u.N + 1) * u.h
            for ti, row in zip(t, U):
                w.writerow([label, format(ti, ".17g")] + [format(x, ".17g") for x in row])


def write_table(rows, header, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in r])


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
