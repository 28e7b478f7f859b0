"""Lossless text formats: trajectories as CSV or JSONL, samples as CSV."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    """Shortest-safe decimal with 17 significant digits."""
    return format(float(x), ".17g")


def trajectory_csv(traj) -> str:
    """Rows ``time, x_1..x_d`` for every event of a trajectory."""
    d = traj.positions.shape[1]
    lines = [",".join(["time"] + [f"x_{i + 1}" for i in range(d)])]
    for t, p in zip(traj.times, traj.positions):
        lines.append(",".join([fmt(t)] + [fmt(c) for c in p]))
    return "\n".join(lines) + "\n"


def trajectory_jsonl(traj) -> str:
    out = []
    for t, p in zip(traj.times, traj.positions):
        out.append(
            '{"time":' + fmt(t) + ',"position":[' + ",".join(fmt(c) for c in p) + "]}"
        )
    return "\n".join(out) + "\n"


def read_trajectory_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    return data[:, 0], data[:, 1:]


def read_trajectory_jsonl(text: str) -> tuple[np.ndarray, np.ndarray]:
    recs = [json.loads(line) for line in text.splitlines() if line.strip()]
    return (
        np.array([r["time"] for r in recs], dtype=float),
        np.array([r["position"] for r in recs], dtype=float),
    )


def write_samples_csv(path, samples, header: str = "value") -> None:
    values = np.asarray(samples, dtype=float).ravel()
    Path(path).write_text(header + "\n" + "".join(fmt(v) + "\n" for v in values))


def read_samples_csv(path) -> np.ndarray:
    """Read a single-column CSV of numbers; a non-numeric first row is a header."""
    rows = [r for r in csv.reader(Path(path).read_text().splitlines()) if r]
    if not rows:
        return np.zeros(0)
    try:
        float(rows[0][0])
    except ValueError:
        rows = rows[1:]
    return np.array([float(r[0]) for r in rows], dtype=float)


class _Raw(str):
    pass


def _prepare(v):
    if isinstance(v, (bool, np.bool_)) or v is None:
        return None if v is None else bool(v)
    if isinstance(v, (float, np.floating)):
        if not np.isfinite(v):
            return None
        return _Raw(fmt(v))
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_prepare(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _prepare(x) for k, x in v.items()}
    return v


def _encode(v, indent: int | None, depth: int) -> str:
    if isinstance(v, _Raw):
        return str(v)
    if isinstance(v, (list, dict)) and v:
        items = (
            [_encode(x, indent, depth + 1) for x in v]
            if isinstance(v, list)
            else [json.dumps(k) + ": " * bool(indent) + ":" * (not indent) + _encode(x, indent, depth + 1) for k, x in v.items()]
        )
        open_, close = ("[", "]") if isinstance(v, list) else ("{", "}")
        if indent is None or isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v):
            return open_ + ",".join(items) + close
        pad = "\n" + " " * (indent * (depth + 1))
        return open_ + pad + ("," + pad).join(items) + "\n" + " " * (indent * depth) + close
    return json.dumps(v)


def dumps17(obj, indent: int | None = None) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(_prepare(obj), indent, 0)
