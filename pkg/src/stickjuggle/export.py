"""CSV and JSON output of a simulation run.

Floats are written with 17 significant digits so every double survives a
write/read round trip unchanged.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .simulation import SimLog

STEP_COLUMNS = (
    "k", "t", "alpha",
    "h_x", "h_y", "h_z", "v_x", "v_y", "v_z", "alpha_dot", "beta_dot",
    "I", "r", "phi", "delta_alpha", "delta", "saturated_I", "saturated_r",
)
TRAJECTORY_COLUMNS = ("t", "h_x", "h_y", "h_z", "alpha", "beta")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def step_rows(log: SimLog) -> list[list]:
    rows = []
    for s in log.steps:
        u = s.applied
        rows.append(
            [s.k, s.t, s.alpha, *s.state.as_array(), u.I, u.r, u.phi, s.delta_alpha, s.delta, s.saturated_I, s.saturated_r]
        )
    return rows


def write_steps_csv(log: SimLog, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(STEP_COLUMNS)
        for row in step_rows(log):
            w.writerow([_fmt(x) for x in row])
    return path


def read_steps_csv(path) -> list[dict]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            row = {}
            for key, val in rec.items():
                if key in ("k",):
                    row[key] = int(val)
                elif key.startswith("saturated"):
                    row[key] = bool(int(val))
                else:
                    row[key] = float(val)
            out.append(row)
    return out


def write_trajectory_csv(log: SimLog, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_COLUMNS)
        if log.trajectory is not None:
            for row in log.trajectory:
                w.writerow([_fmt(x) for x in row])
    return path


def read_trajectory_csv(path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))[1:]
    if not rows:
        return np.empty((0, len(TRAJECTORY_COLUMNS)))
    return np.array(rows, dtype=float)


def summary_dict(log: SimLog) -> dict:
    cfg = log.config
    return {
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "fixed_point": log.fixed_point.as_dict(),
        "gain": log.gain.K.tolist(),
        "metrics": log.summary(),
    }


def export(log: SimLog, out_dir, formats=("csv", "json")) -> dict[str, Path]:
    """Write ``steps.csv``, ``trajectory.csv`` and ``summary.json`` into ``out_dir``.

    Raises:
        OSError: the directory or a file cannot be written; the message names the path.
    """
    out_dir = Path(out_dir)
    written = {}
    try:
        os.makedirs(out_dir, exist_ok=True)
        if "csv" in formats:
            written["steps"] = write_steps_csv(log, out_dir / "steps.csv")
            written["trajectory"] = write_trajectory_csv(log, out_dir / "trajectory.csv")
        if "json" in formats:
            p = out_dir / "summary.json"
            with open(p, "w", encoding="utf-8") as fh:
                json.dump(summary_dict(log), fh, indent=2)
            written["summary"] = p
    except OSError as exc:
        raise OSError(f"cannot write output under {out_dir}: {exc}") from exc
    return written
