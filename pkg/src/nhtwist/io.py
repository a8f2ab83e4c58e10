"""CSV and JSON serialization of trajectories.

Floats are written with 17 significant digits so that files round-trip
exactly and identical runs give byte-identical output.
"""
from __future__ import annotations

import csv
import json
import math

import numpy as np

from .integrator import Trajectory

__all__ = ["TRAJECTORY_COLUMNS", "fmt", "write_trajectory_csv", "write_trajectory_json",
           "read_trajectory_csv", "trajectory_records"]

TRAJECTORY_COLUMNS = ("t", "x1", "x2", "x3", "p1", "p2", "p3", "energy", "f_t")


def fmt(value) -> str:
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".17g")


def _json_float(value):
    value = float(value)
    # 17-digit rounding is exact for doubles; keep JSON numbers, not strings
    return value if math.isfinite(value) else None


def _rows(traj: Trajectory):
    n = len(traj)
    energy = traj.diagnostics.get("energy", np.full(n, np.nan))
    f_t = traj.diagnostics.get("f_t", np.full(n, np.nan))
    for i in range(n):
        yield (traj.t[i], *traj.y[i], energy[i], f_t[i])


def write_trajectory_csv(traj: Trajectory, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRAJECTORY_COLUMNS)
    for row in _rows(traj):
        writer.writerow([fmt(v) for v in row])


def trajectory_records(traj: Trajectory) -> list[dict]:
    records = []
    for row in _rows(traj):
        records.append({k: _json_float(v) for k, v in zip(TRAJECTORY_COLUMNS, row)})
    if traj.error_estimate is not None:
        for rec, err in zip(records, traj.error_estimate):
            rec["error_estimate"] = [_json_float(e) for e in err]
    return records


def write_trajectory_json(traj: Trajectory, fh) -> None:
    json.dump(trajectory_records(traj), fh, indent=1)
    fh.write("\n")


def read_trajectory_csv(fh) -> Trajectory:
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != TRAJECTORY_COLUMNS:
        raise ValueError(f"unexpected trajectory columns: {header}")
    data = np.array([[float(v) for v in row] for row in reader])
    return Trajectory(data[:, 0], data[:, 1:7],
                      diagnostics={"energy": data[:, 7], "f_t": data[:, 8]})
