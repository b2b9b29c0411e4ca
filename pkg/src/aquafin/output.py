"""Trajectory and summary files.

Floats are written with ``repr`` so files round-trip exactly and re-runs
produce identical bytes.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

TRAJECTORY_HEADER = ["t", "x", "y", "z", "u", "v", "w", "phi", "theta", "psi",
                     "p", "q", "r", "alpha_deg", "speed", "phase", "k_deg"]


def _f(x):
    return repr(float(x))


def trajectory_rows(traj):
    for s in traj.samples:
        st = s.state
        yield ([_f(st.time)] + [_f(v) for v in st.position] + [_f(v) for v in st.velocity]
               + [_f(v) for v in st.euler] + [_f(v) for v in st.omega]
               + [_f(math.degrees(s.alpha)), _f(s.speed), s.phase.value,
                  _f(math.degrees(st.wing_angle))])


def write_trajectory_csv(traj, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_HEADER)
        w.writerows(trajectory_rows(traj))


def read_trajectory_csv(path):
    """Columns of a trajectory CSV as arrays (``phase`` stays a list of str)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = {}
    for name in TRAJECTORY_HEADER:
        vals = [r[name] for r in rows]
        out[name] = vals if name == "phase" else np.array(vals, dtype=float)
    return out


def _state_dict(st):
    return {
        "t": st.time,
        "position": [float(v) for v in st.position],
        "velocity": [float(v) for v in st.velocity],
        "euler": [float(v) for v in st.euler],
        "omega": [float(v) for v in st.omega],
        "k_deg": math.degrees(st.wing_angle),
    }


def _clean(x):
    # JSON has no inf/nan
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def summary_document(traj, extra=None):
    summ = {k: _clean(v) for k, v in traj.summary.as_dict().items()}
    doc = {
        "name": traj.name,
        "status": traj.status,
        "summary": summ,
        "events": [{"kind": e.kind, "time": e.time, "detail": e.detail,
                    "state": _state_dict(e.state)} for e in traj.events],
    }
    if extra:
        doc.update(extra)
    return doc


def write_json(doc, path):
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def write_summary_json(traj, path, extra=None):
    write_json(summary_document(traj, extra), path)


def write_trajectory_json(traj, path, extra=None):
    doc = summary_document(traj, extra)
    doc["columns"] = TRAJECTORY_HEADER
    doc["samples"] = [[float(v) if i != 15 else v for i, v in enumerate(row)]
                      for row in trajectory_rows(traj)]
    write_json(doc, path)


def write_trajectory(traj, out_dir, stem="trajectory", fmt="csv", extra=None):
    """Write ``<stem>.csv`` + ``<stem>.summary.json`` (or one ``<stem>.json``).

    Returns the list of paths written.
    """
    out_dir = Path(out_dir)
    if fmt == "csv":
        a, b = out_dir / f"{stem}.csv", out_dir / f"{stem}.summary.json"
        write_trajectory_csv(traj, a)
        write_summary_json(traj, b, extra)
        return [a, b]
    if fmt == "json":
        a = out_dir / f"{stem}.json"
        write_trajectory_json(traj, a, extra)
        return [a]
    raise ValueError(f"unknown output format {fmt!r}")


def summary_line(summary, label=None):
    head = f"{label}: " if label else ""
    return (f"{head}glide_distance={summary.glide_distance:.4f} m "
            f"max_altitude={summary.max_altitude:.4f} m "
            f"flight_time={summary.flight_time:.4f} s "
            f"post_apogee_distance={summary.post_apogee_distance:.4f} m "
            f"status={summary.status}")
