"""Parameter sweeps, the shipped study presets and wind-tunnel reduction."""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
from importlib import resources
import json
import logging
import math
from pathlib import Path
from typing import Optional
import warnings

import numpy as np

from .aero import reduce_wind_tunnel
from .config import ConfigError, resolve, scenario_from_dict, set_path
from .output import write_json, write_trajectory
from .simulator import SimulationError, simulate

log = logging.getLogger(__name__)

AGGREGATE_HEADER = ["value", "glide_distance", "max_altitude", "flight_time",
                    "post_apogee_distance"]
PRESETS = ("discharge-sweep", "opening-angle", "fold-at-apogee", "ground-effect")


def range_values(start, stop, step):
    """Inclusive arithmetic range, robust to float round-off at ``stop``."""
    if not step > 0:
        raise ConfigError("sweep step must be > 0")
    if stop < start:
        raise ConfigError("sweep stop must be >= start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]


@dataclass(frozen=True)
class SweepSpec:
    """One axis through scenario space.

    ``base`` is a scenario document (it may name a ``base`` of its own);
    ``path`` is a dotted path into it, e.g. ``initial.discharge_angle_deg``
    or ``wing_schedule.0.angle_deg``. ``labels`` replace the values in the
    aggregate ``value`` column (useful when values are lists or objects).
    """

    base: dict
    path: str
    values: tuple
    labels: Optional[tuple] = None
    name: str = "sweep"
    base_dir: Path = Path(".")
    source: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ConfigError("sweep has no values", field=self.path)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
            if len(self.labels) != len(self.values):
                raise ConfigError("labels and values differ in length", field=self.path)
        doc = resolve(self.base, Path(self.base_dir), self.source)
        set_path(doc, self.path, self.values[0])  # raises if the path is bad
        object.__setattr__(self, "base", doc)

    @classmethod
    def from_range(cls, base, path, start, stop, step, **kw):
        return cls(base, path, range_values(start, stop, step), **kw)

    def label(self, i):
        if self.labels is not None:
            return self.labels[i]
        v = self.values[i]
        return json.dumps(v) if isinstance(v, (list, dict, bool)) else repr(v)

    def documents(self):
        for v in self.values:
            yield set_path(self.base, self.path, v)


@dataclass
class SweepRow:
    value: str
    summary: Optional[object]
    status: str
    error: str = ""
    trajectory: Optional[object] = None

    def numbers(self):
        if self.summary is None:
            return [math.nan] * 4
        s = self.summary
        return [s.glide_distance, s.max_altitude, s.flight_time, s.post_apogee_distance]


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list = field(default_factory=list)

    def column(self, name):
        i = AGGREGATE_HEADER.index(name) - 1
        return np.array([r.numbers()[i] for r in self.rows])

    @property
    def ok(self):
        return all(r.status == "terminated" for r in self.rows)


def _member(args):
    doc, source, base_dir, out_dir, stem, fmt, keep = args
    try:
        scenario, sample_every = scenario_from_dict(doc, source, Path(base_dir))
    except ConfigError as exc:
        return None, "config", str(exc), None
    try:
        traj = simulate(scenario, sample_every)
    except SimulationError as exc:
        return None, "aborted", str(exc), None
    if out_dir is not None:
        write_trajectory(traj, out_dir, stem, fmt)
    return traj.summary, traj.status, "", traj if keep else None


def _map(fn, jobs, items):
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [fn(a) for a in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() yields in submission order whatever the completion order
        return list(pool.map(fn, items))


def _stem(i, label):
    safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in label)
    return f"run_{i:03d}_{safe}"[:80]


def write_aggregate(result, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AGGREGATE_HEADER)
        for r in result.rows:
            w.writerow([r.value] + [repr(float(x)) for x in r.numbers()])


def run_sweep(spec, out_dir=None, jobs=1, fmt="csv", keep_trajectories=False):
    """Run every member of ``spec``; rows come back in axis order.

    A member that fails is recorded with its status (``config``,
    ``aborted``) and NaN numbers; the sweep carries on.
    """
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    args = []
    for i, doc in enumerate(spec.documents()):
        args.append((doc, spec.source, str(spec.base_dir),
                     None if out_dir is None else str(out_dir),
                     _stem(i, spec.label(i)), fmt, keep_trajectories))
    result = SweepResult(spec)
    for i, (summ, status, err, traj) in enumerate(_map(_member, jobs, args)):
        if err:
            log.warning("%s[%s]: %s", spec.name, spec.label(i), err)
        result.rows.append(SweepRow(spec.label(i), summ, status, err, traj))
    if out_dir is not None:
        write_aggregate(result, out_dir / "summary.csv")
    return result


# -- presets ----------------------------------------------------------------------

def preset_path(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("aquafin") / "data" / "presets" / f"{name}.json"


def load_preset(name):
    return json.loads(preset_path(name).read_text())


def preset_sweeps(name):
    """The SweepSpecs that make up a preset, keyed by sweep label."""
    doc = load_preset(name)
    base = doc["scenario"]
    out = {}
    for sw in doc["sweeps"]:
        b = base
        for p, v in sw.get("set", {}).items():
            b = set_path(resolve(b), p, v)
        vals = sw["values"]
        if isinstance(vals, dict):
            vals = range_values(vals["start"], vals["stop"], vals["step"])
        out[sw["label"]] = SweepSpec(b, sw["path"], vals, sw.get("labels"),
                                     name=f"{name}/{sw['label']}", source=f"preset:{name}")
    return doc, out


@dataclass
class PresetResult:
    name: str
    sweeps: dict
    report: dict
    lines: list


def _unimodal(y):
    y = list(y)
    i = int(np.argmax(y))
    return (all(a < b for a, b in zip(y[:i], y[1:i + 1]))
            and all(a > b for a, b in zip(y[i:-1], y[i + 1:])))


def _gain(on, off):
    return 100.0 * (on - off) / off if off else math.nan


def _report(name, doc, sweeps):
    if name == "discharge-sweep":
        sw = sweeps["discharge"]
        angles = [float(v) for v in sw.spec.values]
        d = sw.column("glide_distance")
        h = sw.column("max_altitude")
        i = int(np.nanargmax(d))
        rep = {"angles_deg": angles, "glide_distance": d.tolist(), "max_altitude": h.tolist(),
               "argmax_deg": angles[i], "max_distance": float(d[i]),
               "unimodal": _unimodal(d),
               "altitude_increasing": bool(np.all(np.diff(h) > 0))}
        lines = [f"distance argmax at {angles[i]:g} deg ({d[i]:.3f} m); unimodal={rep['unimodal']}; "
                 f"max altitude increasing={rep['altitude_increasing']}"]
    elif name == "opening-angle":
        sw = sweeps["opening"]
        ks = [float(v) for v in sw.spec.values]
        d = sw.column("glide_distance")
        g = _gain(d[-1], d[0])
        rep = {"opening_deg": ks, "glide_distance": d.tolist(),
               "strictly_increasing": bool(np.all(np.diff(d) > 0)), "gain_percent": g}
        lines = [f"distance {d[0]:.3f} m at {ks[0]:g} deg -> {d[-1]:.3f} m at {ks[-1]:g} deg "
                 f"({g:+.1f}%); strictly increasing={rep['strictly_increasing']}"]
    elif name == "fold-at-apogee":
        sw = sweeps["fold"]
        post = dict(zip([r.value for r in sw.rows], sw.column("post_apogee_distance")))
        ratio = post["fold"] / post["hold"] if post["hold"] else math.nan
        rep = {"post_apogee_distance": post, "ratio": ratio}
        lines = [f"post-apogee distance fold {post['fold']:.3f} m vs hold {post['hold']:.3f} m "
                 f"(ratio {ratio:.3f})"]
    elif name == "ground-effect":
        off, on = sweeps["off"], sweeps["on"]
        angles = [float(v) for v in off.spec.values]
        d0, d1 = off.column("glide_distance"), on.column("glide_distance")
        gains = [_gain(b, a) for a, b in zip(d0, d1)]
        rep = {"angles_deg": angles, "off": d0.tolist(), "on": d1.tolist(),
               "gain_percent": gains,
               "strictly_decreasing": bool(np.all(np.diff(gains) < 0))}
        lines = [f"{a:g} deg: {x:.3f} m -> {y:.3f} m ({g:+.2f}%)"
                 for a, x, y, g in zip(angles, d0, d1, gains)]
    else:
        raise ConfigError(f"unknown preset {name!r}")
    rep["description"] = doc.get("description", "")
    return rep, lines


def run_preset(name, out_dir=None, jobs=1, fmt="csv", keep_trajectories=False):
    """Run a shipped study and summarise it the way the study reports it."""
    doc, specs = preset_sweeps(name)
    out_dir = None if out_dir is None else Path(out_dir)
    results = {}
    for label, spec in specs.items():
        sub = None if out_dir is None else (out_dir if len(specs) == 1 else out_dir / label)
        results[label] = run_sweep(spec, sub, jobs, fmt, keep_trajectories)
    report, lines = _report(name, doc, results)
    if out_dir is not None:
        write_json({"preset": name, **report}, out_dir / "report.json")
    return PresetResult(name, results, report, lines)


# -- wind-tunnel reduction ---------------------------------------------------------

class ReductionWarning(UserWarning):
    pass


def reduce_rows(rows, area, speed, rho=1.225, chord=1.0):
    """Reduce (alpha_deg, Fz, Fx[, M]) records to (alpha_deg, CL, CD[, CM])."""
    if not rows:
        raise ValueError("no measurements to reduce")
    alphas = [r[0] for r in rows]
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        warnings.warn("alpha column not sorted; output sorted by alpha", ReductionWarning,
                      stacklevel=2)
        rows = sorted(rows, key=lambda r: r[0])
        alphas = [r[0] for r in rows]
        if any(b == a for a, b in zip(alphas, alphas[1:])):
            raise ValueError("duplicate alpha values in measurements")
    out = []
    for r in rows:
        m = r[3] if len(r) > 3 else None
        cl, cd, cm = reduce_wind_tunnel(r[1], r[2], math.radians(r[0]), speed, area, rho, m, chord)
        out.append((r[0], cl, cd) if cm is None else (r[0], cl, cd, cm))
    return out


def reduce_coeffs(measurements_csv, out_csv, area, speed, rho=1.225, chord=1.0):
    """Balance measurements CSV -> coefficient CSV usable as an aero table.

    Input header ``alpha_deg,Fz,Fx[,M]``; output ``alpha_deg,CL,CD[,CM]``.
    Returns the reduced rows.
    """
    with open(measurements_csv, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        missing = [c for c in ("alpha_deg", "Fz", "Fx") if c not in cols]
        if missing:
            raise ValueError(f"{measurements_csv}: missing column(s) {', '.join(missing)}")
        has_m = "M" in cols
        keys = ["alpha_deg", "Fz", "Fx"] + (["M"] if has_m else [])
        try:
            rows = [tuple(float(r[k]) for k in keys) for r in reader]
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{measurements_csv}: non-numeric entry ({exc})") from exc
    if not rows:
        raise ValueError(f"{measurements_csv}: file has no measurements")
    out = reduce_rows(rows, area, speed, rho, chord)
    with open(out_csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha_deg", "CL", "CD"] + (["CM"] if has_m else []))
        for r in out:
            w.writerow([repr(float(x)) for x in r])
    return out
