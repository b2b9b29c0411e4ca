"""Scenario configuration documents (JSON).

A document mirrors :class:`~aquafin.simulator.Scenario` section by section.
It must be complete unless it names a ``"base"`` (``"defaults"`` or a path
to another document), in which case it is deep-merged over that base. The
shipped ``defaults.json`` materialises every modelling default.
"""

import copy
from importlib import resources
import json
import math
from pathlib import Path

import numpy as np

from .actuator import ActuatorCalib, load_volume_curve
from .aero import AeroTable, GroundEffectModel, default_table
from .hydro import HydroCoeffs, ThrustModel
from .model import Environment, RobotParams
from .simulator import Scenario, WingCommand, launch_state


class ConfigError(ValueError):
    """Invalid configuration; ``field`` is the dotted path at fault."""

    def __init__(self, message, field=None, source=None, io=False):
        self.field = field
        self.source = source
        self.io = io
        where = f"{source}: " if source else ""
        at = f"{field}: " if field else ""
        super().__init__(f"{where}{at}{message}")


SCHEMA = {
    "name": None,
    "robot": {"mass", "body_length", "wing_arm_length", "folded_width", "body_radius",
              "cg_from_head", "inertia", "pelvic_fin_area", "pelvic_fin_mean_width",
              "buoyancy_arm", "thrust_arm", "motor_power", "listed_wingspan"},
    "environment": {"rho_air", "rho_water", "g", "ground_effect_enabled"},
    "aero": {"table", "chord", "cy", "cx", "cz"},
    "ground_effect": {"lift_gain", "drag_relief", "decay", "cutoff"},
    "hydro": {"lift", "drag", "area", "moment_arm", "cx", "cz"},
    "thrust": {"mode", "thrust", "power", "efficiency", "max_thrust", "v_floor", "active_phases"},
    "actuator": {"pressure_gain", "full_extension_volume", "time_constant", "volume_curves"},
    "initial": {"speed", "discharge_angle_deg", "position", "wing_angle_deg"},
    "wing_schedule": None,
    "termination": {"max_time", "max_distance"},
    "integrator": {"dt", "sample_every"},
    "pelvic_angle_deg": None,
}
OPTIONAL = {"name", "base"}


def defaults_path():
    return resources.files("aquafin") / "data" / "defaults.json"


def load_defaults():
    return json.loads(defaults_path().read_text())


def deep_merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def read_document(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", source=str(path), io=True) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                          source=str(path)) from exc
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object", source=str(path))
    return resolve(doc, path.parent, str(path))


def resolve(doc, base_dir=Path("."), source=None):
    """Apply a document's ``base`` chain; returns a complete document."""
    doc = dict(doc)
    base = doc.pop("base", None)
    if base is None:
        return doc
    if base == "defaults":
        parent = load_defaults()
    elif isinstance(base, dict):
        parent = resolve(base, base_dir, source)
    else:
        parent = read_document(Path(base_dir) / base)
    return deep_merge(parent, doc)


def get_path(doc, dotted):
    cur = doc
    for part in dotted.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        else:
            cur = cur[part]
    return cur


def set_path(doc, dotted, value):
    """Set ``value`` at a dotted path (list indices allowed); returns a copy."""
    out = copy.deepcopy(doc)
    parts = dotted.split(".")
    cur = out
    try:
        for part in parts[:-1]:
            cur = cur[int(part)] if isinstance(cur, list) else cur[part]
        last = parts[-1]
        if isinstance(cur, list):
            cur[int(last)] = value
        else:
            if last not in cur:
                raise KeyError(last)
            cur[last] = value
    except (KeyError, IndexError, ValueError, TypeError) as exc:
        raise ConfigError("parameter path does not resolve in the scenario schema",
                          field=dotted) from exc
    return out


class _Reader:
    def __init__(self, doc, source):
        self.doc = doc
        self.source = source

    def section(self, name):
        if name not in self.doc:
            raise ConfigError("missing section", field=name, source=self.source)
        sec = self.doc[name]
        allowed = SCHEMA[name]
        if isinstance(allowed, set):
            if not isinstance(sec, dict):
                raise ConfigError("must be an object", field=name, source=self.source)
            for key in sec:
                if key not in allowed:
                    raise ConfigError("unknown field", field=f"{name}.{key}", source=self.source)
        return sec

    def get(self, name, key, kind=float, nullable=False):
        sec = self.section(name)
        field = f"{name}.{key}"
        if key not in sec:
            raise ConfigError("missing field", field=field, source=self.source)
        v = sec[key]
        if v is None:
            if nullable:
                return None
            raise ConfigError("must not be null", field=field, source=self.source)
        return self.coerce(v, kind, field)

    def coerce(self, v, kind, field):
        try:
            if kind is float:
                if isinstance(v, bool):
                    raise TypeError
                out = float(v)
                if math.isnan(out):
                    raise TypeError
                return out
            if kind is bool:
                if not isinstance(v, bool):
                    raise TypeError
                return v
            if kind is str:
                if not isinstance(v, str):
                    raise TypeError
                return v
            if kind == "vec3":
                a = np.array(v, dtype=float)
                if a.shape != (3,):
                    raise TypeError
                return a
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"expected {getattr(kind, '__name__', kind)}, got {v!r}",
                              field=field, source=self.source) from exc
        raise AssertionError(kind)


def check_unknown(doc, source=None):
    for key in doc:
        if key not in SCHEMA and key not in OPTIONAL:
            raise ConfigError("unknown section", field=key, source=source)


def scenario_from_dict(doc, source=None, base_dir=Path(".")):
    """Build a :class:`Scenario` from a resolved document."""
    doc = resolve(doc, base_dir, source)
    check_unknown(doc, source)
    r = _Reader(doc, source)
    try:
        return _build(r, Path(base_dir))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), source=source) from exc


def _inertia(r):
    raw = r.section("robot").get("inertia", None)
    if raw is None:
        if "inertia" not in r.section("robot"):
            raise ConfigError("missing field", field="robot.inertia", source=r.source)
        return None
    a = np.array(raw, dtype=float)
    if a.shape == (3,):
        return np.diag(a)
    if a.shape == (3, 3):
        return a
    raise ConfigError("expected 3 diagonal values or a 3x3 matrix", field="robot.inertia",
                      source=r.source)


def _build(r, base_dir):
    g = r.get
    robot = RobotParams(
        mass=g("robot", "mass"),
        body_length=g("robot", "body_length"),
        wing_arm_length=g("robot", "wing_arm_length"),
        folded_width=g("robot", "folded_width"),
        body_radius=g("robot", "body_radius"),
        cg_from_head=g("robot", "cg_from_head"),
        inertia=_inertia(r),
        pelvic_fin_area=g("robot", "pelvic_fin_area", nullable=True),
        pelvic_fin_mean_width=g("robot", "pelvic_fin_mean_width"),
        buoyancy_arm=g("robot", "buoyancy_arm", nullable=True),
        thrust_arm=g("robot", "thrust_arm", "vec3"),
        motor_power=g("robot", "motor_power"),
        listed_wingspan=g("robot", "listed_wingspan"),
    )
    env = Environment(
        rho_air=g("environment", "rho_air"),
        rho_water=g("environment", "rho_water"),
        g=g("environment", "g"),
        ground_effect_enabled=g("environment", "ground_effect_enabled", bool),
    )
    table_ref = g("aero", "table", str)
    akw = dict(chord=g("aero", "chord"), cy=g("aero", "cy"), cx=g("aero", "cx"), cz=g("aero", "cz"))
    if table_ref == "default":
        table = default_table(**akw)
    else:
        p = Path(table_ref)
        p = p if p.is_absolute() else base_dir / p
        try:
            table = AeroTable.from_csv(p, **akw)
        except OSError as exc:
            raise ConfigError(f"cannot read aero table {p}: {exc.strerror}", field="aero.table",
                              source=r.source, io=True) from exc
        except ValueError as exc:
            raise ConfigError(str(exc), field="aero.table", source=r.source) from exc
    ge = GroundEffectModel(
        lift_gain=g("ground_effect", "lift_gain"),
        drag_relief=g("ground_effect", "drag_relief"),
        decay=g("ground_effect", "decay"),
        cutoff=g("ground_effect", "cutoff"),
    )
    area = g("hydro", "area", nullable=True)
    hydro = HydroCoeffs(
        lift=g("hydro", "lift"), drag=g("hydro", "drag"),
        area=robot.frontal_area if area is None else area,
        moment_arm=g("hydro", "moment_arm"), cx=g("hydro", "cx"), cz=g("hydro", "cz"),
    )
    power = g("thrust", "power", nullable=True)
    phases = r.section("thrust").get("active_phases")
    if not isinstance(phases, list):
        raise ConfigError("expected a list of phase names", field="thrust.active_phases",
                          source=r.source)
    thrust = ThrustModel(
        mode=g("thrust", "mode", str), thrust=g("thrust", "thrust"),
        power=robot.motor_power if power is None else power,
        efficiency=g("thrust", "efficiency"), max_thrust=g("thrust", "max_thrust"),
        v_floor=g("thrust", "v_floor"), active_phases=frozenset(phases),
    )
    act = r.section("actuator")
    fev = act.get("full_extension_volume")
    if not isinstance(fev, dict):
        raise ConfigError("expected an object of medium: mL", field="actuator.full_extension_volume",
                          source=r.source)
    curves = {}
    for medium, path in (act.get("volume_curves") or {}).items():
        p = Path(path)
        curves[medium] = load_volume_curve(p if p.is_absolute() else base_dir / p)
    calib = ActuatorCalib(
        pressure_gain=g("actuator", "pressure_gain"),
        full_extension_volume={k: float(v) for k, v in fev.items()},
        volume_curves=curves,
        time_constant=g("actuator", "time_constant"),
    )
    schedule = _schedule(r)
    wing0 = g("initial", "wing_angle_deg", nullable=True)
    initial = launch_state(
        g("initial", "speed"),
        math.radians(g("initial", "discharge_angle_deg")),
        position=g("initial", "position", "vec3"),
        wing_angle=math.radians(wing0 or 0.0),
    )
    sample_every = int(g("integrator", "sample_every"))
    if sample_every < 1:
        raise ConfigError("must be >= 1", field="integrator.sample_every", source=r.source)
    pelvic = r.doc.get("pelvic_angle_deg", 0.0)
    sc = Scenario(
        initial=initial, params=robot, env=env, table=table, ground_effect=ge, hydro=hydro,
        thrust=thrust, actuator=calib, schedule=schedule,
        pelvic_angle=math.radians(r.coerce(pelvic, float, "pelvic_angle_deg")),
        wing_starts_commanded=wing0 is None,
        max_time=g("termination", "max_time"),
        max_distance=g("termination", "max_distance"),
        dt=g("integrator", "dt"),
        name=str(r.doc.get("name", "")),
    )
    return sc, sample_every


def _schedule(r):
    if "wing_schedule" not in r.doc:
        raise ConfigError("missing section", field="wing_schedule", source=r.source)
    items = r.doc["wing_schedule"]
    if not isinstance(items, list):
        raise ConfigError("expected a list", field="wing_schedule", source=r.source)
    out = []
    for i, item in enumerate(items):
        f = f"wing_schedule.{i}"
        if not isinstance(item, dict):
            raise ConfigError("expected an object", field=f, source=r.source)
        unknown = set(item) - {"trigger", "time", "altitude", "direction", "angle_deg"}
        if unknown:
            raise ConfigError("unknown field", field=f"{f}.{sorted(unknown)[0]}", source=r.source)
        if "angle_deg" not in item:
            raise ConfigError("missing field", field=f"{f}.angle_deg", source=r.source)
        try:
            out.append(WingCommand(
                angle=math.radians(r.coerce(item["angle_deg"], float, f"{f}.angle_deg")),
                trigger=item.get("trigger", "time"),
                time=r.coerce(item.get("time", 0.0), float, f"{f}.time"),
                altitude=r.coerce(item.get("altitude", 0.0), float, f"{f}.altitude"),
                direction=item.get("direction", "either"),
            ))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), field=f, source=r.source) from exc
    return tuple(out)


def load_scenario(path):
    """(Scenario, sample_every) from a config file."""
    path = Path(path)
    doc = read_document(path)
    return scenario_from_dict(doc, source=str(path), base_dir=path.parent)
