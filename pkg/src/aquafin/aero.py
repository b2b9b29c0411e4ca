"""Collapsible-wing geometry, coefficient tables and air loads."""

import csv
from dataclasses import dataclass, field
from importlib import resources
import logging
import math
import warnings

import numpy as np

from .frames import AirflowUndefinedError, _wind_to_body, airflow_angles, cross3

log = logging.getLogger(__name__)

K_MAX = math.pi / 2
_K_TOL = 1e-9


class WingAngleClampWarning(UserWarning):
    pass


def _clamp_k(k):
    if k < -_K_TOL or k > K_MAX + _K_TOL or not math.isfinite(k):
        if not math.isfinite(k):
            raise ValueError(f"opening angle must be finite, got {k!r}")
        warnings.warn(f"opening angle {math.degrees(k):.3f} deg clamped to [0, 90]",
                      WingAngleClampWarning, stacklevel=3)
    return min(max(k, 0.0), K_MAX)


def wing_area(k, l):
    """Fan area of one pair of pectoral fins opened by ``k`` radians: l^2 k / 2."""
    if l <= 0:
        raise ValueError(f"arm length must be > 0, got {l!r}")
    return 0.5 * l * l * _clamp_k(k)


def wing_span(k, l, L):
    """Tip-to-tip span: 2 l sin(k) + L."""
    if l <= 0 or L <= 0:
        raise ValueError("arm length and folded width must be > 0")
    return 2.0 * l * math.sin(_clamp_k(k)) + L


@dataclass(frozen=True)
class WingConfig:
    opening_angle: float = K_MAX
    arm_length: float = 0.170
    folded_width: float = 0.1354

    def __post_init__(self):
        object.__setattr__(self, "opening_angle", _clamp_k(float(self.opening_angle)))

    @property
    def area(self):
        return wing_area(self.opening_angle, self.arm_length)

    @property
    def span(self):
        return wing_span(self.opening_angle, self.arm_length, self.folded_width)


# -- coefficient tables -------------------------------------------------------

def default_cl(alpha_deg):
    """Lift: zero at -5 deg, linear to 0.8 at +10 deg, flat beyond."""
    a = np.asarray(alpha_deg, dtype=float)
    return np.where(a >= 10.0, 0.8, 0.8 * (a + 5.0) / 15.0)


_CD_MIN = 0.06
_CD_K = (default_cl(5.0) / 4.37 - _CD_MIN) / 100.0  # per deg^2


def default_cd(alpha_deg):
    """Drag: parabola in (alpha + 5 deg) with its minimum of 0.06 at -5 deg."""
    a = np.asarray(alpha_deg, dtype=float)
    return _CD_MIN + _CD_K * (a + 5.0) ** 2


def default_cm(alpha_deg):
    """Pitch moment: -0.01/deg slope, zero at -5 deg."""
    return -0.01 * (np.asarray(alpha_deg, dtype=float) + 5.0)


def default_breakpoints():
    return np.arange(-20.0, 30.0 + 0.5, 1.0)


@dataclass(frozen=True)
class AeroTable:
    """Angle-of-attack indexed coefficients, piecewise-linear and clamped.

    ``alpha`` is in radians. ``chord`` is the reference chord used for the
    pitching moment; ``cy``, ``cx``, ``cz`` are constant side-force, roll and
    yaw coefficients.
    """

    alpha: np.ndarray
    cl: np.ndarray
    cd: np.ndarray
    cm: np.ndarray
    cy: float = 0.0
    cx: float = 0.0
    cz: float = 0.0
    chord: float = 0.0477

    def __post_init__(self):
        arrs = {}
        for name in ("alpha", "cl", "cd", "cm"):
            a = np.array(getattr(self, name), dtype=float).ravel()
            a.setflags(write=False)
            arrs[name] = a
            object.__setattr__(self, name, a)
        n = arrs["alpha"].size
        if n == 0:
            raise ValueError("aero table is empty")
        if any(a.size != n for a in arrs.values()):
            raise ValueError("aero table columns differ in length")
        if not all(np.all(np.isfinite(a)) for a in arrs.values()):
            raise ValueError("aero table contains non-finite values")
        if n > 1 and np.any(np.diff(arrs["alpha"]) <= 0):
            raise ValueError("aero table alpha must be strictly increasing")
        lo, hi = math.radians(-15.0), math.radians(25.0)
        if arrs["alpha"][0] > lo + 1e-12 or arrs["alpha"][-1] < hi - 1e-12:
            raise ValueError("aero table must span at least [-15, 25] deg")
        if np.any(arrs["cd"] <= 0):
            raise ValueError("drag coefficient must be > 0 everywhere")
        if not self.chord > 0:
            raise ValueError("reference chord must be > 0")

    def coeffs(self, alpha):
        """(C_L, C_D, C_M) at ``alpha`` radians; clamped outside the table."""
        xp = self.alpha
        return (float(np.interp(alpha, xp, self.cl)),
                float(np.interp(alpha, xp, self.cd)),
                float(np.interp(alpha, xp, self.cm)))

    @classmethod
    def from_degrees(cls, alpha_deg, cl, cd, cm=None, **kw):
        alpha_deg = np.asarray(alpha_deg, dtype=float)
        if cm is None:
            cm = np.zeros_like(alpha_deg)
        return cls(np.radians(alpha_deg), cl, cd, cm, **kw)

    @classmethod
    def from_csv(cls, path, **kw):
        """Load a table with header ``alpha_deg,CL,CD[,CM]``."""
        with open(path, newline="") as fh:
            return cls._from_rows(csv.DictReader(fh), str(path), **kw)

    @classmethod
    def _from_rows(cls, reader, source, **kw):
        cols = reader.fieldnames or []
        missing = [c for c in ("alpha_deg", "CL", "CD") if c not in cols]
        if missing:
            raise ValueError(f"{source}: missing column(s) {', '.join(missing)}")
        rows = list(reader)
        if not rows:
            raise ValueError(f"{source}: aero table is empty")
        data = {c: np.array([float(r[c]) for r in rows]) for c in cols if c}
        return cls.from_degrees(data["alpha_deg"], data["CL"], data["CD"], data.get("CM"), **kw)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha_deg", "CL", "CD", "CM"])
            # degrees rounded so that integer breakpoints survive the round trip
            deg = np.round(np.degrees(self.alpha), 10)
            for row in zip(deg, self.cl, self.cd, self.cm):
                w.writerow([repr(float(v)) for v in row])


def build_default_table(chord=0.0477):
    """The default table evaluated from its defining formulas."""
    a = default_breakpoints()
    return AeroTable.from_degrees(a, default_cl(a), default_cd(a), default_cm(a), chord=chord)


def default_table(**kw):
    """The shipped default table (``data/default_aero.csv``)."""
    ref = resources.files("aquafin") / "data" / "default_aero.csv"
    with resources.as_file(ref) as p:
        return AeroTable.from_csv(p, **kw)


def aero_coeffs(table, alpha):
    if table is None:
        raise ValueError("no aero table configured")
    return table.coeffs(alpha)


# -- ground effect -------------------------------------------------------------

@dataclass(frozen=True)
class GroundEffectModel:
    """Exponential ground-effect factors with a hard cutoff in h/b.

    Below the cutoff, lift is multiplied by
    1 + lift_gain * (exp(-decay h/b) - exp(-decay cutoff)) and drag by
    1 - drag_relief * (same bracket), so both are 1 at the cutoff.
    """

    lift_gain: float = 1.0
    drag_relief: float = 0.5
    decay: float = 4.0
    cutoff: float = 0.5

    def __post_init__(self):
        if self.lift_gain < 0 or self.decay <= 0 or self.cutoff <= 0:
            raise ValueError("ground-effect lift_gain >= 0, decay > 0, cutoff > 0 required")
        if not 0 <= self.drag_relief < 1:
            raise ValueError("ground-effect drag_relief must be in [0, 1)")


def ground_effect_factors(model, altitude, span, enabled=True):
    """(C_gel, C_ged) multipliers on lift and drag at CG ``altitude``.

    Negative altitudes are treated as zero clearance.
    """
    if span <= 0:
        raise ValueError(f"span must be > 0, got {span!r}")
    if not enabled:
        return 1.0, 1.0
    ratio = max(altitude, 0.0) / span
    if ratio >= model.cutoff:
        return 1.0, 1.0
    bump = math.exp(-model.decay * ratio) - math.exp(-model.decay * model.cutoff)
    return 1.0 + model.lift_gain * bump, 1.0 - model.drag_relief * bump


# -- fin loads ----------------------------------------------------------------

@dataclass(frozen=True)
class PelvicFin:
    """Pelvic fin pair: area, mean width, pitch angle and its rate."""

    area: float = 0.0
    mean_width: float = 0.04
    angle: float = 0.0
    rate: float = 0.0


def _rot_y(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def pelvic_fin_velocity(v_cg_body, theta_p, theta_p_rate, b_p):
    """Velocity of the pelvic fin through the fluid, body frame.

    The fin's own rotation contributes omega x r with omega about body y and
    r the fin's mean width along its chord line, rotated about y by
    (pi/2 - theta_p).
    """
    v = np.asarray(v_cg_body, dtype=float)
    if theta_p_rate == 0.0:
        return v.copy()
    tip = cross3([0.0, theta_p_rate, 0.0], [b_p, 0.0, 0.0])
    return v + _rot_y(math.pi / 2 - theta_p) @ tip


@dataclass(frozen=True)
class AeroLoads:
    """Air loads in the body frame, with the lift/drag split kept for logging."""

    force: np.ndarray
    moment: np.ndarray
    lift: np.ndarray
    drag: np.ndarray
    alpha: float = 0.0
    speed: float = 0.0
    degenerate: bool = False

    def scaled(self, s):
        return AeroLoads(self.force * s, self.moment * s, self.lift * s, self.drag * s,
                         self.alpha, self.speed, self.degenerate)


_ZERO3 = np.zeros(3)


def _fin_loads(v_body, area, table, rho, gel, ged, span):
    alpha, beta, speed = airflow_angles(v_body)
    cl, cd, cm = table.coeffs(alpha)
    qs = 0.5 * rho * speed * speed * area
    R = _wind_to_body(alpha, beta)
    lift = R[:, 2] * (-qs * cl * gel)
    drag = R[:, 0] * (-qs * cd * ged)
    side = R[:, 1] * (qs * table.cy)
    moment = qs * np.array([span * table.cx, table.chord * cm, span * table.cz])
    return lift, drag, side, moment, alpha, speed


def aero_force_moment(state, wing, table, env, ge=None, pelvic=None):
    """Pectoral plus pelvic fin air loads about the CG, body frame.

    Gravity is not included. Below the minimum airspeed the loads are zero
    and ``degenerate`` is set.
    """
    ge = ge or GroundEffectModel()
    pelvic = pelvic or PelvicFin()
    s1 = wing.area
    s2 = pelvic.area
    b = wing.span
    gel, ged = ground_effect_factors(ge, state.altitude, b, env.ground_effect_enabled)
    rho = env.rho_air
    lift = np.zeros(3)
    drag = np.zeros(3)
    force = np.zeros(3)
    moment = np.zeros(3)
    alpha = 0.0
    speed = float(np.linalg.norm(state.velocity))
    try:
        if s1 > 0:
            l_, d_, y_, m_, alpha, speed = _fin_loads(state.velocity, s1, table, rho, gel, ged, b)
            lift += l_
            drag += d_
            force += l_ + d_ + y_
            moment += m_
        if s2 > 0:
            vp = pelvic_fin_velocity(state.velocity, pelvic.angle, pelvic.rate, pelvic.mean_width)
            l_, d_, y_, m_, a_p, _ = _fin_loads(vp, s2, table, rho, gel, ged, b)
            if s1 <= 0:
                alpha = a_p
            lift += l_
            drag += d_
            force += l_ + d_ + y_
            moment += m_
    except AirflowUndefinedError:
        return AeroLoads(_ZERO3.copy(), _ZERO3.copy(), _ZERO3.copy(), _ZERO3.copy(),
                         0.0, speed, True)
    return AeroLoads(force, moment, lift, drag, alpha, speed, False)


# -- wind-tunnel reduction ----------------------------------------------------

def wind_tunnel_forces(lift, drag, alpha):
    """Balance readings (F_z up, F_x back) produced by a lift/drag pair."""
    c, s = math.cos(alpha), math.sin(alpha)
    return lift * c + drag * s, lift * s - drag * c


def reduce_wind_tunnel(F_z, F_x, alpha, speed, area, rho, moment=None, chord=1.0):
    """Coefficients (C_L, C_D, C_M) from balance forces at attack angle ``alpha``.

    The 2x2 balance system has determinant -1, so it is inverted in closed
    form. ``C_M`` is None when no moment is given; it is normalised by
    ``chord`` (1 by default, i.e. 2M / (rho S V^2)).
    """
    if not speed > 0:
        raise ValueError(f"speed must be > 0, got {speed!r}")
    if not area > 0:
        raise ValueError(f"area must be > 0, got {area!r}")
    if not rho > 0:
        raise ValueError(f"rho must be > 0, got {rho!r}")
    c, s = math.cos(alpha), math.sin(alpha)
    lift = c * F_z + s * F_x
    drag = s * F_z - c * F_x
    q = 0.5 * rho * area * speed * speed
    cm = None if moment is None else moment / (q * chord)
    return lift / q, drag / q, cm
