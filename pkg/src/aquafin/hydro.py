"""Loads while submerged or crossing the surface.

The hull is a cylinder of radius R along the body x-axis, running from the
tail (s = cg_from_head - body_length) to the head (s = cg_from_head), with s
measured from the CG. Each cross-section is counted as wetted by a linear
ramp across its vertical half-thickness R cos(theta), which keeps the
submerged volume continuous even for a level hull sitting on the surface.
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np

from .aero import AeroLoads, PelvicFin, aero_force_moment
from .frames import AirflowUndefinedError, _wind_to_body, airflow_angles, cross3, rot_body_to_ground


class Phase(str, enum.Enum):
    SUBMERGED = "submerged"
    TRANSITION = "transition"
    AIRBORNE = "airborne"

    @classmethod
    def from_fraction(cls, fraction):
        if fraction <= 0.0:
            return cls.AIRBORNE
        if fraction >= 1.0:
            return cls.SUBMERGED
        return cls.TRANSITION


@dataclass(frozen=True)
class HydroCoeffs:
    """Hydrodynamic coefficients of the hull.

    ``area`` is the reference area A; the default is the hull's frontal
    area. ``moment_arm`` is L_B.
    """

    lift: float = 0.0
    drag: float = 0.8
    area: float = math.pi * 0.020**2
    moment_arm: float = 0.1
    cx: float = 0.0
    cz: float = 0.0

    def __post_init__(self):
        if not self.drag > 0:
            raise ValueError("hydrodynamic drag coefficient must be > 0")
        if not self.area > 0:
            raise ValueError("hydrodynamic reference area must be > 0")


@dataclass(frozen=True)
class ThrustModel:
    """Propeller thrust along body +x.

    ``mode`` is ``"constant"`` (fixed ``thrust``) or ``"power"``, where
    T = min(max_thrust, efficiency * power / max(|V|, v_floor)).
    """

    mode: str = "constant"
    thrust: float = 0.0
    power: float = 300.0
    efficiency: float = 0.3
    max_thrust: float = 10.0
    v_floor: float = 0.5
    active_phases: frozenset = field(
        default_factory=lambda: frozenset({Phase.SUBMERGED, Phase.TRANSITION}))

    def __post_init__(self):
        if self.mode not in ("constant", "power"):
            raise ValueError(f"unknown thrust mode {self.mode!r}")
        if self.thrust < 0 or self.max_thrust < 0 or self.power < 0:
            raise ValueError("thrust, max_thrust and power must be >= 0")
        if not 0 < self.efficiency <= 1:
            raise ValueError("efficiency must be in (0, 1]")
        if not self.v_floor > 0:
            raise ValueError("v_floor must be > 0")
        object.__setattr__(self, "active_phases",
                           frozenset(Phase(p) for p in self.active_phases))


# -- submerged geometry ---------------------------------------------------------

_GL = 0.5 / math.sqrt(3.0)


def _ramp(depth, half):
    if half <= 1e-12:
        return 1.0 if depth > 0 else (0.5 if depth == 0 else 0.0)
    return min(max((depth + half) / (2.0 * half), 0.0), 1.0)


def wetted_length(z_cg, axis_z, half, s_tail, s_head):
    """Integrals of the wetted ramp along the hull: (length, first moment in s).

    ``axis_z`` is the ground z-component of the body x-axis, so the depth of
    station s is z_cg + s * axis_z. The integrand is piecewise linear in s;
    each piece is integrated exactly with 2-point Gauss-Legendre.
    """
    cuts = [s_tail, s_head]
    if axis_z != 0.0:
        for d in (-half, half, 0.0):
            s = (d - z_cg) / axis_z
            if s_tail < s < s_head:
                cuts.append(s)
    cuts.sort()
    length = 0.0
    moment = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        mid, rad = 0.5 * (a + b), 0.5 * (b - a)
        for s in (mid - 2 * _GL * rad, mid + 2 * _GL * rad):
            f = _ramp(z_cg + s * axis_z, half) * rad
            length += f
            moment += f * s
    return length, moment


def submerged_geometry(state, params):
    """(submerged volume, buoyancy centre offset from CG along body x)."""
    sin_th = math.sin(state.euler[1])
    axis_z = -sin_th
    half = params.body_radius * math.sqrt(max(0.0, 1.0 - sin_th * sin_th))
    s_head = params.cg_from_head
    s_tail = params.cg_from_head - params.body_length
    z = float(state.position[2])
    # quick exits keep the airborne path cheap
    extent = max(abs(s_tail), s_head) * abs(axis_z) + half
    if z <= -extent:
        return 0.0, 0.0
    if z >= extent and half > 0:
        return params.volume, 0.5 * (s_tail + s_head)
    length, first = wetted_length(z, axis_z, half, s_tail, s_head)
    length = min(max(length, 0.0), params.body_length)
    if length <= 0.0:
        return 0.0, 0.0
    vol = math.pi * params.body_radius**2 * length
    return min(vol, params.volume), first / length


def submerged_volume(state, params):
    return submerged_geometry(state, params)[0]


def submerged_fraction(state, params):
    return submerged_volume(state, params) / params.volume


def buoyancy_force_moment(state, params, env, geometry=None):
    """Buoyancy (body frame) and its moment about the CG.

    The arm is the buoyancy-centre offset along the hull unless
    ``params.buoyancy_arm`` fixes it. Wings level, the moment reduces to
    a cos(theta) |B| about the pitch axis.
    """
    vol, centre = geometry if geometry is not None else submerged_geometry(state, params)
    if vol <= 0.0:
        return np.zeros(3), np.zeros(3)
    mag = env.rho_water * env.g * vol
    R = rot_body_to_ground(state.euler)
    B = R[:, 2] * -mag
    arm = centre if params.buoyancy_arm is None else params.buoyancy_arm
    return B, cross3([arm, 0.0, 0.0], B)


def hydro_force(state, coeffs, env, fraction):
    """Hydrodynamic lift/drag on the wetted part of the hull, body frame."""
    if fraction <= 0.0:
        return np.zeros(3)
    try:
        alpha, beta, speed = airflow_angles(state.velocity)
    except AirflowUndefinedError:
        return np.zeros(3)
    q = 0.5 * env.rho_water * speed * speed * coeffs.area * fraction
    R = _wind_to_body(alpha, beta)
    return R[:, 0] * (-q * coeffs.drag) + R[:, 2] * (-q * coeffs.lift)


def hydro_moment(state, coeffs, env, fraction):
    if fraction <= 0.0 or (coeffs.cx == 0.0 and coeffs.cz == 0.0):
        return np.zeros(3)
    v2 = float(np.dot(state.velocity, state.velocity))
    q = 0.5 * env.rho_water * v2 * coeffs.area * fraction * coeffs.moment_arm
    return q * np.array([coeffs.cx, 0.0, coeffs.cz])


def thrust_magnitude(model, speed, phase):
    if Phase(phase) not in model.active_phases:
        return 0.0
    if model.mode == "constant":
        return model.thrust
    return min(model.max_thrust, model.efficiency * model.power / max(speed, model.v_floor))


def thrust_force_moment(state, model, params, phase):
    T = thrust_magnitude(model, float(np.linalg.norm(state.velocity)), phase)
    if T == 0.0:
        return np.zeros(3), np.zeros(3)
    F = np.array([T, 0.0, 0.0])
    return F, cross3(params.thrust_arm, F)


def gravity_body(state, mass, g):
    return rot_body_to_ground(state.euler)[:, 2] * (mass * g)


@dataclass(frozen=True)
class LoadBreakdown:
    """Every force/moment term acting on the robot, body frame."""

    gravity: np.ndarray
    aero: AeroLoads
    buoyancy: np.ndarray
    buoyancy_moment: np.ndarray
    hydro: np.ndarray
    hydro_moment: np.ndarray
    thrust: np.ndarray
    thrust_moment: np.ndarray
    fraction: float
    phase: Phase

    @property
    def force(self):
        return self.gravity + self.aero.force + self.buoyancy + self.hydro + self.thrust

    @property
    def moment(self):
        return self.aero.moment + self.buoyancy_moment + self.hydro_moment + self.thrust_moment

    @property
    def drag(self):
        """Air plus water drag: the dissipative part of the load."""
        return self.aero.drag + self.hydro


def exit_totals(state, params, env, wing, table, ge, hydro, thrust, pelvic=None):
    """All loads at ``state``; air loads are weighted by the dry fraction."""
    geom = submerged_geometry(state, params)
    fraction = min(max(geom[0] / params.volume, 0.0), 1.0)
    phase = Phase.from_fraction(fraction)
    if pelvic is None:
        pelvic = PelvicFin(params.pelvic_fin_area, params.pelvic_fin_mean_width)
    aero = aero_force_moment(state, wing, table, env, ge, pelvic)
    if fraction > 0.0:
        aero = aero.scaled(1.0 - fraction)
    B, MB = buoyancy_force_moment(state, params, env, geom)
    T, MT = thrust_force_moment(state, thrust, params, phase)
    return LoadBreakdown(
        gravity=gravity_body(state, params.mass, env.g),
        aero=aero,
        buoyancy=B,
        buoyancy_moment=MB,
        hydro=hydro_force(state, hydro, env, fraction),
        hydro_moment=hydro_moment(state, hydro, env, fraction),
        thrust=T,
        thrust_moment=MT,
        fraction=fraction,
        phase=phase,
    )
