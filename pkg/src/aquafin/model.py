"""Shared state and parameter types."""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .frames import normalize_euler


def _vec3(x, name):
    a = np.array(x, dtype=float).reshape(3)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BodyState:
    """Rigid-body state.

    Attributes:
        position: CG position in the ground frame [m] (z down, surface z=0).
        velocity: body-frame velocity (u, v, w) [m/s].
        euler: (phi, theta, psi) [rad].
        omega: body rates (p, q, r) [rad/s].
        time: [s].
        wing_angle: current pectoral-fin opening angle k [rad]. Carried
            here because the actuator lag is part of the simulation state.
    """

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    euler: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega: np.ndarray = field(default_factory=lambda: np.zeros(3))
    time: float = 0.0
    wing_angle: float = 0.0

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "position", _vec3(self.position, "position"))
        set_(self, "velocity", _vec3(self.velocity, "velocity"))
        set_(self, "omega", _vec3(self.omega, "omega"))
        e = normalize_euler(_vec3(self.euler, "euler"))
        e.setflags(write=False)
        set_(self, "euler", e)
        set_(self, "time", float(self.time))
        set_(self, "wing_angle", float(self.wing_angle))
        if not (math.isfinite(self.time) and math.isfinite(self.wing_angle)):
            raise ValueError("time and wing_angle must be finite")

    @property
    def altitude(self):
        return -float(self.position[2])

    def as_vector(self):
        """Flat 12-vector (x y z u v w phi theta psi p q r)."""
        return np.concatenate([self.position, self.velocity, self.euler, self.omega])

    @classmethod
    def from_vector(cls, y, time=0.0, wing_angle=0.0):
        y = np.asarray(y, dtype=float)
        return cls(y[0:3], y[3:6], y[6:9], y[9:12], time, wing_angle)

    def replace(self, **changes):
        return replace(self, **changes)


def composite_inertia(mass, body_length, body_radius, cg_from_head, wing_arm_length,
                      body_fraction=0.8):
    """Diagonal inertia about the CG from a cylinder plus two wing-arm rods.

    The body is a uniform solid cylinder carrying ``body_fraction`` of the
    mass. The rest sits in two slender rods of length ``wing_arm_length``
    running spanwise from the hull surface at the CG station.
    """
    m_body = body_fraction * mass
    m_rod = 0.5 * (1.0 - body_fraction) * mass
    R, Lb, l = body_radius, body_length, wing_arm_length
    offset = Lb / 2.0 - cg_from_head
    ixx = 0.5 * m_body * R**2
    iyy = m_body * (3 * R**2 + Lb**2) / 12.0 + m_body * offset**2
    izz = iyy
    # rod from y=R to y=R+l, both sides
    rod_y2 = m_rod * ((R + l) ** 3 - R**3) / (3.0 * l)
    ixx += 2 * rod_y2
    izz += 2 * rod_y2
    return np.diag([ixx, iyy, izz])


@dataclass(frozen=True)
class RobotParams:
    """Physical parameters of the robot (SI units).

    Defaults are the prototype's published dimensions; the inertia, pelvic
    fin and arm values are modelling choices and can be overridden.
    ``buoyancy_arm=None`` means the buoyancy arm is recomputed from the
    wetted geometry at every evaluation.
    """

    mass: float = 0.353
    body_length: float = 0.3361
    wing_arm_length: float = 0.170
    folded_width: float = 0.1354
    body_radius: float = 0.020
    cg_from_head: float = 0.13
    inertia: np.ndarray = None
    pelvic_fin_area: float = None
    pelvic_fin_mean_width: float = 0.04
    buoyancy_arm: float = None
    thrust_arm: np.ndarray = field(default_factory=lambda: np.zeros(3))
    motor_power: float = 300.0
    listed_wingspan: float = 0.455

    def __post_init__(self):
        set_ = object.__setattr__
        for name in ("mass", "body_length", "wing_arm_length", "folded_width",
                     "body_radius", "cg_from_head", "pelvic_fin_mean_width"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be > 0, got {v!r}")
        if self.cg_from_head >= self.body_length:
            raise ValueError("cg_from_head must lie inside the body")
        if self.inertia is None:
            I = composite_inertia(self.mass, self.body_length, self.body_radius,
                                  self.cg_from_head, self.wing_arm_length)
        else:
            I = np.array(self.inertia, dtype=float).reshape(3, 3)
        if not np.allclose(I, I.T, rtol=0, atol=1e-15 + 1e-12 * np.abs(I).max()):
            raise ValueError("inertia must be symmetric")
        if np.any(np.linalg.eigvalsh(I) <= 0):
            raise ValueError("inertia must be positive definite")
        I.setflags(write=False)
        set_(self, "inertia", I)
        Iinv = np.linalg.inv(I)
        Iinv.setflags(write=False)
        set_(self, "_inertia_inv", Iinv)
        if self.pelvic_fin_area is None:
            # a tenth of the fully opened pectoral area
            set_(self, "pelvic_fin_area", 0.1 * 0.5 * self.wing_arm_length**2 * (math.pi / 2))
        if self.pelvic_fin_area < 0:
            raise ValueError("pelvic_fin_area must be >= 0")
        set_(self, "thrust_arm", _vec3(self.thrust_arm, "thrust_arm"))

    @property
    def inertia_inv(self):
        return self._inertia_inv

    @property
    def volume(self):
        """Total hull volume of the cylinder model [m^3]."""
        return math.pi * self.body_radius**2 * self.body_length

    @property
    def frontal_area(self):
        return math.pi * self.body_radius**2

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class Environment:
    """Fluid properties and global switches.

    ``rho_air = 0`` is accepted and gives a vacuum (no aerodynamic loads).
    """

    rho_air: float = 1.225
    rho_water: float = 1000.0
    g: float = 9.81
    ground_effect_enabled: bool = False

    def __post_init__(self):
        if not (self.rho_air >= 0 and math.isfinite(self.rho_air)):
            raise ValueError(f"rho_air must be >= 0, got {self.rho_air!r}")
        if not (self.rho_water > 0 and math.isfinite(self.rho_water)):
            raise ValueError(f"rho_water must be > 0, got {self.rho_water!r}")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise ValueError(f"g must be > 0, got {self.g!r}")

    def replace(self, **changes):
        return replace(self, **changes)
