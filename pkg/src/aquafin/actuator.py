"""Soft hydraulic actuator: pressure/volume to wing opening angle."""

import csv
from dataclasses import dataclass, field
import math

import numpy as np

FULL_ANGLE = 90.0  # deg
MEDIA = ("liquid", "gas")


def _check_curve(curve, name):
    vol, ang = (np.asarray(c, dtype=float) for c in curve)
    if vol.size < 2 or vol.size != ang.size:
        raise ValueError(f"{name}: volume curve needs >= 2 matching points")
    if np.any(np.diff(vol) <= 0):
        raise ValueError(f"{name}: volumes must be strictly increasing")
    if np.any(np.diff(ang) < 0):
        raise ValueError(f"{name}: angles must be non-decreasing")
    if vol[0] != 0 or ang[0] != 0 or ang[-1] != FULL_ANGLE:
        raise ValueError(f"{name}: curve must run from (0, 0) to (V_full, 90)")
    vol.setflags(write=False)
    ang.setflags(write=False)
    return vol, ang


@dataclass(frozen=True)
class ActuatorCalib:
    """Calibration of the bending actuator.

    Attributes:
        pressure_gain: deg per kPa of internal pressure.
        full_extension_volume: injected volume [mL] for a full 90 deg, per medium.
        volume_curves: optional measured (volumes_ml, angles_deg) per medium;
            overrides the linear default for that medium.
        retract_curves: optional separate curves for the contraction stroke.
        time_constant: first-order lag of the opening angle [s].
    """

    pressure_gain: float = 1.2
    full_extension_volume: dict = field(default_factory=lambda: {"liquid": 2.0, "gas": 5.0})
    volume_curves: dict = field(default_factory=dict)
    retract_curves: dict = field(default_factory=dict)
    time_constant: float = 0.15

    def __post_init__(self):
        if not self.pressure_gain > 0:
            raise ValueError("pressure_gain must be > 0")
        if not self.time_constant >= 0:
            raise ValueError("time_constant must be >= 0")
        for medium, v in self.full_extension_volume.items():
            if not v > 0:
                raise ValueError(f"full extension volume for {medium} must be > 0")
        for store in ("volume_curves", "retract_curves"):
            checked = {m: _check_curve(c, f"{store}[{m}]") for m, c in getattr(self, store).items()}
            object.__setattr__(self, store, checked)

    def curve(self, medium, retracting=False):
        if medium not in self.full_extension_volume and medium not in self.volume_curves:
            raise ValueError(f"unknown medium {medium!r}")
        if retracting and medium in self.retract_curves:
            return self.retract_curves[medium]
        if medium in self.volume_curves:
            return self.volume_curves[medium]
        return np.array([0.0, self.full_extension_volume[medium]]), np.array([0.0, FULL_ANGLE])


DEFAULT_CALIB = ActuatorCalib()


def angle_from_pressure(pressure, calib=DEFAULT_CALIB):
    """Bending angle [deg] at internal pressure [kPa]; saturates at 90."""
    if pressure < 0:
        raise ValueError(f"negative pressure {pressure!r} kPa is not modelled")
    return min(calib.pressure_gain * pressure, FULL_ANGLE)


def pressure_from_angle(theta, calib=DEFAULT_CALIB):
    """Pressure [kPa] needed for a bending angle [deg] in [0, 90]."""
    if not 0.0 <= theta <= FULL_ANGLE:
        raise ValueError(f"angle {theta!r} deg outside [0, 90]")
    return theta / calib.pressure_gain


def angle_from_volume(volume, medium="liquid", calib=DEFAULT_CALIB, retracting=False):
    """Bending angle [deg] after injecting ``volume`` mL of ``medium``."""
    if volume < 0:
        raise ValueError(f"negative volume {volume!r} mL")
    vol, ang = calib.curve(medium, retracting)
    return float(np.interp(volume, vol, ang))


def volume_from_angle(theta, medium="liquid", calib=DEFAULT_CALIB):
    """Smallest injected volume [mL] reaching ``theta`` deg."""
    if not 0.0 <= theta <= FULL_ANGLE:
        raise ValueError(f"angle {theta!r} deg outside [0, 90]")
    vol, ang = calib.curve(medium)
    i = int(np.searchsorted(ang, theta, side="left"))
    if i == 0:
        return 0.0
    a0, a1 = ang[i - 1], ang[i]
    return float(vol[i - 1] + (theta - a0) / (a1 - a0) * (vol[i] - vol[i - 1]))


def track_schedule(current, commanded, dt, calib=DEFAULT_CALIB):
    """Advance the opening angle by ``dt`` toward ``commanded`` (first-order lag)."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    tau = calib.time_constant
    if tau == 0.0:
        return commanded
    return commanded + (current - commanded) * math.exp(-dt / tau)


def load_volume_curve(path):
    """Read a ``volume_ml,angle_deg`` calibration CSV."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        for c in ("volume_ml", "angle_deg"):
            if c not in cols:
                raise ValueError(f"{path}: missing column {c}")
        rows = [(float(r["volume_ml"]), float(r["angle_deg"])) for r in reader]
    if not rows:
        raise ValueError(f"{path}: empty calibration file")
    vol, ang = zip(*rows)
    return np.array(vol), np.array(ang)
