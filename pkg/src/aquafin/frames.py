"""Reference frames and kinematics.

Conventions: the ground frame is NED-like (x forward, y right, z down) with
the water surface at z = 0, so altitude is -z. The body frame has x out of
the nose, y to the right wing and z down through the belly. Euler angles are
the aerospace Z-Y-X sequence (yaw psi, pitch theta, roll phi).
"""

import math

import numpy as np

GIMBAL_GUARD = 1e-3  # rad
MIN_AIRSPEED = 1e-6  # m/s


class GimbalLockError(ArithmeticError):
    """Pitch is within the gimbal guard of +/-90 degrees."""

    def __init__(self, euler, time=None):
        self.euler = tuple(float(a) for a in euler)
        self.time = time
        where = "" if time is None else f" at t={time:.6f} s"
        super().__init__(
            f"Euler-rate singularity{where}: pitch {math.degrees(self.euler[1]):.4f} deg "
            f"within {GIMBAL_GUARD} rad of +/-90 deg (euler={self.euler})"
        )


class AirflowUndefinedError(ValueError):
    """Airflow angles are undefined because the relative speed is ~0."""


def cross3(a, b):
    """Cross product of two 3-vectors (np.cross is slow for single vectors)."""
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def _check_finite(*values):
    for v in values:
        if not math.isfinite(float(np.sum(v))):
            if not np.all(np.isfinite(v)):
                raise ValueError(f"non-finite input: {v!r}")


def wrap_angle(a):
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(a, 2.0 * math.pi)
    return math.pi if w == -math.pi else w


def normalize_euler(euler):
    """Bring (phi, theta, psi) into the canonical range.

    phi and psi land in (-pi, pi] and theta in [-pi/2, pi/2]. A pitch past
    the vertical is folded back by flipping roll and yaw by pi, which
    describes the same attitude.
    """
    phi, theta, psi = (float(a) for a in euler)
    theta = wrap_angle(theta)
    if theta > math.pi / 2:
        theta = math.pi - theta
        phi += math.pi
        psi += math.pi
    elif theta < -math.pi / 2:
        theta = -math.pi - theta
        phi += math.pi
        psi += math.pi
    return np.array([wrap_angle(phi), theta, wrap_angle(psi)])


def rot_body_to_ground(euler):
    """Direction-cosine matrix relating the ground and body frames.

    ``R @ v_ground`` gives body-frame components and ``R.T @ v_body`` gives
    ground-frame components.
    """
    _check_finite(euler)
    phi, theta, psi = euler
    cph, sph = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cps, sps = math.cos(psi), math.sin(psi)
    return np.array([
        [cth * cps, cth * sps, -sth],
        [sth * cps * sph - sps * cph, sth * sps * sph + cps * cph, cth * sph],
        [sth * cps * cph + sps * sph, sth * sps * cph - cps * sph, cth * cph],
    ])


def rot_wind_to_body(alpha, beta):
    """Matrix taking wind-frame components to body-frame components.

    The wind x-axis is along the relative velocity, so
    ``rot_wind_to_body(a, b) @ [V, 0, 0]`` is the body velocity.
    """
    _check_finite(alpha, beta)
    if abs(alpha) >= math.pi / 2 or abs(beta) >= math.pi / 2:
        raise ValueError(f"airflow angles out of range: alpha={alpha}, beta={beta}")
    return _wind_to_body(alpha, beta)


def _wind_to_body(alpha, beta):
    # unchecked; the force models call this for any attitude
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    return np.array([
        [ca * cb, -ca * sb, -sa],
        [sb, cb, 0.0],
        [sa * cb, -sa * sb, ca],
    ])


def euler_rates(euler, omega, time=None):
    """Euler angle rates (phi_dot, theta_dot, psi_dot) from body rates (p, q, r)."""
    phi, theta, _ = euler
    if abs(theta) >= math.pi / 2 - GIMBAL_GUARD:
        raise GimbalLockError(euler, time)
    p, q, r = omega
    cph, sph = math.cos(phi), math.sin(phi)
    cth = math.cos(theta)
    qr = q * sph + r * cph
    return np.array([
        p + qr * math.tan(theta),
        q * cph - r * sph,
        qr / cth,
    ])


def airflow_angles(velocity_body):
    """Angle of attack, sideslip and speed of a body-frame relative velocity.

    Raises AirflowUndefinedError below MIN_AIRSPEED; callers treat the
    aerodynamic load as zero in that case.
    """
    u, v, w = (float(c) for c in velocity_body)
    speed = math.sqrt(u * u + v * v + w * w)
    if not math.isfinite(speed):
        raise ValueError(f"non-finite velocity: {velocity_body!r}")
    if speed < MIN_AIRSPEED:
        raise AirflowUndefinedError(f"undefined airflow angles at speed {speed:.3g} m/s")
    alpha = math.atan2(w, u)
    beta = math.asin(max(-1.0, min(1.0, v / speed)))
    return alpha, beta, speed


def velocity_from_airflow(alpha, beta, speed):
    """Inverse of :func:`airflow_angles`."""
    return speed * np.array([
        math.cos(alpha) * math.cos(beta),
        math.sin(beta),
        math.sin(alpha) * math.cos(beta),
    ])
