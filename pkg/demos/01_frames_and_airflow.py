"""
Frames, Euler angles and the airflow angles
===========================================

The ground frame points north-east-down with the water surface at z = 0,
so altitude is -z. Attitude is a Z-Y-X Euler triple (phi, theta, psi).
"""

import math

import numpy as np

from aquafin.frames import (GimbalLockError, airflow_angles, euler_rates, rot_body_to_ground,
                            velocity_from_airflow)

# nose 15 deg up: the matrix takes ground vectors into the body frame
euler = np.radians([0.0, 15.0, 0.0])
R = rot_body_to_ground(euler)
print("gravity seen from the body:", R @ [0, 0, 9.81])
print("nose direction on the ground:", R.T @ [1, 0, 0])

# flying level at 10 m/s with the nose up 15 deg means alpha = 15 deg
v_body = R @ [10.0, 0.0, 0.0]
alpha, beta, speed = airflow_angles(v_body)
print(f"alpha {math.degrees(alpha):.3f} deg, beta {math.degrees(beta):.3f} deg, V {speed:.3f} m/s")
print("rebuilt velocity:", velocity_from_airflow(alpha, beta, speed))

# a pure pitch rate just turns theta
print("euler rates for q = 1 rad/s:", euler_rates(euler, [0.0, 1.0, 0.0]))

# the Euler kinematics are singular at theta = +-90 deg
try:
    euler_rates([0.0, math.radians(89.99), 0.0], [0.0, 1.0, 0.0], time=0.0)
except GimbalLockError as exc:
    print("refused:", exc)
