"""
Leaving the water
=================

The hull is a cylinder. How much of it is wet decides buoyancy, water drag
and how strongly air loads act, so it is worth looking at on its own.
"""

import numpy as np

from aquafin import Environment, RobotParams, launch_state
from aquafin.hydro import (HydroCoeffs, buoyancy_force_moment, submerged_fraction)

params, env = RobotParams(), Environment()
print(f"hull volume {params.volume * 1e6:.1f} mL, weight {params.mass * env.g:.3f} N")

# ride the CG up through the surface along a 15 deg path
s = launch_state(10.0, np.radians(15.0))
for z in (0.10, 0.05, 0.02, 0.0, -0.02, -0.05, -0.10):
    st = s.replace(position=np.array([0.0, 0.0, z]))
    f = submerged_fraction(st, params)
    B, M = buoyancy_force_moment(st, params, env)
    print(f"CG altitude {-z:+.2f} m  wet fraction {f:.3f}  buoyancy {np.linalg.norm(B):.3f} N  "
          f"pitch moment {M[1]:+.4f} N m")

print("\ndefault water-drag coefficients:", HydroCoeffs())
