"""
Pectoral fins, the coefficient table and ground effect
======================================================
"""

import math

import numpy as np

from aquafin import Environment
from aquafin.aero import (GroundEffectModel, WingConfig, aero_force_moment, default_table,
                          ground_effect_factors, wing_area, wing_span)
from aquafin.model import BodyState

l, L = 0.170, 0.1354
for k_deg in (0, 30, 60, 90):
    k = math.radians(k_deg)
    print(f"k={k_deg:2d} deg  area {wing_area(k, l) * 1e4:6.1f} cm^2  span {wing_span(k, l, L) * 1e3:6.1f} mm")

table = default_table()
print("\n alpha    CL      CD      CM     L/D")
for a in (-10, -5, 0, 5, 10, 20):
    cl, cd, cm = table.coeffs(math.radians(a))
    print(f"{a:5d} {cl:7.3f} {cd:7.4f} {cm:7.3f} {cl / cd:6.2f}")

# loads on the open wing at 10 m/s, 5 deg incidence, high above the water
s = BodyState(position=(0, 0, -5.0), velocity=(10 * math.cos(0.0873), 0, 10 * math.sin(0.0873)))
out = aero_force_moment(s, WingConfig(), table, Environment())
print("\nlift", out.lift, "\ndrag", out.drag, "\npitch moment", out.moment[1])

# ground effect only acts below half a span
ge = GroundEffectModel()
b = wing_span(math.pi / 2, l, L)
for h in (0.02, 0.05, 0.1, 0.2, 0.3):
    print(f"h/b={h / b:.2f}  (lift, drag) factors {ground_effect_factors(ge, h, b)}")
