"""
Opening the fins with a soft actuator
=====================================

Pressure maps to fin angle linearly until the fin is fully open. Water
opens the fin with less volume than air because it does not compress.
"""

from aquafin.actuator import (angle_from_pressure, angle_from_volume, pressure_from_angle,
                              track_schedule, volume_from_angle)

for p in (0, 25, 50, 75, 100):
    print(f"{p:3d} kPa -> {angle_from_pressure(p):5.1f} deg")
print("pressure for 60 deg:", pressure_from_angle(60.0), "kPa")

for theta in (30, 60, 90):
    print(f"{theta} deg needs {volume_from_angle(theta, 'liquid'):.2f} mL water "
          f"or {volume_from_angle(theta, 'gas'):.2f} mL air")
print("1.5 mL of water opens", angle_from_volume(1.5, "liquid"), "deg")

# commanded 90 deg from folded, followed with the default lag
k, dt = 0.0, 0.05
for i in range(1, 9):
    k = track_schedule(k, 90.0, dt)
    print(f"t={i * dt:.2f} s  k={k:5.1f} deg")
