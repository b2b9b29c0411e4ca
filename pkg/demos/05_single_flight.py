"""
One flight from water exit to splashdown
========================================

Launch at 10 m/s and 15 deg with the fins opened at once, then look at the
events and the headline numbers. The trajectory goes to a CSV next to a
JSON summary, the same files the command line writes.
"""

import math
import tempfile

from aquafin import Scenario, WingCommand, launch_state, simulate
from aquafin.output import write_trajectory

sc = Scenario(initial=launch_state(10.0, math.radians(15.0)),
              schedule=(WingCommand(math.radians(90.0)),))
traj = simulate(sc, sample_every=10)

for e in traj.events:
    print(f"{e.time:7.4f} s  {e.kind:16s} altitude {e.state.altitude:+.3f} m  {e.detail}")

s = traj.summary
print(f"\nglide distance {s.glide_distance:.3f} m, peak {s.max_altitude:.3f} m, "
      f"airborne {s.flight_time:.3f} s, after apogee {s.post_apogee_distance:.3f} m")

alpha = traj.column("alpha")
print(f"angle of attack drifts from {math.degrees(alpha[0]):.1f} to {math.degrees(alpha[-1]):.1f} deg")

with tempfile.TemporaryDirectory() as d:
    for p in write_trajectory(traj, d):
        print("wrote", p.name, p.stat().st_size, "bytes")
