"""
From balance readings to a coefficient table
============================================

A balance reads forces along the model's own axes. Rotating them through
the angle of attack gives lift and drag, and dividing by dynamic pressure
and area gives coefficients the simulator can load directly.
"""

import csv
import math
import tempfile
from pathlib import Path

from aquafin import Scenario, WingCommand, simulate
from aquafin.aero import AeroTable, default_table
from aquafin.experiments import reduce_coeffs

area, speed, rho = 0.0454, 8.0, 1.225
q = 0.5 * rho * speed ** 2
truth = default_table()

with tempfile.TemporaryDirectory() as d:
    meas, coeffs = Path(d) / "balance.csv", Path(d) / "coeffs.csv"
    # fake a run of the tunnel from the default table
    with open(meas, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha_deg", "Fz", "Fx", "M"])
        for a in range(-20, 31, 5):
            cl, cd, cm = truth.coeffs(math.radians(a))
            L, D = q * area * cl, q * area * cd
            c, s = math.cos(math.radians(a)), math.sin(math.radians(a))
            w.writerow([a, L * c + D * s, L * s - D * c, q * area * truth.chord * cm])

    reduce_coeffs(meas, coeffs, area, speed, rho, chord=truth.chord)
    print(coeffs.read_text())

    table = AeroTable.from_csv(coeffs, chord=truth.chord)
    fins = (WingCommand(math.radians(90.0)),)
    a = simulate(Scenario(schedule=fins)).summary.glide_distance
    b = simulate(Scenario(schedule=fins, table=table)).summary.glide_distance
    print(f"glide with the default table {a:.3f} m, with the reduced one {b:.3f} m")
