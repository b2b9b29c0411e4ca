"""
The four shipped studies
========================

Discharge angle, fin opening, folding at apogee and ground effect. Each is
a preset so it can also be run as ``aquafin preset NAME --out DIR``.
"""

from aquafin.experiments import PRESETS, run_preset

for name in PRESETS:
    res = run_preset(name)
    print(f"== {name}: {res.report['description']}")
    for line in res.lines:
        print("  ", line)
