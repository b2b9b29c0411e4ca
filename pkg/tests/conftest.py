import math

import numpy as np
import pytest

from aquafin import Environment, RobotParams, Scenario, WingCommand, launch_state
from aquafin.model import BodyState

# lines reported by the acceptance suite, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def vacuum_scenario(initial, **kw):
    return Scenario(initial=initial, env=Environment(rho_air=0.0), **kw)


def airborne_state(speed=10.0, gamma_deg=0.0, altitude=20.0, **kw):
    g = math.radians(gamma_deg)
    return BodyState(position=(0.0, 0.0, -altitude), velocity=(speed, 0.0, 0.0),
                     euler=(0.0, g, 0.0), **kw)


def open_wings():
    return (WingCommand(math.pi / 2),)
