"""Fixed-step RK4 integration with event detection.

A run starts from ``Scenario.initial`` and integrates the rigid-body
equations on a uniform grid of step ``dt``. Sign changes of the event
functions inside a step are located by bisection on a partial RK4 step, the
state is advanced exactly to the event, its effect is applied (a wing
command or termination) and the rest of the step is completed, so samples
stay on the grid.
"""

from dataclasses import dataclass, field
import math
from typing import List, Optional

import numpy as np

from .actuator import ActuatorCalib, track_schedule
from .aero import AeroTable, GroundEffectModel, PelvicFin, WingConfig, default_table
from .frames import GimbalLockError, cross3, euler_rates, rot_body_to_ground
from .hydro import HydroCoeffs, LoadBreakdown, Phase, ThrustModel, exit_totals
from .model import BodyState, Environment, RobotParams

EVENT_TOL = 1e-9  # s


class SimulationError(RuntimeError):
    """Integration aborted; ``state`` is the last good state."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class WingCommand:
    """Command the wing to ``angle`` [rad] when the trigger fires.

    ``trigger`` is ``"time"`` (at ``time``), ``"apogee"`` or ``"altitude"``
    (CG altitude crosses ``altitude`` moving ``direction``: ``"up"``,
    ``"down"`` or ``"either"``).
    """

    angle: float
    trigger: str = "time"
    time: float = 0.0
    altitude: float = 0.0
    direction: str = "either"

    def __post_init__(self):
        if self.trigger not in ("time", "apogee", "altitude"):
            raise ValueError(f"unknown wing trigger {self.trigger!r}")
        if self.direction not in ("up", "down", "either"):
            raise ValueError(f"unknown crossing direction {self.direction!r}")
        if not 0.0 <= self.angle <= math.pi / 2 + 1e-12:
            raise ValueError(f"commanded opening angle {self.angle!r} rad outside [0, pi/2]")


def launch_state(speed, discharge_angle, position=(0.0, 0.0, 0.0), wing_angle=0.0):
    """Body aligned with a velocity of ``speed`` inclined ``discharge_angle`` rad upward."""
    if not 0.0 < discharge_angle < math.pi / 2:
        raise ValueError("discharge angle must lie in (0, 90) deg")
    return BodyState(position=position, velocity=(speed, 0.0, 0.0),
                     euler=(0.0, discharge_angle, 0.0), wing_angle=wing_angle)


@dataclass(frozen=True)
class Scenario:
    """Everything needed for one run.

    With ``wing_starts_commanded`` the wing begins at the angle of any
    command due at the start time instead of lagging toward it from
    ``initial.wing_angle``.
    """

    initial: BodyState = field(default_factory=lambda: launch_state(10.0, math.radians(15.0)))
    params: RobotParams = field(default_factory=RobotParams)
    env: Environment = field(default_factory=Environment)
    table: AeroTable = field(default_factory=default_table)
    ground_effect: GroundEffectModel = field(default_factory=GroundEffectModel)
    hydro: HydroCoeffs = field(default_factory=HydroCoeffs)
    thrust: ThrustModel = field(default_factory=ThrustModel)
    actuator: ActuatorCalib = field(default_factory=ActuatorCalib)
    schedule: tuple = ()
    pelvic_angle: float = 0.0
    wing_starts_commanded: bool = True
    max_time: float = 10.0
    max_distance: float = math.inf
    dt: float = 1e-3
    name: str = ""

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if not self.max_time > 0:
            raise ValueError("max_time must be > 0")
        object.__setattr__(self, "schedule", tuple(self.schedule))
        times = [c.time for c in self.schedule if c.trigger == "time"]
        if times != sorted(times):
            raise ValueError("time-triggered wing commands must be in time order")

    def wing(self, k):
        return WingConfig(k, self.params.wing_arm_length, self.params.folded_width)

    @property
    def pelvic(self):
        return PelvicFin(self.params.pelvic_fin_area, self.params.pelvic_fin_mean_width,
                         self.pelvic_angle, 0.0)

    def replace(self, **changes):
        from dataclasses import replace
        return replace(self, **changes)


def loads(state, scenario):
    """Full load breakdown at ``state``."""
    return exit_totals(state, scenario.params, scenario.env, scenario.wing(state.wing_angle),
                       scenario.table, scenario.ground_effect, scenario.hydro,
                       scenario.thrust, scenario.pelvic)


def _rates(state, F, M, params):
    V, W = state.velocity, state.omega
    I = params.inertia
    vdot = F / params.mass - cross3(W, V)
    wdot = params.inertia_inv @ (M - cross3(W, I @ W))
    edot = euler_rates(state.euler, W, state.time)
    xdot = rot_body_to_ground(state.euler).T @ V
    return np.concatenate([xdot, vdot, edot, wdot])


def derivatives(state, scenario):
    """Time derivative of the 12-vector (x y z u v w phi theta psi p q r)."""
    ld = loads(state, scenario)
    F, M = ld.force, ld.moment
    if not (np.all(np.isfinite(F)) and np.all(np.isfinite(M))):
        raise SimulationError(f"non-finite load at t={state.time:.6f} s", state)
    return _rates(state, F, M, scenario.params)


def _at(y, t, k):
    return BodyState(y[0:3], y[3:6], y[6:9], y[9:12], t, k)


def _raw(y, t, k):
    # skips normalisation for RK4 stages
    s = object.__new__(BodyState)
    object.__setattr__(s, "position", y[0:3])
    object.__setattr__(s, "velocity", y[3:6])
    object.__setattr__(s, "euler", y[6:9])
    object.__setattr__(s, "omega", y[9:12])
    object.__setattr__(s, "time", t)
    object.__setattr__(s, "wing_angle", k)
    return s


def step(state, scenario, dt, command=None):
    """One classical RK4 step of length ``dt``.

    The wing angle is frozen during the step and then moved toward
    ``command`` through the actuator lag (held if ``command`` is None).
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    t, k = state.time, state.wing_angle
    y = state.as_vector()

    def f(yy, tt):
        return derivatives(_raw(yy, tt, k), scenario)

    try:
        k1 = f(y, t)
        k2 = f(y + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = f(y + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = f(y + dt * k3, t + dt)
    except GimbalLockError as exc:
        raise SimulationError(str(exc), state) from exc
    y1 = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y1)):
        raise SimulationError(f"integration blew up at t={t:.6f} s", state)
    k_next = k if command is None else track_schedule(k, command, dt, scenario.actuator)
    return _at(y1, t + dt, k_next)


# -- trajectory records -----------------------------------------------------------

@dataclass(frozen=True)
class Sample:
    state: BodyState
    loads: LoadBreakdown

    @property
    def time(self):
        return self.state.time

    @property
    def phase(self):
        return self.loads.phase

    @property
    def alpha(self):
        return self.loads.aero.alpha

    @property
    def speed(self):
        return float(np.linalg.norm(self.state.velocity))


@dataclass(frozen=True)
class Event:
    kind: str
    time: float
    state: BodyState
    detail: str = ""


@dataclass(frozen=True)
class Summary:
    glide_distance: float
    max_altitude: float
    flight_time: float
    apogee_time: Optional[float]
    post_apogee_distance: float
    exit_time: Optional[float]
    valid: bool
    status: str

    def as_dict(self):
        from dataclasses import asdict
        return asdict(self)


@dataclass
class Trajectory:
    samples: List[Sample]
    events: List[Event]
    status: str = "terminated"
    name: str = ""

    @property
    def summary(self):
        return summarize(self)

    def events_of(self, kind):
        return [e for e in self.events if e.kind == kind]

    def column(self, name):
        """Array of a per-sample quantity, e.g. ``"t"``, ``"z"``, ``"theta"``."""
        getters = {
            "t": lambda s: s.time,
            "x": lambda s: s.state.position[0], "y": lambda s: s.state.position[1],
            "z": lambda s: s.state.position[2],
            "u": lambda s: s.state.velocity[0], "v": lambda s: s.state.velocity[1],
            "w": lambda s: s.state.velocity[2],
            "phi": lambda s: s.state.euler[0], "theta": lambda s: s.state.euler[1],
            "psi": lambda s: s.state.euler[2],
            "p": lambda s: s.state.omega[0], "q": lambda s: s.state.omega[1],
            "r": lambda s: s.state.omega[2],
            "alpha": lambda s: s.alpha, "speed": lambda s: s.speed,
            "k": lambda s: s.state.wing_angle, "fraction": lambda s: s.loads.fraction,
            "altitude": lambda s: s.state.altitude,
        }
        return np.array([getters[name](s) for s in self.samples])


def _horizontal(a, b):
    return float(math.hypot(b.position[0] - a.position[0], b.position[1] - a.position[1]))


def summarize(traj):
    """Distances and heights from a trajectory's samples and events."""
    if not traj.samples:
        raise ValueError("empty trajectory")
    first, last = traj.samples[0].state, traj.samples[-1].state
    exits = traj.events_of("surface_exit")
    apogees = traj.events_of("apogee")
    contacts = traj.events_of("surface_contact")
    start = exits[0].state if exits else first
    end = contacts[0].state if contacts else last
    alts = [s.state.altitude for s in traj.samples] + [e.state.altitude for e in traj.events]
    apo = apogees[0].state if apogees else None
    valid = traj.status == "terminated"
    return Summary(
        glide_distance=_horizontal(start, end) if exits else 0.0,
        max_altitude=max(alts),
        flight_time=(end.time - start.time) if exits else 0.0,
        apogee_time=apo.time if apo is not None else None,
        post_apogee_distance=_horizontal(apo, end) if apo is not None else 0.0,
        exit_time=start.time if exits else None,
        valid=valid,
        status=traj.status,
    )


# -- main loop --------------------------------------------------------------------

def _zdot(state):
    return float(rot_body_to_ground(state.euler)[:, 2] @ state.velocity)


class _Run:
    def __init__(self, scenario):
        self.sc = scenario
        self.pending = list(scenario.schedule)
        self.command = None
        self.exited = False
        self.apogee_seen = False
        self.events = []

    # each detector: (name, before(state) -> bool, after(state) -> bool)
    def detectors(self, state):
        out = []
        if self.exited:
            out.append(("surface_contact", lambda s: s.position[2] < 0, lambda s: s.position[2] >= 0))
            if not self.apogee_seen:
                out.append(("apogee", lambda s: _zdot(s) < 0, lambda s: _zdot(s) >= 0))
        else:
            out.append(("surface_exit", lambda s: s.position[2] > 0, lambda s: s.position[2] <= 0))
        for cmd in self.pending:
            if cmd.trigger == "altitude":
                h = cmd.altitude
                up = (lambda s, h=h: s.altitude < h, lambda s, h=h: s.altitude >= h)
                down = (lambda s, h=h: s.altitude > h, lambda s, h=h: s.altitude <= h)
                if cmd.direction == "up" or (cmd.direction == "either" and state.altitude < h):
                    out.append((cmd, *up))
                else:
                    out.append((cmd, *down))
        return out

    def fire(self, what, state):
        if isinstance(what, WingCommand):
            self.pending.remove(what)
            self.command = what.angle
            self.events.append(Event("wing_command", state.time, state,
                                     f"{what.trigger}:{math.degrees(what.angle):.6g}deg"))
            return False
        self.events.append(Event(what, state.time, state))
        if what == "surface_exit":
            self.exited = True
        elif what == "apogee":
            self.apogee_seen = True
            for cmd in [c for c in self.pending if c.trigger == "apogee"]:
                self.fire(cmd, state)
        elif what == "surface_contact":
            return True
        return False

    def fire_due_time_commands(self, state):
        for cmd in [c for c in self.pending if c.trigger == "time" and c.time <= state.time + 1e-12]:
            self.fire(cmd, state)

    def advance(self, state, h):
        """Advance by ``h`` handling events; returns (state, terminated)."""
        sc = self.sc
        remaining = h
        while remaining > 1e-15:
            # time-triggered commands due inside this interval
            t_next = min((c.time for c in self.pending if c.trigger == "time"), default=math.inf)
            span = remaining
            if t_next < state.time + remaining:
                span = max(t_next - state.time, 0.0)
            if span <= 1e-15:
                self.fire_due_time_commands(state)
                continue
            trial = step(state, sc, span, self.command)
            hits = []
            for name, before, after in self.detectors(state):
                if before(state) and after(trial):
                    hits.append((self._locate(state, span, after), name))
            if not hits:
                state = trial
                remaining -= span
                self.fire_due_time_commands(state)
                continue
            hits.sort(key=lambda x: x[0])
            tau = hits[0][0]
            state = step(state, sc, tau, self.command) if tau < span else trial
            remaining -= tau
            done = False
            for t_hit, name in hits:
                if t_hit - tau <= EVENT_TOL:
                    done = self.fire(name, state) or done
            if done:
                return state, True
            self.fire_due_time_commands(state)
        return state, False

    def _locate(self, state, span, after):
        lo, hi = 0.0, span
        while hi - lo > EVENT_TOL:
            mid = 0.5 * (lo + hi)
            if after(step(state, self.sc, mid, self.command)):
                hi = mid
            else:
                lo = mid
        return hi


def simulate(scenario, sample_every=1):
    """Integrate ``scenario`` until surface contact or a termination limit."""
    sc = scenario
    run = _Run(sc)
    state = sc.initial
    run.fire_due_time_commands(state)
    if run.command is not None and sc.wing_starts_commanded:
        state = state.replace(wing_angle=run.command)
    if state.position[2] <= 0:
        run.fire("surface_exit", state)
    samples = [Sample(state, loads(state, sc))]
    status = "terminated"
    n = 0
    origin = sc.initial.position
    while True:
        if state.time >= sc.max_time - 1e-12:
            status = "unterminated"
            run.events.append(Event("max_time", state.time, state))
            break
        h = min(sc.dt, sc.max_time - state.time)
        state, done = run.advance(state, h)
        n += 1
        if done or n % sample_every == 0:
            samples.append(Sample(state, loads(state, sc)))
        if done:
            break
        if math.hypot(state.position[0] - origin[0], state.position[1] - origin[1]) >= sc.max_distance:
            status = "unterminated"
            run.events.append(Event("max_distance", state.time, state))
            if n % sample_every:
                samples.append(Sample(state, loads(state, sc)))
            break
    return Trajectory(samples, run.events, status, sc.name)
