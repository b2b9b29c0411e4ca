"""Integrator, events and whole-run properties."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from aquafin import (AeroTable, Environment, RobotParams, Scenario, SimulationError, WingCommand,
                     derivatives, launch_state, simulate, step)
from aquafin.frames import rot_body_to_ground
from aquafin.hydro import Phase
from aquafin.model import BodyState
from aquafin.simulator import Sample, Trajectory, loads, summarize

from conftest import airborne_state, open_wings, vacuum_scenario

G = 9.81


def test_vacuum_derivatives_are_gravity():
    s = airborne_state(10.0, 20.0)
    d = derivatives(s, vacuum_scenario(s))
    R = rot_body_to_ground(s.euler)
    assert np.allclose(d[3:6], R @ [0, 0, G], atol=1e-15)
    assert not d[9:12].any()


def test_derivatives_match_hand_assembly(rng):
    sc = Scenario(schedule=open_wings())
    for _ in range(20):
        s = BodyState(position=(0, 0, -rng.uniform(0.5, 3)), velocity=rng.normal([9, 0, 0.5], 1.0),
                      euler=rng.uniform(-0.6, 0.6, 3), omega=rng.normal(0, 0.5, 3),
                      wing_angle=rng.uniform(0, math.pi / 2))
        ld = loads(s, sc)
        I = sc.params.inertia
        W, V = s.omega, s.velocity
        wdot = np.linalg.solve(I, ld.moment - np.cross(W, I @ W))
        vdot = ld.force / sc.params.mass - np.cross(W, V)
        phi, th, _ = s.euler
        p, q, r = W
        edot = [p + (q * math.sin(phi) + r * math.cos(phi)) * math.tan(th),
                q * math.cos(phi) - r * math.sin(phi),
                (q * math.sin(phi) + r * math.cos(phi)) / math.cos(th)]
        xdot = rot_body_to_ground(s.euler).T @ V
        want = np.concatenate([xdot, vdot, edot, wdot])
        assert np.allclose(derivatives(s, sc), want, rtol=1e-12, atol=1e-12)


def test_step_fixed_point():
    p = RobotParams(mass=1000 * RobotParams().volume, buoyancy_arm=0.0)
    s = BodyState(position=(0, 0, 1.0))
    out = step(s, Scenario(initial=s, params=p), 1e-3)
    assert np.array_equal(out.as_vector(), s.as_vector()) and out.time == 1e-3


def test_vacuum_parabola():
    s0 = airborne_state(10.0, 30.0, altitude=30.0)
    tr = simulate(vacuum_scenario(s0, max_time=2.0))
    t = tr.column("t")
    u0, w0 = 10 * math.cos(math.radians(30)), 10 * math.sin(math.radians(30))
    assert np.abs(tr.column("x") - u0 * t).max() < 1e-8
    assert np.abs(tr.column("z") - (-30 - w0 * t + 0.5 * G * t * t)).max() < 1e-8
    assert tr.status == "unterminated"


def _torque_free(dt, T=0.5):
    s = airborne_state(10.0, 10.0, omega=(1.5, 0.8, -0.6))
    sc = vacuum_scenario(s)
    for _ in range(int(round(T / dt))):
        s = step(s, sc, dt)
    return s.as_vector()


def test_rk4_convergence_order():
    a, b, c = _torque_free(0.02), _torque_free(0.01), _torque_free(0.005)
    ratio = np.linalg.norm(a - b) / np.linalg.norm(b - c)
    assert math.log2(ratio) >= 3.8
    assert 12 < ratio < 20


def test_free_fall_time():
    s0 = BodyState(position=(0, 0, -1.0))
    tr = simulate(vacuum_scenario(s0))
    contact = tr.events_of("surface_contact")[0]
    assert abs(contact.time - math.sqrt(2 / G)) < 1e-4
    assert abs(contact.time - 0.4515) < 1e-4


def test_folded_glide_matches_point_mass_drag_oracle():
    cd, s2 = 0.5, 0.002
    table = AeroTable.from_degrees([-90, 90], [0, 0], [cd, cd], [0, 0])
    # a hull small enough that the partly wetted phases last microseconds
    params = RobotParams(pelvic_fin_area=s2, body_radius=1e-5, body_length=1e-4,
                         cg_from_head=5e-5)
    env = Environment(rho_water=1e-9)
    gam = math.radians(15)
    sc = Scenario(initial=launch_state(10.0, gam), params=params, env=env, table=table,
                  schedule=(WingCommand(0.0),))
    summ = simulate(sc).summary
    c = 0.5 * 1.225 * s2 * cd / params.mass

    def rhs(t, y):
        x, h, vx, vh = y
        v = math.hypot(vx, vh)
        return [vx, vh, -c * v * vx, -G - c * v * vh]

    hit = lambda t, y: y[1]
    hit.terminal, hit.direction = True, -1
    sol = solve_ivp(rhs, (0, 5), [0, 0, 10 * math.cos(gam), 10 * math.sin(gam)], events=hit,
                    rtol=1e-12, atol=1e-12, first_step=1e-6)
    x_ref = sol.y_events[0][0][0]
    # the first RK4 stage still sees the half-wet hull (air loads halved),
    # an O(dt) effect of about 3e-6 relative at dt = 1 ms
    assert abs(summ.glide_distance - x_ref) < 1e-5 * x_ref


def test_ground_effect_inactive_above_cutoff():
    s0 = airborne_state(10.0, 0.0, altitude=5.0)
    base = Scenario(initial=s0, schedule=open_wings(), max_time=0.5)
    on = base.replace(env=Environment(ground_effect_enabled=True))
    a, b = simulate(base), simulate(on)
    for name in ("x", "z", "u", "w", "theta", "q"):
        assert np.array_equal(a.column(name), b.column(name))


def test_vacuum_energy_conserved():
    s0 = airborne_state(10.0, 30.0, altitude=200.0, omega=(1.0, 0.02, 0.05))
    sc = vacuum_scenario(s0, max_time=5.0)
    tr = simulate(sc, sample_every=100)
    I, m = sc.params.inertia, sc.params.mass

    def energy(s):
        return (0.5 * m * s.velocity @ s.velocity + m * G * s.altitude
                + 0.5 * s.omega @ I @ s.omega)

    e = np.array([energy(smp.state) for smp in tr.samples])
    assert np.abs(e - e[0]).max() < 1e-6 * abs(e[0])


@pytest.fixture(scope="module")
def default_run():
    return simulate(Scenario(schedule=open_wings()))


def test_translational_energy_decreases_in_air(default_run):
    m = 0.353
    e = [0.5 * m * s.state.velocity @ s.state.velocity + m * G * s.state.altitude
         for s in default_run.samples if s.phase is Phase.AIRBORNE]
    assert len(e) > 100
    assert np.all(np.diff(e) <= 1e-9 * abs(e[0]))


def test_phase_matches_fraction(default_run):
    for s in default_run.samples:
        assert s.phase is Phase.from_fraction(s.loads.fraction)
    phases = {s.phase for s in default_run.samples}
    assert Phase.TRANSITION in phases and Phase.AIRBORNE in phases


def test_event_order_and_times(default_run):
    kinds = [e.kind for e in default_run.events]
    assert kinds.index("surface_exit") < kinds.index("apogee") < kinds.index("surface_contact")
    t = default_run.column("t")
    assert np.all(np.diff(t) > 0)
    contact = default_run.events_of("surface_contact")[0]
    assert abs(contact.state.position[2]) < 1e-7


def test_longitudinal_symmetry(default_run):
    for name in ("y", "v", "p", "r", "phi", "psi"):
        assert np.abs(default_run.column(name)).max() < 1e-9


def test_determinism(default_run):
    again = simulate(Scenario(schedule=open_wings()))
    assert np.array_equal(again.column("x"), default_run.column("x"))
    assert again.summary == default_run.summary


def test_step_size_adequacy(default_run):
    fine = simulate(Scenario(schedule=open_wings(), dt=5e-4)).summary.glide_distance
    assert abs(fine - default_run.summary.glide_distance) < 1e-3 * fine


def test_time_trigger_lands_on_grid():
    sc = Scenario(schedule=(WingCommand(0.0), WingCommand(math.pi / 2, time=0.1)))
    tr = simulate(sc)
    ev = [e for e in tr.events if e.kind == "wing_command"]
    assert ev[0].time == 0.0 and abs(ev[1].time - 0.1) < 1e-12
    k = tr.column("k")
    t = tr.column("t")
    assert np.all(k[t <= 0.1 + 1e-12] == 0.0)
    after = k[(t > 0.25) & (t < 0.2501 + 1e-3)][0]
    assert math.isclose(after, math.pi / 2 * (1 - math.exp(-(0.25 - 0.1) / 0.15)), rel_tol=1e-3)


def test_apogee_fold():
    sc = Scenario(schedule=open_wings() + (WingCommand(0.0, trigger="apogee"),))
    tr = simulate(sc)
    apo = tr.events_of("apogee")[0]
    cmd = [e for e in tr.events if e.kind == "wing_command"][-1]
    assert cmd.time == apo.time and cmd.detail.startswith("apogee")
    assert tr.samples[-1].state.wing_angle < 0.3 * math.pi / 2
    vz = [rot_body_to_ground(apo.state.euler)[:, 2] @ apo.state.velocity]
    assert abs(vz[0]) < 1e-6


def test_altitude_trigger():
    sc = Scenario(initial=launch_state(10.0, math.radians(30)),
                  schedule=(WingCommand(0.0), WingCommand(math.pi / 2, "altitude", altitude=0.5,
                                                          direction="up")))
    tr = simulate(sc)
    ev = [e for e in tr.events if e.kind == "wing_command"][1]
    assert abs(ev.state.altitude - 0.5) < 1e-6


def test_wing_can_start_folded_and_lag():
    s0 = launch_state(10.0, math.radians(15), wing_angle=0.0)
    tr = simulate(Scenario(initial=s0, schedule=open_wings(), wing_starts_commanded=False))
    k = tr.column("k")
    assert k[0] == 0.0 and 0 < k[50] < math.pi / 2


def test_unterminated_runs_are_flagged():
    tr = simulate(Scenario(schedule=open_wings(), max_time=0.1))
    assert tr.status == "unterminated" and not tr.summary.valid
    tr = simulate(Scenario(schedule=open_wings(), max_distance=1.0))
    assert tr.status == "unterminated"


def test_gimbal_lock_aborts():
    sc = Scenario(initial=launch_state(10.0, math.radians(89.97)))
    with pytest.raises(SimulationError) as info:
        simulate(sc)
    assert info.value.state is not None


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(dt=0.0)
    with pytest.raises(ValueError):
        Scenario(schedule=(WingCommand(0.1, time=0.5), WingCommand(0.2, time=0.1)))
    with pytest.raises(ValueError):
        launch_state(10.0, math.radians(95))


def test_summarize_synthetic():
    one = Trajectory([Sample(BodyState(), None)], [])
    s = summarize(one)
    assert s.glide_distance == 0.0 and s.post_apogee_distance == 0.0
    ts = np.linspace(-1, 1, 201)
    samples = [Sample(BodyState(position=(t, 0, -(2 - 2 * t * t))), None) for t in ts]
    assert summarize(Trajectory(samples, [])).max_altitude == 2.0
