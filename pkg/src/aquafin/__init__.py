"""Water-exit and gliding dynamics of a flying-fish-like robot with collapsible wings."""

from .actuator import (ActuatorCalib, angle_from_pressure, angle_from_volume, pressure_from_angle,
                       track_schedule, volume_from_angle)
from .aero import (AeroTable, GroundEffectModel, PelvicFin, WingConfig, aero_coeffs,
                   aero_force_moment, default_table, ground_effect_factors, pelvic_fin_velocity,
                   reduce_wind_tunnel, wind_tunnel_forces, wing_area, wing_span)
from .config import ConfigError, load_scenario, scenario_from_dict
from .experiments import SweepSpec, reduce_coeffs, run_preset, run_sweep
from .frames import (GimbalLockError, airflow_angles, euler_rates, rot_body_to_ground,
                     rot_wind_to_body)
from .hydro import (HydroCoeffs, Phase, ThrustModel, buoyancy_force_moment, exit_totals,
                    hydro_force, hydro_moment, submerged_volume, thrust_force_moment)
from .model import BodyState, Environment, RobotParams
from .simulator import (Scenario, SimulationError, Trajectory, WingCommand, derivatives,
                        launch_state, simulate, step, summarize)

__version__ = "0.1.0"
