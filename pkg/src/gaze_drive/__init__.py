"""Hands-free teleoperation of a simulated mecanum-wheel robot.

Operator gaze (a pointer on the ground plane) is turned into a virtual
force through a dead-zone displacement law, filtered by a virtual
mass-damper admittance model into a body velocity, mapped to wheel speeds
by mecanum kinematics, and driven into a deterministic 2-D simulation,
either headless or live over a rosbridge-style JSON WebSocket protocol.
"""

from .admittance import (
    AdmittanceParams,
    AdmittanceState,
    desired_wheel_speeds,
    filter_step,
    step_response,
)
from .intent import (
    GazeSample,
    IntentLayout,
    IntentRegion,
    VirtualForce,
    classify_region,
    compute_force,
    hold_policy,
)
from .kinematics import (
    DEFAULT_GEOMETRY,
    BodyVelocity,
    RobotGeometry,
    WheelSpeeds,
    forward_kinematics,
    inverse_kinematics,
    kinematic_consistency_report,
)
from .scenario import Scenario, load_scenario, default_scenario_path
from .scripts import InputScript, WaypointGazePolicy, load_script, parse_script
from .sim import (
    EpisodeReport,
    JoystickInput,
    SimEngine,
    integrate,
    joystick_to_velocity,
    run_episode,
    trace_csv,
)
from .world import Pose, Rect, WorldModel, resolve_collision

__version__ = "0.1.0"

__all__ = [
    "AdmittanceParams",
    "AdmittanceState",
    "BodyVelocity",
    "DEFAULT_GEOMETRY",
    "EpisodeReport",
    "GazeSample",
    "InputScript",
    "IntentLayout",
    "IntentRegion",
    "JoystickInput",
    "Pose",
    "Rect",
    "RobotGeometry",
    "Scenario",
    "SimEngine",
    "VirtualForce",
    "WaypointGazePolicy",
    "WheelSpeeds",
    "WorldModel",
    "classify_region",
    "compute_force",
    "default_scenario_path",
    "desired_wheel_speeds",
    "filter_step",
    "forward_kinematics",
    "hold_policy",
    "integrate",
    "inverse_kinematics",
    "joystick_to_velocity",
    "kinematic_consistency_report",
    "load_scenario",
    "load_script",
    "parse_script",
    "resolve_collision",
    "run_episode",
    "step_response",
    "trace_csv",
]
