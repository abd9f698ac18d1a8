"""Scenario files: the single configuration surface of the stack.

A scenario is a YAML document (schema_version 1) holding the arena, the
robot geometry, the gaze intent layout, the admittance gains, the input
mode, and the solver settings. Loading is strict: unknown keys and
type mismatches fail with a diagnostic naming the offending field, so a
typo in a config never silently falls back to a default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import yaml

from .admittance import AdmittanceParams
from .intent import FORCE_MODES, DEFAULT_HOLD_TIMEOUT, IntentLayout
from .kinematics import RobotGeometry
from .scripts import InputScript, WaypointGazePolicy, load_script
from .sim import GazePolicyFeed, InputFeed, ScriptFeed
from .world import Pose, Rect, WorldModel

__all__ = [
    "SCENARIO_SCHEMA_VERSION",
    "ScenarioError",
    "Scenario",
    "load_scenario",
    "scenario_from_dict",
    "default_scenario_path",
]

SCENARIO_SCHEMA_VERSION = 1

INPUT_MODES = ("waypoint_gaze", "script", "live")


class ScenarioError(ValueError):
    """Scenario file is missing, malformed, or fails validation."""


class _Section:
    """Typed, strict accessor over one mapping of the scenario document."""

    def __init__(self, data: dict, path: str):
        if not isinstance(data, dict):
            raise ScenarioError(f"{path}: expected a mapping, got {type(data).__name__}")
        self.data = data
        self.path = path
        self._seen: set[str] = set()

    def child(self, key: str) -> "_Section":
        self._seen.add(key)
        if key not in self.data:
            raise ScenarioError(f"{self.path}.{key}: missing section")
        return _Section(self.data[key], f"{self.path}.{key}")

    def number(self, key: str, default: float | None = None) -> float:
        self._seen.add(key)
        if key not in self.data:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: missing required number")
            return default
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{self.path}.{key}: expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ScenarioError(f"{self.path}.{key}: must be finite, got {value!r}")
        return value

    def string(self, key: str, default: str | None = None, choices: tuple[str, ...] | None = None) -> str:
        self._seen.add(key)
        if key not in self.data:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: missing required string")
            value = default
        else:
            value = self.data[key]
        if not isinstance(value, str):
            raise ScenarioError(f"{self.path}.{key}: expected a string, got {value!r}")
        if choices is not None and value not in choices:
            raise ScenarioError(f"{self.path}.{key}: must be one of {choices}, got {value!r}")
        return value

    def integer(self, key: str) -> int:
        self._seen.add(key)
        value = self.data.get(key)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ScenarioError(f"{self.path}.{key}: expected an integer, got {value!r}")
        return value

    def listing(self, key: str, default=None):
        self._seen.add(key)
        if key not in self.data:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: missing required list")
            return default
        value = self.data[key]
        if not isinstance(value, list):
            raise ScenarioError(f"{self.path}.{key}: expected a list, got {value!r}")
        return value

    def finish(self) -> None:
        unknown = set(self.data) - self._seen
        if unknown:
            raise ScenarioError(f"{self.path}: unknown key '{sorted(unknown)[0]}'")


def _rect(section: _Section) -> Rect:
    try:
        return Rect(
            section.number("x_min"),
            section.number("y_min"),
            section.number("x_max"),
            section.number("y_max"),
        )
    except ValueError as err:
        if isinstance(err, ScenarioError):
            raise
        raise ScenarioError(f"{section.path}: {err}") from None
    finally:
        section.finish()


@dataclass(frozen=True)
class Scenario:
    """Fully validated run configuration."""

    name: str
    world: WorldModel
    geometry: RobotGeometry
    layout: IntentLayout
    params: AdmittanceParams
    force_mode: str
    hold_timeout: float
    input_mode: str
    waypoints: tuple[tuple[float, float], ...]
    lead: float
    switch_radius: float
    script_path: Path | None
    dt: float
    t_limit: float
    gaze_period: float

    def with_damping(self, damping: float) -> "Scenario":
        return replace(self, params=self.params.with_damping(damping))

    def make_feed(self, script: InputScript | None = None) -> InputFeed:
        """Build a fresh single-use input feed for one episode."""
        if script is not None:
            return ScriptFeed(script)
        if self.input_mode == "script":
            if self.script_path is None:
                raise ScenarioError("input.mode is 'script' but no script file was given")
            return ScriptFeed(load_script(self.script_path))
        if self.input_mode == "waypoint_gaze":
            policy = WaypointGazePolicy(self.waypoints, lead=self.lead, switch_radius=self.switch_radius)
            return GazePolicyFeed(policy, period=self.gaze_period)
        raise ScenarioError(f"input mode {self.input_mode!r} has no headless feed (live mode needs the broker)")


def scenario_from_dict(data: object, *, base_dir: Path | None = None) -> Scenario:
    root = _Section(data, "scenario")
    version = root.integer("schema_version")
    if version != SCENARIO_SCHEMA_VERSION:
        raise ScenarioError(f"scenario.schema_version: unsupported version {version}")
    name = root.string("name", default="unnamed")

    world_s = root.child("world")
    bounds = _rect(world_s.child("bounds"))
    obstacles = []
    for i, entry in enumerate(world_s.listing("obstacles", default=[])):
        obstacles.append(_rect(_Section(entry, f"scenario.world.obstacles[{i}]")))
    start_s = world_s.child("start_pose")
    try:
        start = Pose(start_s.number("x"), start_s.number("y"), start_s.number("theta", default=0.0))
    except ValueError as err:
        raise ScenarioError(f"scenario.world.start_pose: {err}") from None
    start_s.finish()
    goal = _rect(world_s.child("goal_region"))
    operator_offset = world_s.number("operator_offset_m", default=0.5)
    world_s.finish()

    geo_s = root.child("geometry")
    try:
        geometry = RobotGeometry(
            wheel_radius=geo_s.number("wheel_radius_m", default=0.127),
            roller_angle=math.radians(geo_s.number("roller_angle_deg", default=45.0)),
            d1=geo_s.number("d1_m", default=0.25),
            d2=geo_s.number("d2_m", default=0.30),
            footprint_length=geo_s.number("footprint_length_m", default=0.750),
            footprint_width=geo_s.number("footprint_width_m", default=0.665),
        )
    except ValueError as err:
        raise ScenarioError(f"scenario.geometry: {err}") from None
    geo_s.finish()

    intent_s = root.child("intent")
    stiffness = intent_s.number("stiffness_n_per_m", default=10.0)
    try:
        layout = IntentLayout(
            deadzone_length=intent_s.number("deadzone_length_m", default=geometry.footprint_length),
            deadzone_width=intent_s.number("deadzone_width_m", default=geometry.footprint_width),
            region_extent=intent_s.number("region_extent_m", default=2.0),
        )
    except ValueError as err:
        raise ScenarioError(f"scenario.intent: {err}") from None
    force_mode = intent_s.string("force_mode", default="center", choices=FORCE_MODES)
    hold_timeout = intent_s.number("gaze_hold_timeout_s", default=DEFAULT_HOLD_TIMEOUT)
    intent_s.finish()
    if layout.deadzone_length < geometry.footprint_length or layout.deadzone_width < geometry.footprint_width:
        raise ScenarioError("scenario.intent: dead-zone must cover the robot footprint")

    adm_s = root.child("admittance")
    try:
        params = AdmittanceParams(
            stiffness=stiffness,
            virtual_mass=adm_s.number("virtual_mass_kg", default=10.0),
            damping=adm_s.number("damping_ns_per_m", default=20.0),
            v_max=adm_s.number("v_max_mps", default=0.5),
        )
    except ValueError as err:
        raise ScenarioError(f"scenario.admittance: {err}") from None
    adm_s.finish()

    input_s = root.child("input")
    input_mode = input_s.string("mode", default="waypoint_gaze", choices=INPUT_MODES)
    raw_waypoints = input_s.listing("waypoints", default=[])
    waypoints: list[tuple[float, float]] = []
    for i, wp in enumerate(raw_waypoints):
        if not (isinstance(wp, list) and len(wp) == 2) or any(
            isinstance(c, bool) or not isinstance(c, (int, float)) for c in wp
        ):
            raise ScenarioError(f"scenario.input.waypoints[{i}]: expected [x, y] numbers, got {wp!r}")
        if not bounds.contains(float(wp[0]), float(wp[1])):
            raise ScenarioError(f"scenario.input.waypoints[{i}]: lies outside the world bounds")
        waypoints.append((float(wp[0]), float(wp[1])))
    lead = input_s.number("lead_m", default=0.8)
    switch_radius = input_s.number("switch_radius_m", default=0.5)
    script_name = input_s.string("script", default="")
    input_s.finish()
    if input_mode == "waypoint_gaze" and not waypoints:
        raise ScenarioError("scenario.input.waypoints: waypoint_gaze mode needs at least one waypoint")
    script_path: Path | None = None
    if script_name:
        script_path = Path(script_name)
        if not script_path.is_absolute() and base_dir is not None:
            script_path = base_dir / script_path

    sim_s = root.child("sim")
    dt = sim_s.number("dt_s", default=0.01)
    t_limit = sim_s.number("t_limit_s", default=180.0)
    gaze_rate = sim_s.number("gaze_rate_hz", default=30.0)
    sim_s.finish()
    root.finish()
    if not (0.0 < dt <= 0.1):
        raise ScenarioError(f"scenario.sim.dt_s: must lie in (0, 0.1], got {dt}")
    if t_limit <= 0.0:
        raise ScenarioError(f"scenario.sim.t_limit_s: must be > 0, got {t_limit}")
    if gaze_rate <= 0.0:
        raise ScenarioError(f"scenario.sim.gaze_rate_hz: must be > 0, got {gaze_rate}")

    try:
        world = WorldModel(
            bounds=bounds,
            obstacles=tuple(obstacles),
            start_pose=start,
            goal_region=goal,
            operator_offset=operator_offset,
        )
        world.validate_start(geometry.footprint_length, geometry.footprint_width)
    except ValueError as err:
        raise ScenarioError(f"scenario.world: {err}") from None

    return Scenario(
        name=name,
        world=world,
        geometry=geometry,
        layout=layout,
        params=params,
        force_mode=force_mode,
        hold_timeout=hold_timeout,
        input_mode=input_mode,
        waypoints=tuple(waypoints),
        lead=lead,
        switch_radius=switch_radius,
        script_path=script_path,
        dt=dt,
        t_limit=t_limit,
        gaze_period=1.0 / gaze_rate,
    )


def scenario_public_dict(scenario: Scenario) -> dict:
    """Scenario summary served to operator consoles (world + display gains)."""

    def rect(r: Rect) -> dict:
        return {"x_min": r.x_min, "y_min": r.y_min, "x_max": r.x_max, "y_max": r.y_max}

    world = scenario.world
    return {
        "schema_version": SCENARIO_SCHEMA_VERSION,
        "name": scenario.name,
        "world": {
            "bounds": rect(world.bounds),
            "obstacles": [rect(o) for o in world.obstacles],
            "start_pose": {"x": world.start_pose.x, "y": world.start_pose.y, "theta": world.start_pose.theta},
            "goal_region": rect(world.goal_region),
            "operator_offset_m": world.operator_offset,
        },
        "robot": {
            "footprint_length_m": scenario.geometry.footprint_length,
            "footprint_width_m": scenario.geometry.footprint_width,
        },
        "intent": {
            "deadzone_length_m": scenario.layout.deadzone_length,
            "deadzone_width_m": scenario.layout.deadzone_width,
            "region_extent_m": scenario.layout.region_extent,
            "stiffness_n_per_m": scenario.params.stiffness,
        },
        "admittance": {
            "virtual_mass_kg": scenario.params.virtual_mass,
            "damping_ns_per_m": scenario.params.damping,
            "v_max_mps": scenario.params.v_max,
        },
    }


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"scenario file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as err:
        raise ScenarioError(f"{path}: invalid YAML: {err}") from None
    return scenario_from_dict(data, base_dir=path.parent)


def default_scenario_path() -> Path:
    """Filesystem path of the bundled default obstacle course."""
    return Path(resources.files("gaze_drive").joinpath("data/default_course.yaml"))  # type: ignore[arg-type]
