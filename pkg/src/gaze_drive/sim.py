"""Deterministic fixed-timestep simulation of the omnidirectional robot.

The engine advances in fixed dt ticks. Inputs (gaze samples, joystick
records, damping changes) carry timestamps on the episode clock and take
effect at the first tick boundary at or after their stamp, which makes an
episode a pure function of the scenario and the stamped input sequence.
The same engine backs headless scripted runs, the live served loop, and
session replay, so all three produce bit-identical traces for identical
stamped inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Protocol, Union

from .admittance import AdmittanceParams, AdmittanceState, filter_step
from .intent import (
    DEFAULT_HOLD_TIMEOUT,
    ZERO_FORCE,
    GazeSample,
    IntentLayout,
    VirtualForce,
    compute_force,
    hold_policy,
)
from .kinematics import BodyVelocity, RobotGeometry, WheelSpeeds, inverse_kinematics
from .scripts import GAZE_PERIOD, GazeRecord, InputScript, JoyRecord, WaypointGazePolicy
from .world import Pose, WorldModel, resolve_collision

__all__ = [
    "JoystickInput",
    "TraceSample",
    "EpisodeReport",
    "SimEngine",
    "ScriptFeed",
    "GazePolicyFeed",
    "integrate",
    "joystick_to_velocity",
    "run_episode",
    "trace_csv",
]

DEFAULT_DT = 0.01
DEFAULT_YAW_RATE_MAX = 1.0


@dataclass(frozen=True, slots=True)
class JoystickInput:
    """Normalized joystick deflections; components clamp to [-1, 1]."""

    axis_x: float = 0.0
    axis_y: float = 0.0
    axis_yaw: float = 0.0

    def __post_init__(self) -> None:
        for name in ("axis_x", "axis_y", "axis_yaw"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"invalid input: non-finite joystick axis {name}")
            object.__setattr__(self, name, min(1.0, max(-1.0, value)))


def joystick_to_velocity(j: JoystickInput, v_max: float = 0.5, w_max: float = DEFAULT_YAW_RATE_MAX) -> BodyVelocity:
    """Scale joystick deflections linearly to a commanded body velocity."""
    return BodyVelocity(j.axis_x * v_max, j.axis_y * v_max, j.axis_yaw * w_max)


def integrate(pose: Pose, v: BodyVelocity, dt: float) -> Pose:
    """Apply a body-frame twist to a world pose over dt seconds."""
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"invalid timestep: dt must be finite and > 0, got {dt!r}")
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    return Pose(
        pose.x + (v.vx * c - v.vy * s) * dt,
        pose.y + (v.vx * s + v.vy * c) * dt,
        pose.theta + v.omega * dt,
    )


class TraceSample(NamedTuple):
    t: float
    pose: Pose
    force: VirtualForce
    velocity: BodyVelocity


@dataclass(frozen=True)
class EpisodeReport:
    """Outcome of one simulated episode."""

    time_to_goal: float | None
    collision_count: int
    path_length: float
    trace: tuple[TraceSample, ...]

    @property
    def reached(self) -> bool:
        return self.time_to_goal is not None

    @property
    def final_pose(self) -> Pose:
        return self.trace[-1].pose


def trace_csv(report: EpisodeReport) -> str:
    """Render the episode trace as CSV with full float round-trip precision."""
    lines = ["t,x,y,theta,fx,fy,vx,vy"]
    for s in report.trace:
        lines.append(
            f"{s.t!r},{s.pose.x!r},{s.pose.y!r},{s.pose.theta!r},"
            f"{s.force.fx!r},{s.force.fy!r},{s.velocity.vx!r},{s.velocity.vy!r}"
        )
    return "\n".join(lines) + "\n"


class SimEngine:
    """Single-owner simulation state machine.

    The caller applies stamped inputs for the current tick time, then calls
    ``step()`` to advance one dt. Trace and metrics freeze once the goal
    region is entered; stepping past that point is allowed (live mode keeps
    the robot alive after goal) and does not alter the report.
    """

    def __init__(
        self,
        world: WorldModel,
        geom: RobotGeometry,
        params: AdmittanceParams,
        layout: IntentLayout,
        *,
        dt: float = DEFAULT_DT,
        force_mode: str = "center",
        hold_timeout: float = DEFAULT_HOLD_TIMEOUT,
        w_max: float = DEFAULT_YAW_RATE_MAX,
    ):
        if not (math.isfinite(dt) and 0.0 < dt <= 0.1):
            raise ValueError(f"invalid timestep: dt must lie in (0, 0.1], got {dt!r}")
        world.validate_start(geom.footprint_length, geom.footprint_width)
        self.world = world
        self.geom = geom
        self.params = params
        self.layout = layout
        self.dt = dt
        self.force_mode = force_mode
        self.hold_timeout = hold_timeout
        self.w_max = w_max

        self.pose = world.start_pose
        self.tick = 0
        self.collision_count = 0
        self.path_length = 0.0
        self.time_to_goal: float | None = None
        self.goal_reached = False
        self.last_velocity = BodyVelocity(0.0, 0.0, 0.0)
        self.last_force = ZERO_FORCE

        self._adm = AdmittanceState()
        self._held_force = ZERO_FORCE
        self._last_gaze_time: float | None = None
        self._joy_velocity: BodyVelocity | None = None
        self._mode = "gaze"
        self._in_contact = False
        self._trace: list[TraceSample] = [TraceSample(0.0, self.pose, ZERO_FORCE, self.last_velocity)]
        if world.in_goal(self.pose):
            self.goal_reached = True
            self.time_to_goal = 0.0

    @property
    def t(self) -> float:
        """Episode time at the current tick boundary."""
        return self.tick * self.dt

    def apply_gaze(self, sample: GazeSample) -> None:
        """Take a gaze sample into effect at the current tick.

        Invalid samples do not refresh the held force; the hold policy ages
        it out instead.
        """
        self._mode = "gaze"
        if sample.valid:
            self._held_force = compute_force(
                sample, self.pose, self.params.stiffness, self.layout, self.force_mode
            )
            self._last_gaze_time = self.t

    def apply_joy(self, joy: JoystickInput) -> None:
        self._mode = "joy"
        self._joy_velocity = joystick_to_velocity(joy, self.params.v_max, self.w_max)

    def set_damping(self, damping: float) -> None:
        """Swap the damping between steps, never mid-step."""
        self.params = self.params.with_damping(damping)

    def wheel_command(self) -> WheelSpeeds:
        return inverse_kinematics(self.last_velocity, self.geom)

    def step(self) -> TraceSample:
        if self._mode == "joy" and self._joy_velocity is not None:
            force = ZERO_FORCE
            j = self._joy_velocity
            v = BodyVelocity(
                min(self.params.v_max, max(-self.params.v_max, j.vx)),
                min(self.params.v_max, max(-self.params.v_max, j.vy)),
                min(self.w_max, max(-self.w_max, j.omega)),
            )
        else:
            if self._last_gaze_time is None:
                force = ZERO_FORCE
            else:
                force = hold_policy(self._held_force, self.t - self._last_gaze_time, self.hold_timeout)
            self._adm = filter_step(self._adm, force, self.params, self.dt)
            v = self._adm.v

        prev = self.pose
        candidate = integrate(prev, v, self.dt)
        resolved, collided = resolve_collision(
            prev, candidate, self.world, self.geom.footprint_length, self.geom.footprint_width
        )
        self.pose = resolved
        self.tick += 1
        self.last_velocity = v
        self.last_force = force
        sample = TraceSample(self.t, self.pose, force, v)

        if not self.goal_reached:
            if collided and not self._in_contact:
                self.collision_count += 1
            self.path_length += math.hypot(self.pose.x - prev.x, self.pose.y - prev.y)
            self._trace.append(sample)
            if self.world.in_goal(self.pose):
                self.goal_reached = True
                self.time_to_goal = self.t
        self._in_contact = collided
        return sample

    def report(self) -> EpisodeReport:
        return EpisodeReport(
            time_to_goal=self.time_to_goal,
            collision_count=self.collision_count,
            path_length=self.path_length,
            trace=tuple(self._trace),
        )


class InputFeed(Protocol):
    def events_until(self, t: float, pose: Pose) -> Iterable[Union[GazeRecord, JoyRecord]]: ...


class ScriptFeed:
    """Feed a parsed trace script in timestamp order. Single use."""

    def __init__(self, script: InputScript):
        self._records = script.records
        self._i = 0

    def events_until(self, t: float, pose: Pose) -> list[Union[GazeRecord, JoyRecord]]:
        out = []
        while self._i < len(self._records) and self._records[self._i].t <= t:
            out.append(self._records[self._i])
            self._i += 1
        return out


class GazePolicyFeed:
    """Sample a closed-loop gaze policy on the operator cadence. Single use."""

    def __init__(self, policy: WaypointGazePolicy, period: float = GAZE_PERIOD):
        if not (math.isfinite(period) and period > 0.0):
            raise ValueError(f"gaze period must be finite and > 0, got {period!r}")
        self._policy = policy
        self._period = period
        self._k = 0

    def events_until(self, t: float, pose: Pose) -> list[GazeRecord]:
        out = []
        while self._k * self._period <= t:
            stamp = self._k * self._period
            s = self._policy.gaze_at(stamp, pose)
            out.append(GazeRecord(t=stamp, x=s.x, y=s.y, valid=s.valid))
            self._k += 1
        return out


def run_episode(
    world: WorldModel,
    feed: InputFeed,
    geom: RobotGeometry,
    params: AdmittanceParams,
    layout: IntentLayout,
    *,
    dt: float = DEFAULT_DT,
    t_limit: float = 180.0,
    force_mode: str = "center",
    hold_timeout: float = DEFAULT_HOLD_TIMEOUT,
    w_max: float = DEFAULT_YAW_RATE_MAX,
) -> EpisodeReport:
    """Run one closed-loop episode to goal entry or the time limit.

    Identical (world, feed, geom, params, layout, dt) produce bit-identical
    reports: the loop is single-threaded, input application is pinned to
    tick boundaries, and no wall-clock or RNG state is consulted.
    """
    if not (math.isfinite(t_limit) and t_limit > 0.0):
        raise ValueError(f"t_limit must be finite and > 0, got {t_limit!r}")
    engine = SimEngine(
        world,
        geom,
        params,
        layout,
        dt=dt,
        force_mode=force_mode,
        hold_timeout=hold_timeout,
        w_max=w_max,
    )
    if engine.goal_reached:
        return engine.report()
    n_max = math.ceil(t_limit / dt)
    for _ in range(n_max):
        for event in feed.events_until(engine.t, engine.pose):
            if isinstance(event, GazeRecord):
                engine.apply_gaze(GazeSample(timestamp=event.t, x=event.x, y=event.y, valid=event.valid))
            elif isinstance(event, JoyRecord):
                engine.apply_joy(JoystickInput(event.axis_x, event.axis_y, event.axis_yaw))
            else:
                raise TypeError(f"unsupported input event {event!r}")
        engine.step()
        if engine.goal_reached:
            break
    return engine.report()
