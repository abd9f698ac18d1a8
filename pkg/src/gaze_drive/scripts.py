"""Input scripts and policies that stand in for a human operator.

Two kinds of scripted input exist:

* Trace scripts: line-oriented text files of timestamped gaze or joystick
  records, replayed open-loop.
* The waypoint gaze policy: a deterministic closed-loop surrogate operator
  that places its gaze a fixed lead distance from the robot toward the
  next waypoint, on one robot axis at a time (the way the four-square
  layout is actually used). A fixed trace cannot express this because the
  gaze must track the robot's own progress, which depends on the damping
  under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .intent import GazeSample
from .world import Pose

__all__ = [
    "SCRIPT_SCHEMA_VERSION",
    "ScriptParseError",
    "GazeRecord",
    "JoyRecord",
    "InputScript",
    "parse_script",
    "load_script",
    "format_script",
    "WaypointGazePolicy",
    "joystick_leg_records",
]

SCRIPT_SCHEMA_VERSION = 1

#: Gaze sampling cadence of the operator console (30 Hz).
GAZE_PERIOD = 1.0 / 30.0


class ScriptParseError(ValueError):
    """Malformed input script; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"script line {line}: {message}")
        self.line = line


@dataclass(frozen=True, slots=True)
class GazeRecord:
    t: float
    x: float
    y: float
    valid: bool = True


@dataclass(frozen=True, slots=True)
class JoyRecord:
    t: float
    axis_x: float
    axis_y: float
    axis_yaw: float


ScriptRecord = Union[GazeRecord, JoyRecord]


@dataclass(frozen=True)
class InputScript:
    """Parsed, time-ordered operator input trace."""

    records: tuple[ScriptRecord, ...]

    @property
    def duration(self) -> float:
        return self.records[-1].t if self.records else 0.0

    @property
    def kinds(self) -> set[str]:
        return {"gaze" if isinstance(r, GazeRecord) else "joy" for r in self.records}


def _parse_float(token: str, line_no: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ScriptParseError(f"{what} is not a number: {token!r}", line_no) from None
    if not math.isfinite(value):
        raise ScriptParseError(f"{what} must be finite: {token!r}", line_no)
    return value


def parse_script(text: str) -> InputScript:
    """Parse the line-oriented script format.

    Grammar: '#' comments and blank lines are skipped; the first content
    line must declare ``schema_version, 1``; every other line is
    ``t, gaze, x, y, valid`` or ``t, joy, axis_x, axis_y, axis_yaw`` with
    non-decreasing timestamps.
    """
    records: list[ScriptRecord] = []
    version_seen = False
    last_t = -math.inf
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if not version_seen:
            if len(fields) != 2 or fields[0] != "schema_version":
                raise ScriptParseError("expected 'schema_version, 1' header", line_no)
            if fields[1] != str(SCRIPT_SCHEMA_VERSION):
                raise ScriptParseError(f"unsupported schema_version {fields[1]!r}", line_no)
            version_seen = True
            continue
        if len(fields) < 2:
            raise ScriptParseError("expected 't, kind, payload...'", line_no)
        t = _parse_float(fields[0], line_no, "timestamp")
        if t < 0.0:
            raise ScriptParseError(f"timestamp must be >= 0, got {t}", line_no)
        if t < last_t:
            raise ScriptParseError(f"timestamps must be non-decreasing ({t} after {last_t})", line_no)
        last_t = t
        kind = fields[1]
        if kind == "gaze":
            if len(fields) != 5:
                raise ScriptParseError("gaze record needs 't, gaze, x, y, valid'", line_no)
            valid_token = fields[4].lower()
            if valid_token in ("1", "true"):
                valid = True
            elif valid_token in ("0", "false"):
                valid = False
            else:
                raise ScriptParseError(f"valid flag must be 0/1/true/false, got {fields[4]!r}", line_no)
            records.append(
                GazeRecord(
                    t=t,
                    x=_parse_float(fields[2], line_no, "gaze x"),
                    y=_parse_float(fields[3], line_no, "gaze y"),
                    valid=valid,
                )
            )
        elif kind == "joy":
            if len(fields) != 5:
                raise ScriptParseError("joy record needs 't, joy, axis_x, axis_y, axis_yaw'", line_no)
            records.append(
                JoyRecord(
                    t=t,
                    axis_x=_parse_float(fields[2], line_no, "axis_x"),
                    axis_y=_parse_float(fields[3], line_no, "axis_y"),
                    axis_yaw=_parse_float(fields[4], line_no, "axis_yaw"),
                )
            )
        else:
            raise ScriptParseError(f"unknown record kind {kind!r} (expected gaze or joy)", line_no)
    if not version_seen:
        raise ScriptParseError("empty script: missing schema_version header", 1)
    return InputScript(records=tuple(records))


def load_script(path: str | Path) -> InputScript:
    return parse_script(Path(path).read_text(encoding="utf-8"))


def format_script(records: Iterable[ScriptRecord], comment: str | None = None) -> str:
    """Serialize records back into the script text format."""
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    lines.append(f"schema_version, {SCRIPT_SCHEMA_VERSION}")
    for rec in records:
        if isinstance(rec, GazeRecord):
            lines.append(f"{rec.t!r}, gaze, {rec.x!r}, {rec.y!r}, {1 if rec.valid else 0}")
        else:
            lines.append(f"{rec.t!r}, joy, {rec.axis_x!r}, {rec.axis_y!r}, {rec.axis_yaw!r}")
    return "\n".join(lines) + "\n"


class WaypointGazePolicy:
    """Deterministic surrogate operator chasing a fixed waypoint list.

    At every gaze sample the policy looks a fixed lead distance from the
    robot toward the current waypoint, projected onto the dominant robot
    axis (longitudinal wins ties). Waypoints are retired when the robot
    comes within the switch radius; after the last one the gaze rests on
    the final waypoint itself so the robot parks there.
    """

    def __init__(
        self,
        waypoints: Iterable[tuple[float, float]],
        lead: float = 0.8,
        switch_radius: float = 0.5,
    ):
        self.waypoints = tuple((float(x), float(y)) for x, y in waypoints)
        if not self.waypoints:
            raise ValueError("waypoint list must not be empty")
        if not (math.isfinite(lead) and lead > 0.0):
            raise ValueError(f"lead must be finite and > 0, got {lead!r}")
        if not (math.isfinite(switch_radius) and switch_radius > 0.0):
            raise ValueError(f"switch_radius must be finite and > 0, got {switch_radius!r}")
        self.lead = lead
        self.switch_radius = switch_radius
        self._index = 0

    def reset(self) -> None:
        self._index = 0

    def gaze_at(self, t: float, pose: Pose) -> GazeSample:
        while self._index < len(self.waypoints):
            wx, wy = self.waypoints[self._index]
            if math.hypot(wx - pose.x, wy - pose.y) <= self.switch_radius:
                self._index += 1
            else:
                break
        if self._index >= len(self.waypoints):
            wx, wy = self.waypoints[-1]
            return GazeSample(timestamp=t, x=wx, y=wy, valid=True)

        wx, wy = self.waypoints[self._index]
        c, s = math.cos(pose.theta), math.sin(pose.theta)
        dx_w, dy_w = wx - pose.x, wy - pose.y
        # Robot-frame displacement toward the waypoint.
        dxr = c * dx_w + s * dy_w
        dyr = -s * dx_w + c * dy_w
        if abs(dxr) >= abs(dyr):
            ox, oy = math.copysign(self.lead, dxr), 0.0
        else:
            ox, oy = 0.0, math.copysign(self.lead, dyr)
        gx = pose.x + c * ox - s * oy
        gy = pose.y + s * ox + c * oy
        return GazeSample(timestamp=t, x=gx, y=gy, valid=True)


def joystick_leg_records(
    start_xy: tuple[float, float],
    waypoints: Iterable[tuple[float, float]],
    dt: float = 0.01,
    v_max: float = 0.5,
    speed_fraction: float = 0.9,
    pause: float = 1.0,
) -> list[JoyRecord]:
    """Build an open-loop joystick trace visiting waypoints in straight legs.

    Leg durations are rounded up to whole ticks and the axis deflection is
    rescaled so every leg lands exactly on its waypoint; a stop-and-pause
    record separates legs, emulating a careful human driver.
    """
    if not (0.0 < speed_fraction <= 1.0):
        raise ValueError(f"speed_fraction must lie in (0, 1], got {speed_fraction!r}")
    records: list[JoyRecord] = []
    x, y = start_xy
    tick = 0

    def t_at(n: int) -> float:
        return n * dt

    for wx, wy in waypoints:
        dist = math.hypot(wx - x, wy - y)
        if dist == 0.0:
            continue
        ticks = max(1, math.ceil(dist / (speed_fraction * v_max * dt)))
        speed = dist / (ticks * dt)
        ux, uy = (wx - x) / dist, (wy - y) / dist
        records.append(JoyRecord(t=t_at(tick), axis_x=ux * speed / v_max, axis_y=uy * speed / v_max, axis_yaw=0.0))
        tick += ticks
        records.append(JoyRecord(t=t_at(tick), axis_x=0.0, axis_y=0.0, axis_yaw=0.0))
        tick += max(0, math.ceil(pause / dt))
        x, y = wx, wy
    return records
