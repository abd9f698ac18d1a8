"""Live operation: broker plus wall-clock-paced simulation, and replay.

The served simulation steps on the fixed dt grid; wall time only decides
*when* ticks run, never *what* they compute. Inbound envelopes get a
session-relative stamp on arrival and take effect at the first tick
boundary at or after that stamp. Because the session log stores exactly
those stamps, replaying a recorded session through ``replay_episode``
re-executes the identical tick sequence and reproduces the live episode
report bit for bit.
"""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .broker import BridgeServer, DEFAULT_PORT
from .envelope import Envelope, make_publish
from .intent import GazeSample
from .scenario import Scenario, scenario_public_dict
from .scripts import GazeRecord, JoyRecord
from .session import SessionEvent, SessionRecorder, load_session
from .sim import EpisodeReport, JoystickInput, SimEngine
from .world import Pose

__all__ = ["LiveSession", "replay_episode", "DampingChange"]

log = logging.getLogger(__name__)

#: Topics the simulation consumes from remote peers.
INPUT_TOPICS = ("/gaze", "/joy", "/control/params")

#: Topics the simulation publishes, with their schema names.
OUTPUT_TOPICS = (
    ("/robot/pose", "gaze_drive/Pose2D"),
    ("/virtual_robot/pose", "gaze_drive/Pose2D"),
    ("/cmd_vel", "gaze_drive/CmdVel"),
    ("/wheel_cmd", "gaze_drive/WheelCmd"),
    ("/telemetry/force", "gaze_drive/Force"),
)


@dataclass(frozen=True, slots=True)
class DampingChange:
    t: float
    damping: float


InputRecord = GazeRecord | JoyRecord | DampingChange


def _to_input_record(env: Envelope, rel_stamp: float) -> Optional[InputRecord]:
    if env.op != "publish":
        return None
    if env.topic == "/gaze":
        return GazeRecord(t=rel_stamp, x=env.msg["x"], y=env.msg["y"], valid=env.msg["valid"])
    if env.topic == "/joy":
        return JoyRecord(t=rel_stamp, axis_x=env.msg["axis_x"], axis_y=env.msg["axis_y"], axis_yaw=env.msg["axis_yaw"])
    if env.topic == "/control/params":
        return DampingChange(t=rel_stamp, damping=env.msg["damping_ns_per_m"])
    return None


def _apply_record(engine: SimEngine, record: InputRecord) -> None:
    if isinstance(record, GazeRecord):
        engine.apply_gaze(GazeSample(timestamp=record.t, x=record.x, y=record.y, valid=record.valid))
    elif isinstance(record, JoyRecord):
        engine.apply_joy(JoystickInput(record.axis_x, record.axis_y, record.axis_yaw))
    else:
        try:
            engine.set_damping(record.damping)
        except ValueError:
            log.warning("ignoring invalid damping change: %r", record.damping)


class LiveSession:
    """One served episode: broker, paced engine, telemetry, recording."""

    def __init__(
        self,
        scenario: Scenario,
        *,
        host: str = "127.0.0.1",
        port: int = DEFAULT_PORT,
        record_path: str | Path | None = None,
        assets_dir: str | Path | None = None,
        strict: bool = True,
        telemetry_rate_hz: float = 30.0,
        clock: Callable[[], float] | None = None,
    ):
        self.scenario = scenario
        self.engine = SimEngine(
            scenario.world,
            scenario.geometry,
            scenario.params,
            scenario.layout,
            dt=scenario.dt,
            force_mode=scenario.force_mode,
            hold_timeout=scenario.hold_timeout,
        )
        scenario_json = json.dumps(scenario_public_dict(scenario), sort_keys=True).encode("utf-8")
        self.server = BridgeServer(
            host,
            port,
            strict=strict,
            assets_dir=Path(assets_dir) if assets_dir else None,
            local_hook=self._on_delivery,
            http_payloads={"/scenario.json": ("application/json", scenario_json)},
        )
        self._recorder = SessionRecorder(record_path) if record_path else None
        self._pending: list[InputRecord] = []
        self._epoch: float | None = None
        self._clock = clock
        every = max(1, round(1.0 / (telemetry_rate_hz * scenario.dt)))
        self._telemetry_every = every
        self.stop_event = asyncio.Event()

    @property
    def port(self) -> int:
        return self.server.port

    def _now(self) -> float:
        if self._clock is not None:
            return self._clock()
        return asyncio.get_running_loop().time()

    def _on_delivery(self, env: Envelope) -> None:
        """Inbound envelope routed to the simulation: stamp, record, queue."""
        rel = max(0.0, self._now() - self._epoch) if self._epoch is not None else 0.0
        record = _to_input_record(env, rel)
        if record is None:
            return
        if self._recorder is not None:
            self._recorder.record("inbound", env, rel)
        self._pending.append(record)

    def _apply_pending(self) -> None:
        t = self.engine.t
        i = 0
        while i < len(self._pending) and self._pending[i].t <= t:
            _apply_record(self.engine, self._pending[i])
            i += 1
        if i:
            del self._pending[:i]

    def _publish(self, topic: str, msg: dict) -> None:
        env = make_publish(topic, msg, self.engine.t)
        if self._recorder is not None:
            self._recorder.record("outbound", env, self.engine.t)
        self.server.publish_local(env)

    def _publish_snapshot(self) -> None:
        engine = self.engine
        pose: Pose = engine.pose
        t = engine.t
        pose_msg = {"x": pose.x, "y": pose.y, "theta": pose.theta, "stamp": t}
        self._publish("/robot/pose", pose_msg)
        self._publish("/virtual_robot/pose", pose_msg)
        v = engine.last_velocity
        self._publish("/cmd_vel", {"vx": v.vx, "vy": v.vy, "omega": v.omega})
        self._publish("/wheel_cmd", {"w": list(engine.wheel_command().as_tuple())})
        force = engine.last_force
        self._publish("/telemetry/force", {"fx": force.fx, "fy": force.fy})

    async def run(self, duration: float | None = None) -> EpisodeReport:
        """Serve until stopped (or for `duration` seconds of episode time)."""
        for topic in INPUT_TOPICS:
            self.server.local_subscribe(topic)
        for topic, type_name in OUTPUT_TOPICS:
            self.server.local_advertise(topic, type_name)
        await self.server.start()
        log.info("bridge listening on ws://%s:%d/bridge", self.server.host, self.server.port)
        self._epoch = self._now()
        engine = self.engine
        try:
            while not self.stop_event.is_set():
                target = self._epoch + (engine.tick + 1) * engine.dt
                delay = target - self._now()
                if delay > 0:
                    try:
                        await asyncio.wait_for(self.stop_event.wait(), timeout=delay)
                        break
                    except asyncio.TimeoutError:
                        pass
                else:
                    # Behind the wall clock: still yield so I/O can land.
                    await asyncio.sleep(0)
                self._apply_pending()
                engine.step()
                if engine.tick % self._telemetry_every == 0:
                    self._publish_snapshot()
                if duration is not None and engine.t >= duration:
                    break
        finally:
            # Final snapshot pins the session end tick for exact replay.
            self._publish_snapshot()
            if self._recorder is not None:
                self._recorder.close()
            await self.server.stop()
        return engine.report()


def replay_episode(scenario: Scenario, events: list[SessionEvent]) -> EpisodeReport:
    """Deterministically re-execute a recorded session, headless.

    Runs the engine for exactly the ticks the live session ran (the last
    recorded stamp pins the end), applying the recorded inbound inputs at
    the same tick boundaries the live loop used.
    """
    engine = SimEngine(
        scenario.world,
        scenario.geometry,
        scenario.params,
        scenario.layout,
        dt=scenario.dt,
        force_mode=scenario.force_mode,
        hold_timeout=scenario.hold_timeout,
    )
    records = []
    end_t = 0.0
    for event in events:
        if event.direction != "inbound":
            # Outbound snapshots carry the engine clock; the last one pins
            # exactly how many ticks the live loop executed. Inbound arrival
            # stamps may exceed it (inputs that arrived after the last step)
            # and must not extend the replay.
            end_t = max(end_t, event.wall_stamp)
            continue
        record = _to_input_record(event.envelope, event.wall_stamp)
        if record is not None:
            records.append(record)
    ticks = round(end_t / scenario.dt)
    i = 0
    for _ in range(ticks):
        t = engine.t
        while i < len(records) and records[i].t <= t:
            _apply_record(engine, records[i])
            i += 1
        engine.step()
    return engine.report()


def replay_session_file(scenario: Scenario, path: str | Path) -> EpisodeReport:
    return replay_episode(scenario, load_session(path))
