"""Live session recording and bit-exact replay, end to end in-process.

Serves the bridge with a paced simulation, drives it for a few seconds
with a synthetic operator over a real WebSocket, records the session to a
JSONL log, then replays the log headless and verifies the episode report
matches the live one exactly.
"""

import asyncio
import socket
import tempfile
from pathlib import Path

from websockets.asyncio.client import connect

from gaze_drive import load_scenario, default_scenario_path, trace_csv
from gaze_drive.envelope import Envelope, encode, make_publish
from gaze_drive.serve import LiveSession, replay_episode
from gaze_drive.session import load_session


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


async def main(record_path: Path):
    scenario = load_scenario(default_scenario_path())
    port = free_port()
    session = LiveSession(scenario, port=port, record_path=record_path)
    server_task = asyncio.create_task(session.run(duration=3.0))
    await asyncio.sleep(0.1)

    async with connect(f"ws://127.0.0.1:{port}/bridge") as ws:
        await ws.send(encode(Envelope(op="advertise", topic="/gaze", stamp=0.0, type="gaze_drive/Gaze")).decode())
        print("operator connected; gazing 1 m ahead of the robot at 30 Hz ...")
        for i in range(75):
            pose = session.engine.pose
            msg = {"x": pose.x + 1.0, "y": pose.y, "valid": True, "stamp": i / 30.0}
            await ws.send(encode(make_publish("/gaze", msg, i / 30.0)).decode())
            await asyncio.sleep(1 / 30.0)

    live_report = await server_task
    print(f"live session: {len(live_report.trace)} trace samples, "
          f"final pose x={live_report.final_pose.x:.3f} m")

    events = load_session(record_path)
    inbound = sum(1 for e in events if e.direction == "inbound")
    print(f"session log: {len(events)} events ({inbound} inbound), {record_path}")

    replay_report = replay_episode(scenario, events)
    identical = trace_csv(replay_report) == trace_csv(live_report)
    print(f"replayed headless: {len(replay_report.trace)} samples; "
          f"bit-identical to live: {identical}")
    assert identical


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        asyncio.run(main(Path(tmp) / "demo.session.jsonl"))
