"""Append-only session logs (JSON Lines) and deterministic replay.

Every line is one SessionEvent: a gap-free sequence number, the event's
time on the session clock (seconds since the session epoch, which is also
the simulation clock in served sessions), a direction flag, and the full
envelope. Inbound events are frames received from remote peers; outbound
events are frames originated by the local simulation. Replaying the
inbound events through the same scenario reproduces a served episode
exactly, because the simulation applies inputs at tick boundaries derived
from these stamps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

from .envelope import Envelope, EnvelopeError, decode, encode

__all__ = [
    "DIRECTIONS",
    "SessionEvent",
    "SessionLogError",
    "SessionRecorder",
    "read_session",
    "load_session",
    "iter_replay",
]

DIRECTIONS = ("inbound", "outbound")


class SessionLogError(ValueError):
    """Corrupt or inconsistent session log; names the offending seq/line."""


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    wall_stamp: float
    direction: str
    envelope: Envelope

    def __post_init__(self) -> None:
        if not isinstance(self.seq, int) or self.seq < 0:
            raise SessionLogError(f"seq must be a non-negative integer, got {self.seq!r}")
        if not (isinstance(self.wall_stamp, (int, float)) and math.isfinite(self.wall_stamp) and self.wall_stamp >= 0):
            raise SessionLogError(f"wall_stamp must be finite and >= 0, got {self.wall_stamp!r}")
        if self.direction not in DIRECTIONS:
            raise SessionLogError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")

    def to_line(self) -> str:
        frame = encode(self.envelope).decode("utf-8")
        return f'{{"seq":{self.seq},"wall_stamp":{self.wall_stamp!r},"direction":"{self.direction}","envelope":{frame}}}'


def _event_from_line(line: str, line_no: int, expected_seq: int) -> SessionEvent:
    import json

    try:
        raw = json.loads(line)
    except json.JSONDecodeError as err:
        raise SessionLogError(f"line {line_no}: not valid JSON: {err}") from None
    if not isinstance(raw, dict) or set(raw) != {"seq", "wall_stamp", "direction", "envelope"}:
        raise SessionLogError(f"line {line_no}: expected keys seq/wall_stamp/direction/envelope")
    seq = raw["seq"]
    if seq != expected_seq:
        raise SessionLogError(f"line {line_no}: sequence gap, expected seq {expected_seq}, found {seq!r}")
    try:
        envelope = decode(json.dumps(raw["envelope"]))
    except EnvelopeError as err:
        raise SessionLogError(f"line {line_no} (seq {seq}): bad envelope: {err}") from None
    return SessionEvent(seq=seq, wall_stamp=raw["wall_stamp"], direction=raw["direction"], envelope=envelope)


class SessionRecorder:
    """Append-only JSONL writer with a session-local sequence counter."""

    def __init__(self, sink: IO[str] | str | Path):
        if isinstance(sink, (str, Path)):
            self._file: IO[str] = open(sink, "w", encoding="utf-8")
            self._owns = True
        else:
            self._file = sink
            self._owns = False
        self._seq = 0

    @property
    def count(self) -> int:
        return self._seq

    def record(self, direction: str, envelope: Envelope, wall_stamp: float) -> SessionEvent:
        event = SessionEvent(seq=self._seq, wall_stamp=wall_stamp, direction=direction, envelope=envelope)
        self._file.write(event.to_line() + "\n")
        self._seq += 1
        return event

    def flush(self) -> None:
        self._file.flush()

    def close(self) -> None:
        self.flush()
        if self._owns:
            self._file.close()

    def __enter__(self) -> "SessionRecorder":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_session(text: str) -> list[SessionEvent]:
    """Parse a session log, enforcing the gap-free sequence invariant."""
    events: list[SessionEvent] = []
    expected = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        events.append(_event_from_line(line, line_no, expected))
        expected += 1
    return events


def load_session(path: str | Path) -> list[SessionEvent]:
    return read_session(Path(path).read_text(encoding="utf-8"))


def iter_replay(events: Iterable[SessionEvent], speed: float = 0.0) -> Iterator[tuple[float, Envelope]]:
    """Yield (delay_seconds, envelope) for the inbound half of a session.

    Delays are gaps between consecutive inbound events divided by `speed`;
    speed 0 means as fast as possible (all delays zero). The consumer decides
    whether to sleep; the simulation clock comes from the event stamps, not
    from these pacing delays.
    """
    if speed < 0.0 or not math.isfinite(speed):
        raise ValueError(f"speed must be finite and >= 0, got {speed!r}")
    previous: float | None = None
    for event in events:
        if event.direction != "inbound":
            continue
        if speed == 0.0 or previous is None:
            delay = 0.0
        else:
            delay = max(0.0, (event.wall_stamp - previous) / speed)
        previous = event.wall_stamp
        yield delay, event.envelope
