"""Wire envelopes: rosbridge-style JSON frames with strict topic schemas.

One envelope per WebSocket text frame, UTF-8, canonically encoded with
sorted keys and no whitespace so identical envelopes always serialize to
identical bytes. Numbers round-trip at full precision (shortest repr).
Decoding is strict by default: unknown keys, missing fields, and type
mismatches are reported with the offending key, never silently dropped.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = [
    "OPS",
    "Envelope",
    "TopicSchema",
    "FieldSpec",
    "EnvelopeError",
    "EnvelopeDecodeError",
    "SchemaError",
    "BUILTIN_SCHEMAS",
    "TOPIC_BINDINGS",
    "encode",
    "decode",
    "make_publish",
]

OPS = ("advertise", "unadvertise", "subscribe", "unsubscribe", "publish")

#: Ops that must carry a message type name.
_TYPE_REQUIRED = ("advertise", "publish")


class EnvelopeError(ValueError):
    """Base class for envelope construction and codec failures."""


class EnvelopeDecodeError(EnvelopeError):
    """Frame is not a well-formed envelope (bad JSON, keys, or op)."""


class SchemaError(EnvelopeError):
    """Message payload does not validate against its declared schema."""


@dataclass(frozen=True, slots=True)
class FieldSpec:
    """One scalar (or fixed-size numeric array) message field."""

    name: str
    kind: str  # "float" | "bool" | "float[4]"
    unit: str = ""


@dataclass(frozen=True, slots=True)
class TopicSchema:
    name: str
    fields: tuple[FieldSpec, ...]

    def validate(self, msg: object, strict: bool = True) -> dict:
        """Check and normalize a message payload.

        Integer JSON numbers are normalized to floats for float fields so
        a validated envelope always re-encodes canonically.
        """
        if not isinstance(msg, dict):
            raise SchemaError(f"{self.name}: msg must be an object, got {type(msg).__name__}")
        out: dict = {}
        for spec in self.fields:
            if spec.name not in msg:
                raise SchemaError(f"{self.name}: missing field '{spec.name}'")
            value = msg[spec.name]
            if spec.kind == "float":
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise SchemaError(f"{self.name}: field '{spec.name}' expects a number, got {value!r}")
                value = float(value)
                if not math.isfinite(value):
                    raise SchemaError(f"{self.name}: field '{spec.name}' must be finite, got {value!r}")
            elif spec.kind == "bool":
                if not isinstance(value, bool):
                    raise SchemaError(f"{self.name}: field '{spec.name}' expects a bool, got {value!r}")
            elif spec.kind.startswith("float["):
                size = int(spec.kind[6:-1])
                if not isinstance(value, list) or len(value) != size:
                    raise SchemaError(f"{self.name}: field '{spec.name}' expects a list of {size} numbers")
                norm = []
                for i, item in enumerate(value):
                    if isinstance(item, bool) or not isinstance(item, (int, float)) or not math.isfinite(float(item)):
                        raise SchemaError(f"{self.name}: field '{spec.name}[{i}]' expects a finite number")
                    norm.append(float(item))
                value = norm
            else:  # pragma: no cover - schema definition error
                raise SchemaError(f"{self.name}: unsupported field kind {spec.kind!r}")
            out[spec.name] = value
        if strict:
            for key in msg:
                if key not in out:
                    raise SchemaError(f"{self.name}: unknown field '{key}'")
        else:
            for key, value in msg.items():
                out.setdefault(key, value)
        return out


def _schema(name: str, *fields: tuple[str, str, str]) -> TopicSchema:
    return TopicSchema(name=name, fields=tuple(FieldSpec(*f) for f in fields))


BUILTIN_SCHEMAS: dict[str, TopicSchema] = {
    s.name: s
    for s in (
        _schema("gaze_drive/Gaze", ("x", "float", "m"), ("y", "float", "m"), ("valid", "bool", ""), ("stamp", "float", "s")),
        _schema(
            "gaze_drive/Joy",
            ("axis_x", "float", ""),
            ("axis_y", "float", ""),
            ("axis_yaw", "float", ""),
            ("stamp", "float", "s"),
        ),
        _schema(
            "gaze_drive/Pose2D",
            ("x", "float", "m"),
            ("y", "float", "m"),
            ("theta", "float", "rad"),
            ("stamp", "float", "s"),
        ),
        _schema(
            "gaze_drive/CmdVel",
            ("vx", "float", "m/s"),
            ("vy", "float", "m/s"),
            ("omega", "float", "rad/s"),
        ),
        _schema("gaze_drive/WheelCmd", ("w", "float[4]", "rad/s")),
        _schema("gaze_drive/ControlParams", ("damping_ns_per_m", "float", "N*s/m")),
        _schema("gaze_drive/Force", ("fx", "float", "N"), ("fy", "float", "N")),
    )
}

#: Topics of the communication framework and their bound message schema.
TOPIC_BINDINGS: dict[str, str] = {
    "/gaze": "gaze_drive/Gaze",
    "/joy": "gaze_drive/Joy",
    "/virtual_robot/pose": "gaze_drive/Pose2D",
    "/robot/pose": "gaze_drive/Pose2D",
    "/cmd_vel": "gaze_drive/CmdVel",
    "/wheel_cmd": "gaze_drive/WheelCmd",
    "/control/params": "gaze_drive/ControlParams",
    "/telemetry/force": "gaze_drive/Force",
}

_ENVELOPE_KEYS = {"op", "topic", "type", "msg", "stamp"}


@dataclass(frozen=True)
class Envelope:
    """One pub/sub protocol frame."""

    op: str
    topic: str
    stamp: float
    type: str | None = None
    msg: dict | None = field(default=None)

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise EnvelopeDecodeError(f"unknown op {self.op!r} (expected one of {OPS})")
        if not isinstance(self.topic, str) or not self.topic or not self.topic.startswith("/"):
            raise EnvelopeDecodeError(f"topic must be a non-empty string starting with '/', got {self.topic!r}")
        if isinstance(self.stamp, bool) or not isinstance(self.stamp, (int, float)):
            raise EnvelopeDecodeError(f"stamp must be a number, got {self.stamp!r}")
        object.__setattr__(self, "stamp", float(self.stamp))
        if not (math.isfinite(self.stamp) and self.stamp >= 0.0):
            raise EnvelopeDecodeError(f"stamp must be finite and >= 0, got {self.stamp!r}")

        if self.op in _TYPE_REQUIRED and self.type is None:
            raise EnvelopeDecodeError(f"op {self.op!r} requires a 'type'")
        if self.type is not None:
            if self.type not in BUILTIN_SCHEMAS:
                raise SchemaError(f"unknown message type {self.type!r}")
            bound = TOPIC_BINDINGS.get(self.topic)
            if bound is not None and bound != self.type:
                raise SchemaError(f"topic {self.topic!r} is bound to {bound!r}, not {self.type!r}")

        if self.op == "publish":
            if self.msg is None:
                raise EnvelopeDecodeError("publish requires a 'msg'")
            normalized = BUILTIN_SCHEMAS[self.type].validate(self.msg)
            object.__setattr__(self, "msg", normalized)
        elif self.msg is not None:
            raise EnvelopeDecodeError(f"op {self.op!r} must not carry a 'msg'")


def encode(e: Envelope) -> bytes:
    """Canonical wire form: compact JSON, sorted keys, UTF-8."""
    payload: dict = {"op": e.op, "stamp": e.stamp, "topic": e.topic}
    if e.type is not None:
        payload["type"] = e.type
    if e.msg is not None:
        payload["msg"] = e.msg
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def decode(data: bytes | str, strict: bool = True) -> Envelope:
    """Parse and validate one wire frame.

    Raises EnvelopeDecodeError for malformed frames and SchemaError for
    payloads that do not match the declared message schema. In strict mode
    unknown envelope keys are rejected with a diagnostic naming the key.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise EnvelopeDecodeError(f"frame is not valid UTF-8: {err}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as err:
        raise EnvelopeDecodeError(f"frame is not valid JSON: {err}") from None
    if not isinstance(raw, dict):
        raise EnvelopeDecodeError(f"frame must be a JSON object, got {type(raw).__name__}")
    if strict:
        for key in raw:
            if key not in _ENVELOPE_KEYS:
                raise EnvelopeDecodeError(f"unknown envelope key '{key}'")
    for required in ("op", "topic", "stamp"):
        if required not in raw:
            raise EnvelopeDecodeError(f"missing envelope key '{required}'")
    op = raw["op"]
    if not isinstance(op, str):
        raise EnvelopeDecodeError(f"op must be a string, got {op!r}")
    type_name = raw.get("type")
    if type_name is not None and not isinstance(type_name, str):
        raise EnvelopeDecodeError(f"type must be a string, got {type_name!r}")
    return Envelope(op=op, topic=raw["topic"], stamp=raw["stamp"], type=type_name, msg=raw.get("msg"))


def make_publish(topic: str, msg: dict, stamp: float) -> Envelope:
    """Publish envelope on a builtin topic with its bound schema."""
    try:
        type_name = TOPIC_BINDINGS[topic]
    except KeyError:
        raise EnvelopeError(f"no builtin schema bound to topic {topic!r}") from None
    return Envelope(op="publish", topic=topic, stamp=stamp, type=type_name, msg=msg)
