"""Gaze-to-force conversion with a dead-zone and axis projection.

The operator's gaze point (a pointer position on the ground plane) is
compared against the robot pose. Gaze inside the dead-zone rectangle
around the robot produces no force. Gaze in the longitudinal band ahead
of or behind the robot produces a purely longitudinal force; gaze in the
lateral band a purely lateral one. The force is the stiffness-scaled
displacement between gaze point and robot center, expressed in the robot
frame, so at most one force component is ever nonzero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .world import Pose

__all__ = [
    "IntentRegion",
    "GazeSample",
    "IntentLayout",
    "VirtualForce",
    "InvalidSampleError",
    "ZERO_FORCE",
    "FORCE_MODES",
    "classify_region",
    "compute_force",
    "hold_policy",
]

#: Gaze dropout tolerance: hold the last force for up to three sample
#: periods of the 30 Hz gaze stream before decaying to zero.
DEFAULT_HOLD_TIMEOUT = 0.1

FORCE_MODES = ("center", "boundary_relative")


class InvalidSampleError(ValueError):
    """Raised when a classification is requested for an invalid sample."""


class IntentRegion(enum.Enum):
    DEAD_ZONE = "dead_zone"
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"
    OUTSIDE = "outside"


@dataclass(frozen=True, slots=True)
class GazeSample:
    """One timestamped gaze point on the world ground plane."""

    timestamp: float
    x: float
    y: float
    valid: bool = True

    def __post_init__(self) -> None:
        if not math.isfinite(self.timestamp):
            raise ValueError(f"invalid input: non-finite gaze timestamp {self.timestamp!r}")
        if self.valid and not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"invalid input: non-finite gaze point ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class IntentLayout:
    """Dead-zone rectangle plus the reach of the four directional bands.

    The dead-zone should be at least as large as the robot footprint so
    that looking at the robot itself never commands motion; that coupling
    is checked where footprint and layout meet (scenario loading).
    """

    deadzone_length: float = 0.750
    deadzone_width: float = 0.665
    region_extent: float = 2.0

    def __post_init__(self) -> None:
        for name in ("deadzone_length", "deadzone_width", "region_extent"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"invalid layout: {name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True, slots=True)
class VirtualForce:
    """Axis-projected virtual force in the robot frame, newtons."""

    fx: float
    fy: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.fx) and math.isfinite(self.fy)):
            raise ValueError(f"invalid input: non-finite force ({self.fx}, {self.fy})")
        if self.fx != 0.0 and self.fy != 0.0:
            raise ValueError("axis projection violated: at most one force component may be nonzero")


ZERO_FORCE = VirtualForce(0.0, 0.0)


def _robot_frame_offset(g: GazeSample, robot_pose: Pose) -> tuple[float, float]:
    """Gaze displacement from the robot center, in the robot frame."""
    c, s = math.cos(robot_pose.theta), math.sin(robot_pose.theta)
    wx, wy = g.x - robot_pose.x, g.y - robot_pose.y
    return c * wx + s * wy, -s * wx + c * wy


def _classify(dx: float, dy: float, layout: IntentLayout) -> IntentRegion:
    half_l = layout.deadzone_length / 2.0
    half_w = layout.deadzone_width / 2.0
    extent = layout.region_extent
    in_band_x = abs(dx) <= half_l
    in_band_y = abs(dy) <= half_w
    if in_band_x and in_band_y:
        return IntentRegion.DEAD_ZONE
    # Longitudinal regions take precedence over lateral ones at seams.
    if in_band_y and half_l < dx <= half_l + extent:
        return IntentRegion.UP
    if in_band_y and -half_l - extent <= dx < -half_l:
        return IntentRegion.DOWN
    if in_band_x and half_w < dy <= half_w + extent:
        return IntentRegion.LEFT
    if in_band_x and -half_w - extent <= dy < -half_w:
        return IntentRegion.RIGHT
    return IntentRegion.OUTSIDE


def classify_region(g: GazeSample, robot_pose: Pose, layout: IntentLayout) -> IntentRegion:
    """Classify a gaze sample into the dead-zone, a directional band, or outside.

    Regions are anchored to the robot pose and axis-aligned in the robot
    frame. Raises InvalidSampleError for samples flagged invalid.
    """
    if not g.valid:
        raise InvalidSampleError("cannot classify an invalid gaze sample")
    dx, dy = _robot_frame_offset(g, robot_pose)
    return _classify(dx, dy, layout)


def compute_force(
    g: GazeSample,
    robot_pose: Pose,
    stiffness: float,
    layout: IntentLayout,
    mode: str = "center",
) -> VirtualForce:
    """Convert a gaze sample into the axis-projected virtual force.

    In "center" mode the force is the stiffness-scaled displacement from
    the robot center, which jumps from zero at the dead-zone edge. The
    "boundary_relative" mode measures the displacement from the dead-zone
    boundary instead, removing that discontinuity.

    Invalid samples and gaze in the dead-zone or outside every band yield
    a zero force.
    """
    if not (math.isfinite(stiffness) and stiffness > 0.0):
        raise ValueError(f"invalid parameter: stiffness must be finite and > 0, got {stiffness!r}")
    if mode not in FORCE_MODES:
        raise ValueError(f"invalid parameter: force mode must be one of {FORCE_MODES}, got {mode!r}")
    if not g.valid:
        return ZERO_FORCE

    dx, dy = _robot_frame_offset(g, robot_pose)
    region = _classify(dx, dy, layout)
    if region in (IntentRegion.DEAD_ZONE, IntentRegion.OUTSIDE):
        return ZERO_FORCE

    half_l = layout.deadzone_length / 2.0
    half_w = layout.deadzone_width / 2.0
    if region is IntentRegion.UP:
        offset = dx - half_l if mode == "boundary_relative" else dx
        return VirtualForce(stiffness * offset, 0.0)
    if region is IntentRegion.DOWN:
        offset = dx + half_l if mode == "boundary_relative" else dx
        return VirtualForce(stiffness * offset, 0.0)
    if region is IntentRegion.LEFT:
        offset = dy - half_w if mode == "boundary_relative" else dy
        return VirtualForce(0.0, stiffness * offset)
    offset = dy + half_w if mode == "boundary_relative" else dy
    return VirtualForce(0.0, stiffness * offset)


def hold_policy(last_force: VirtualForce, age: float, timeout: float = DEFAULT_HOLD_TIMEOUT) -> VirtualForce:
    """Bridge gaze dropouts: keep the last force briefly, then release it.

    Returns last_force while its age is within the timeout, otherwise the
    zero force (the admittance filter then decays velocity smoothly).
    """
    if not (math.isfinite(age) and age >= 0.0):
        raise ValueError(f"invalid input: age must be finite and >= 0, got {age!r}")
    if age <= timeout:
        return last_force
    return ZERO_FORCE
