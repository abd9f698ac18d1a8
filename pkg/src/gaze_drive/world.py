"""World geometry: poses, rectangles, obstacle collision, course model."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Pose",
    "Rect",
    "WorldModel",
    "normalize_angle",
    "footprint_corners",
    "resolve_collision",
]


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True, slots=True)
class Pose:
    """Planar pose in the world frame; theta is normalized to (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise ValueError(f"invalid input: non-finite pose ({self.x}, {self.y}, {self.theta})")
        object.__setattr__(self, "theta", normalize_angle(self.theta))


@dataclass(frozen=True, slots=True)
class Rect:
    """Axis-aligned rectangle, min corner inclusive of its edges."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.x_min, self.y_min, self.x_max, self.y_max))):
            raise ValueError("invalid rectangle: non-finite corner")
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise ValueError(f"invalid rectangle: min corner must be below max corner, got {self}")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


def footprint_corners(pose: Pose, length: float, width: float) -> list[tuple[float, float]]:
    """World-frame corners of the robot footprint rectangle at `pose`."""
    hl, hw = length / 2.0, width / 2.0
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    corners = []
    for bx, by in ((hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw)):
        corners.append((pose.x + bx * c - by * s, pose.y + bx * s + by * c))
    return corners


def _project(points: list[tuple[float, float]], ax: float, ay: float) -> tuple[float, float]:
    dots = [px * ax + py * ay for px, py in points]
    return min(dots), max(dots)


def _strict_overlap(robot: list[tuple[float, float]], rect: Rect, heading: float) -> bool:
    """Separating-axis test with open intersection semantics.

    Touching edges or corners (zero-area overlap) do not count as overlap.
    """
    box = [(rect.x_min, rect.y_min), (rect.x_max, rect.y_min), (rect.x_max, rect.y_max), (rect.x_min, rect.y_max)]
    c, s = math.cos(heading), math.sin(heading)
    for ax, ay in ((1.0, 0.0), (0.0, 1.0), (c, s), (-s, c)):
        lo_a, hi_a = _project(robot, ax, ay)
        lo_b, hi_b = _project(box, ax, ay)
        if hi_a <= lo_b or hi_b <= lo_a:
            return False
    return True


@dataclass(frozen=True)
class WorldModel:
    """Bounded arena with axis-aligned obstacles, a start pose and a goal."""

    bounds: Rect
    obstacles: tuple[Rect, ...]
    start_pose: Pose
    goal_region: Rect
    operator_offset: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if not (math.isfinite(self.operator_offset) and self.operator_offset > 0.0):
            raise ValueError(f"operator_offset must be > 0, got {self.operator_offset!r}")
        b = self.bounds
        g = self.goal_region
        if not (b.x_min <= g.x_min and g.x_max <= b.x_max and b.y_min <= g.y_min and g.y_max <= b.y_max):
            raise ValueError("goal region must lie inside the world bounds")

    def validate_start(self, footprint_length: float, footprint_width: float) -> None:
        """Raise if the start footprint collides or exits the arena."""
        if self.collides(self.start_pose, footprint_length, footprint_width):
            raise ValueError("start pose is not collision-free for the given footprint")

    def collides(self, pose: Pose, footprint_length: float, footprint_width: float) -> bool:
        corners = footprint_corners(pose, footprint_length, footprint_width)
        for cx, cy in corners:
            if not self.bounds.contains(cx, cy):
                return True
        for obstacle in self.obstacles:
            if _strict_overlap(corners, obstacle, pose.theta):
                return True
        return False

    def in_goal(self, pose: Pose) -> bool:
        return self.goal_region.contains(pose.x, pose.y)


def resolve_collision(
    old: Pose,
    new: Pose,
    world: WorldModel,
    footprint_length: float,
    footprint_width: float,
) -> tuple[Pose, bool]:
    """Stop-on-contact rule: reject the move if the new footprint collides.

    Returns (new, False) when the footprint at `new` stays inside the
    bounds and strictly clear of every obstacle (touching is allowed),
    otherwise (old, True).
    """
    if world.collides(new, footprint_length, footprint_width):
        return old, True
    return new, False
