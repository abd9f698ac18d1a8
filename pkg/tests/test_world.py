"""World geometry and collision tests."""

import math

import pytest

from gaze_drive.world import (
    Pose,
    Rect,
    WorldModel,
    footprint_corners,
    normalize_angle,
    resolve_collision,
)

FOOT_L, FOOT_W = 0.750, 0.665


def arena(obstacles=()):
    return WorldModel(
        bounds=Rect(0.0, 0.0, 12.0, 8.0),
        obstacles=tuple(obstacles),
        start_pose=Pose(1.0, 1.0, 0.0),
        goal_region=Rect(10.0, 6.0, 11.0, 7.0),
    )


def test_normalize_angle_range():
    for theta in (-10.0, -math.pi, -1.0, 0.0, 1.0, math.pi, 10.0, 123.456):
        w = normalize_angle(theta)
        assert -math.pi < w <= math.pi
        # Same direction modulo 2*pi.
        assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-12)
        assert math.isclose(math.sin(w), math.sin(theta), abs_tol=1e-12)
    assert normalize_angle(math.pi) == pytest.approx(math.pi)
    assert normalize_angle(-math.pi) == pytest.approx(math.pi)
    assert normalize_angle(0.0) == 0.0


def test_pose_normalizes_theta():
    p = Pose(0.0, 0.0, 3.0 * math.pi)
    assert p.theta == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        Pose(float("nan"), 0.0, 0.0)


def test_rect_contains_inclusive():
    r = Rect(0.0, 0.0, 2.0, 1.0)
    assert r.contains(0.0, 0.0)
    assert r.contains(2.0, 1.0)
    assert r.contains(1.0, 0.5)
    assert not r.contains(2.00001, 0.5)
    with pytest.raises(ValueError):
        Rect(1.0, 0.0, 1.0, 2.0)


def test_footprint_corners_axis_aligned():
    corners = footprint_corners(Pose(2.0, 3.0, 0.0), 0.8, 0.6)
    assert sorted(corners) == sorted([(2.4, 3.3), (2.4, 2.7), (1.6, 2.7), (1.6, 3.3)])


def test_resolve_collision_free_move():
    world = arena([Rect(5.0, 0.0, 5.5, 5.0)])
    old, new = Pose(1.0, 1.0, 0.0), Pose(1.2, 1.0, 0.0)
    pose, hit = resolve_collision(old, new, world, FOOT_L, FOOT_W)
    assert pose == new and not hit


def test_resolve_collision_blocked_by_obstacle():
    world = arena([Rect(5.0, 0.0, 5.5, 5.0)])
    old, new = Pose(4.5, 1.0, 0.0), Pose(4.8, 1.0, 0.0)
    pose, hit = resolve_collision(old, new, world, FOOT_L, FOOT_W)
    assert pose == old and hit


def test_resolve_collision_touching_edge_is_free():
    # Footprint half-length 0.375; robot at x = 4.625 exactly touches x_min = 5.0.
    world = arena([Rect(5.0, 0.0, 5.5, 5.0)])
    old, new = Pose(4.5, 1.0, 0.0), Pose(4.625, 1.0, 0.0)
    pose, hit = resolve_collision(old, new, world, FOOT_L, FOOT_W)
    assert pose == new and not hit


def test_resolve_collision_rotated_footprint():
    # Diagonal footprint reaches farther than the axis-aligned half-width.
    world = arena([Rect(5.0, 0.0, 5.5, 5.0)])
    reach = math.hypot(FOOT_L, FOOT_W) / 2.0
    theta = math.atan2(FOOT_W, FOOT_L)
    blocked = Pose(5.0 - reach + 0.01, 1.0, theta)
    pose, hit = resolve_collision(Pose(4.0, 1.0, theta), blocked, world, FOOT_L, FOOT_W)
    assert hit
    clear = Pose(5.0 - reach - 0.01, 1.0, theta)
    pose, hit = resolve_collision(Pose(4.0, 1.0, theta), clear, world, FOOT_L, FOOT_W)
    assert not hit


def test_resolve_collision_bounds():
    world = arena()
    old = Pose(1.0, 1.0, 0.0)
    outside = Pose(0.3, 1.0, 0.0)  # footprint would cross x = 0
    pose, hit = resolve_collision(old, outside, world, FOOT_L, FOOT_W)
    assert pose == old and hit
    # Exactly touching the boundary is allowed.
    touching = Pose(0.375, 1.0, 0.0)
    pose, hit = resolve_collision(old, touching, world, FOOT_L, FOOT_W)
    assert pose == touching and not hit


def test_world_validations():
    with pytest.raises(ValueError):
        WorldModel(
            bounds=Rect(0, 0, 10, 10),
            obstacles=(),
            start_pose=Pose(1, 1, 0),
            goal_region=Rect(9, 9, 11, 10),  # pokes out of bounds
        )
    with pytest.raises(ValueError):
        WorldModel(
            bounds=Rect(0, 0, 10, 10),
            obstacles=(),
            start_pose=Pose(1, 1, 0),
            goal_region=Rect(8, 8, 9, 9),
            operator_offset=0.0,
        )
    world = arena([Rect(0.8, 0.8, 1.2, 1.2)])  # overlaps start footprint
    with pytest.raises(ValueError):
        world.validate_start(FOOT_L, FOOT_W)


def test_goal_detection():
    world = arena()
    assert world.in_goal(Pose(10.5, 6.5, 0.3))
    assert world.in_goal(Pose(10.0, 6.0, 0.0))
    assert not world.in_goal(Pose(9.99, 6.5, 0.0))
