"""Kinematics tests against an independent matrix-vector oracle."""

import math

import numpy as np
import pytest

from gaze_drive.kinematics import (
    DEFAULT_GEOMETRY,
    BodyVelocity,
    RobotGeometry,
    WheelSpeeds,
    forward_kinematics,
    forward_matrix,
    inverse_kinematics,
    inverse_matrix,
    kinematic_consistency_report,
    uncorrected_forward_matrix,
    uncorrected_inverse_matrix,
)

GEOM = RobotGeometry(wheel_radius=0.127, roller_angle=math.pi / 4, d1=0.25, d2=0.30)


def oracle_forward_matrix(geom: RobotGeometry) -> np.ndarray:
    """Canonical forward matrix rebuilt from scratch for cross-checking."""
    r, a = geom.wheel_radius, geom.roller_angle
    t = math.tan(a)
    k = geom.d1 + geom.d2 / math.tan(a)
    return (r / 4.0) * np.array(
        [
            [1.0, 1.0, 1.0, 1.0],
            [-t, t, -t, t],
            [-1.0 / k, 1.0 / k, 1.0 / k, -1.0 / k],
        ]
    )


def oracle_inverse_matrix(geom: RobotGeometry) -> np.ndarray:
    r, a = geom.wheel_radius, geom.roller_angle
    c = 1.0 / math.tan(a)
    k = geom.d1 + geom.d2 * c
    return (1.0 / r) * np.array(
        [
            [1.0, -c, -k],
            [1.0, c, k],
            [1.0, -c, k],
            [1.0, c, -k],
        ]
    )


def random_geometries(rng, n):
    for _ in range(n):
        yield RobotGeometry(
            wheel_radius=rng.uniform(0.03, 0.3),
            roller_angle=rng.uniform(0.2, math.pi / 2 - 0.2),
            d1=rng.uniform(0.1, 0.6),
            d2=rng.uniform(0.1, 0.6),
        )


def test_forward_zero_input():
    v = forward_kinematics(WheelSpeeds(0.0, 0.0, 0.0, 0.0), GEOM)
    assert (v.vx, v.vy, v.omega) == (0.0, 0.0, 0.0)


def test_forward_equal_speeds_pure_longitudinal():
    w0 = 2.0
    v = forward_kinematics(WheelSpeeds(w0, w0, w0, w0), GEOM)
    # Oracle: matrix product over the canonical matrix.
    expected = oracle_forward_matrix(GEOM) @ np.array([w0, w0, w0, w0])
    assert v.vx == pytest.approx(GEOM.wheel_radius * w0, abs=1e-15)
    assert v.vx == pytest.approx(expected[0], abs=1e-15)
    # Structural zeros must be exact, not approximate.
    assert v.vy == 0.0
    assert v.omega == 0.0


def test_forward_antisymmetric_pattern_pure_yaw():
    w0 = 2.0
    v = forward_kinematics(WheelSpeeds(-w0, w0, w0, -w0), GEOM)
    expected = oracle_forward_matrix(GEOM) @ np.array([-w0, w0, w0, -w0])
    assert v.vx == 0.0
    assert v.vy == 0.0
    assert abs(v.omega) > 0.0
    # Frozen from the oracle: omega = R * w0 / (d1 + d2 * cot(a)) = 0.127 * 2 / 0.55
    assert v.omega == pytest.approx(0.4618181818181818, abs=1e-12)
    assert v.omega == pytest.approx(expected[2], abs=1e-15)


def test_forward_matches_matrix_oracle_random():
    rng = np.random.RandomState(7)
    for geom in random_geometries(rng, 10):
        m = oracle_forward_matrix(geom)
        for _ in range(50):
            w = rng.uniform(-20.0, 20.0, size=4)
            v = forward_kinematics(WheelSpeeds(*w), geom)
            expected = m @ w
            np.testing.assert_allclose([v.vx, v.vy, v.omega], expected, atol=1e-12)


def test_inverse_zero_input():
    w = inverse_kinematics(BodyVelocity(0.0, 0.0, 0.0), GEOM)
    assert w.as_tuple() == (0.0, 0.0, 0.0, 0.0)


def test_inverse_pure_longitudinal_equal_wheels():
    vx0 = 0.4
    w = inverse_kinematics(BodyVelocity(vx0, 0.0, 0.0), GEOM)
    expected = vx0 / GEOM.wheel_radius
    for wi in w.as_tuple():
        assert wi == pytest.approx(expected, abs=1e-15)


def test_inverse_matches_matrix_oracle_random():
    rng = np.random.RandomState(11)
    for geom in random_geometries(rng, 10):
        m = oracle_inverse_matrix(geom)
        for _ in range(50):
            vx, vy, om = rng.uniform(-5.0, 5.0, size=3)
            w = inverse_kinematics(BodyVelocity(vx, vy, om), geom)
            expected = m @ np.array([vx, vy, om])
            np.testing.assert_allclose(w.as_tuple(), expected, atol=1e-12)


def test_round_trip_identity_property():
    rng = np.random.RandomState(42)
    for geom in random_geometries(rng, 5):
        for _ in range(200):
            vx, vy, om = rng.uniform(-10.0, 10.0, size=3)
            v = BodyVelocity(vx, vy, om)
            back = forward_kinematics(inverse_kinematics(v, geom), geom)
            assert abs(back.vx - vx) < 1e-9
            assert abs(back.vy - vy) < 1e-9
            assert abs(back.omega - om) < 1e-9


def test_forward_linearity():
    rng = np.random.RandomState(3)
    for _ in range(100):
        w1 = rng.uniform(-10, 10, size=4)
        w2 = rng.uniform(-10, 10, size=4)
        a, b = rng.uniform(-3, 3, size=2)
        lhs = forward_kinematics(WheelSpeeds(*(a * w1 + b * w2)), GEOM)
        v1 = forward_kinematics(WheelSpeeds(*w1), GEOM)
        v2 = forward_kinematics(WheelSpeeds(*w2), GEOM)
        assert abs(lhs.vx - (a * v1.vx + b * v2.vx)) < 1e-12
        assert abs(lhs.vy - (a * v1.vy + b * v2.vy)) < 1e-12
        assert abs(lhs.omega - (a * v1.omega + b * v2.omega)) < 1e-12


def test_library_matrices_match_oracle():
    np.testing.assert_allclose(np.array(forward_matrix(GEOM)), oracle_forward_matrix(GEOM), atol=1e-15)
    np.testing.assert_allclose(np.array(inverse_matrix(GEOM)), oracle_inverse_matrix(GEOM), atol=1e-15)


def test_consistency_report_default_geometry():
    report = kinematic_consistency_report(GEOM)
    assert report.passed
    assert report.residual_identity < 1e-12


def test_consistency_report_symmetric_geometry():
    geom = RobotGeometry(wheel_radius=0.1, roller_angle=math.pi / 4, d1=0.5, d2=0.5)
    report = kinematic_consistency_report(geom)
    assert report.passed


def test_consistency_report_uncorrected_composition_is_minus_r_identity():
    # Independent oracle: compose the uncorrected matrices with numpy.
    f_u = np.array(uncorrected_forward_matrix(GEOM))
    b_u = np.array(uncorrected_inverse_matrix(GEOM))
    np.testing.assert_allclose(f_u @ b_u, -GEOM.wheel_radius * np.eye(3), atol=1e-14)
    report = kinematic_consistency_report(GEOM)
    assert report.uncorrected_scale == -GEOM.wheel_radius
    assert report.residual_uncorrected < 1e-12


def test_invalid_geometry_rejected():
    with pytest.raises(ValueError):
        RobotGeometry(wheel_radius=0.127, roller_angle=0.0, d1=0.25, d2=0.30)
    with pytest.raises(ValueError):
        RobotGeometry(wheel_radius=-0.1, roller_angle=math.pi / 4, d1=0.25, d2=0.30)
    with pytest.raises(ValueError):
        RobotGeometry(wheel_radius=0.127, roller_angle=math.pi / 2, d1=0.25, d2=0.30)


def test_non_finite_inputs_rejected():
    with pytest.raises(ValueError):
        WheelSpeeds(float("nan"), 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        BodyVelocity(float("inf"), 0.0, 0.0)


def test_default_geometry_footprint():
    assert DEFAULT_GEOMETRY.footprint_length == pytest.approx(0.750)
    assert DEFAULT_GEOMETRY.footprint_width == pytest.approx(0.665)
