"""Forward and inverse kinematics for a four-mecanum-wheel platform.

Conventions used throughout the package:

* Body frame: x forward (operator "up/down"), y left (operator
  "left/right"), yaw positive counter-clockwise.
* Wheel order: front-left, front-right, rear-left, rear-right.
* The forward and inverse maps are canonicalized so that they are exact
  inverses of each other: equal wheel speeds w0 on all four wheels produce
  a pure longitudinal velocity vx = R * w0, and the anti-symmetric pattern
  (-w0, +w0, +w0, -w0) produces pure yaw.

Commonly published transcriptions of these matrices carry a global -R/4
factor on the forward map and omit the 1/R factor on the inverse map, so
that the two compose to -R * I instead of the identity.
``consistency_report`` documents both compositions numerically; see
``uncorrected_forward_matrix`` / ``uncorrected_inverse_matrix`` for the
uncorrected pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "RobotGeometry",
    "BodyVelocity",
    "WheelSpeeds",
    "ConsistencyReport",
    "forward_kinematics",
    "inverse_kinematics",
    "forward_matrix",
    "inverse_matrix",
    "uncorrected_forward_matrix",
    "uncorrected_inverse_matrix",
    "kinematic_consistency_report",
]


@dataclass(frozen=True, slots=True)
class RobotGeometry:
    """Physical constants of the mecanum platform.

    wheel_radius: wheel radius R in meters.
    roller_angle: angle between wheel axis and roller, radians,
        strictly inside (0, pi/2) so tan and cot are finite and nonzero.
    d1, d2: distances from the robot center to the wheel contact point
        along the longitudinal and lateral axes, meters.
    footprint_length, footprint_width: outer bounding box of the chassis,
        meters. Used for collision checks and the gaze dead-zone default.
    """

    wheel_radius: float
    roller_angle: float
    d1: float
    d2: float
    footprint_length: float = 0.750
    footprint_width: float = 0.665

    def __post_init__(self) -> None:
        for name in ("wheel_radius", "d1", "d2", "footprint_length", "footprint_width"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"invalid geometry: {name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.roller_angle) and 0.0 < self.roller_angle < math.pi / 2):
            raise ValueError(
                f"invalid geometry: roller_angle must lie strictly in (0, pi/2), got {self.roller_angle!r}"
            )

    @property
    def lever_arm(self) -> float:
        """d1 + d2 * cot(alpha), the yaw coupling distance."""
        return self.d1 + self.d2 / math.tan(self.roller_angle)


#: Summit-XL-class defaults. The chassis footprint (0.750 x 0.665 m) is the
#: manufacturer value; wheel radius and axle offsets are plausible values for
#: this robot class and are configuration-overridable.
DEFAULT_GEOMETRY = RobotGeometry(
    wheel_radius=0.127,
    roller_angle=math.pi / 4,
    d1=0.25,
    d2=0.30,
)


@dataclass(frozen=True, slots=True)
class BodyVelocity:
    """Planar body twist: vx, vy in m/s, omega in rad/s."""

    vx: float
    vy: float
    omega: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.vx) and math.isfinite(self.vy) and math.isfinite(self.omega)):
            raise ValueError(f"invalid input: non-finite body velocity ({self.vx}, {self.vy}, {self.omega})")

    @property
    def planar_speed_inf(self) -> float:
        """Infinity norm of the translational components."""
        return max(abs(self.vx), abs(self.vy))


ZERO_VELOCITY = BodyVelocity(0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class WheelSpeeds:
    """Angular speed of each wheel in rad/s."""

    front_left: float
    front_right: float
    rear_left: float
    rear_right: float

    def __post_init__(self) -> None:
        for w in self.as_tuple():
            if not math.isfinite(w):
                raise ValueError(f"invalid input: non-finite wheel speed in {self.as_tuple()!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.front_left, self.front_right, self.rear_left, self.rear_right)


@dataclass(frozen=True, slots=True)
class ConsistencyReport:
    """Numerical audit of the kinematic maps for one geometry.

    residual_identity: max entrywise |forward @ inverse - I| for the
        canonical pair (should be ~1e-16).
    residual_uncorrected: max entrywise |F_u @ B_u - (-R * I)| for the
        uncorrected matrices, documenting that the uncorrected pair
        composes to -R times the identity rather than the identity.
    passed: True iff residual_identity < tolerance.
    """

    residual_identity: float
    residual_uncorrected: float
    uncorrected_scale: float
    tolerance: float
    passed: bool


def forward_kinematics(wheels: WheelSpeeds, geom: RobotGeometry) -> BodyVelocity:
    """Map wheel angular speeds to the body twist.

    The component sums are written so that symmetric wheel patterns cancel
    exactly in floating point: equal speeds give vy = omega = 0.0 and the
    anti-symmetric yaw pattern gives vx = vy = 0.0.
    """
    w1, w2, w3, w4 = wheels.as_tuple()
    r4 = geom.wheel_radius / 4.0
    t = math.tan(geom.roller_angle)
    k = geom.lever_arm
    vx = r4 * (w1 + w2 + w3 + w4)
    vy = r4 * t * (-w1 + w2 - w3 + w4)
    omega = r4 / k * (-w1 + w2 + w3 - w4)
    return BodyVelocity(vx, vy, omega)


def inverse_kinematics(v: BodyVelocity, geom: RobotGeometry) -> WheelSpeeds:
    """Map a body twist to the four wheel angular speeds.

    Includes the 1/R scale factor so that
    forward_kinematics(inverse_kinematics(v)) == v.
    """
    r = geom.wheel_radius
    c = 1.0 / math.tan(geom.roller_angle)
    k = geom.lever_arm
    cy = c * v.vy
    kw = k * v.omega
    return WheelSpeeds(
        front_left=(v.vx - cy - kw) / r,
        front_right=(v.vx + cy + kw) / r,
        rear_left=(v.vx - cy + kw) / r,
        rear_right=(v.vx + cy - kw) / r,
    )


def forward_matrix(geom: RobotGeometry) -> list[list[float]]:
    """3x4 canonical forward matrix M with (vx, vy, omega) = M @ w."""
    r4 = geom.wheel_radius / 4.0
    t = math.tan(geom.roller_angle)
    k = geom.lever_arm
    return [
        [r4, r4, r4, r4],
        [-r4 * t, r4 * t, -r4 * t, r4 * t],
        [-r4 / k, r4 / k, r4 / k, -r4 / k],
    ]


def inverse_matrix(geom: RobotGeometry) -> list[list[float]]:
    """4x3 canonical inverse matrix N with w = N @ (vx, vy, omega)."""
    r = geom.wheel_radius
    c = 1.0 / math.tan(geom.roller_angle)
    k = geom.lever_arm
    return [
        [1.0 / r, -c / r, -k / r],
        [1.0 / r, c / r, k / r],
        [1.0 / r, -c / r, k / r],
        [1.0 / r, c / r, -k / r],
    ]


def uncorrected_forward_matrix(geom: RobotGeometry) -> list[list[float]]:
    """The commonly transcribed forward matrix with its -R/4 prefactor.

    Row order (vx, vy, omega) with the all-ones row on vy; kept verbatim so
    the consistency report can exhibit the -R * I composition.
    """
    s = -geom.wheel_radius / 4.0
    t = math.tan(geom.roller_angle)
    ell = 1.0 / geom.lever_arm
    return [
        [-s * t, s * t, -s * t, s * t],
        [s, s, s, s],
        [s * ell, -s * ell, -s * ell, s * ell],
    ]


def uncorrected_inverse_matrix(geom: RobotGeometry) -> list[list[float]]:
    """The commonly transcribed inverse matrix, lacking the 1/R factor."""
    c = 1.0 / math.tan(geom.roller_angle)
    k = geom.lever_arm
    return [
        [-c, 1.0, k],
        [c, 1.0, -k],
        [-c, 1.0, -k],
        [c, 1.0, k],
    ]


def _matmul(a: list[list[float]], b: list[list[float]]) -> list[list[float]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    assert all(len(row) == inner for row in a)
    return [
        [sum(a[i][m] * b[m][j] for m in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def kinematic_consistency_report(geom: RobotGeometry, tolerance: float = 1e-12) -> ConsistencyReport:
    """Verify that forward and inverse maps compose to the identity.

    Also composes the uncorrected matrix pair and measures its distance to
    -R * I, recording the scale discrepancy that the canonical maps fix.
    """
    comp = _matmul(forward_matrix(geom), inverse_matrix(geom))
    residual = max(
        abs(comp[i][j] - (1.0 if i == j else 0.0)) for i in range(3) for j in range(3)
    )

    comp_u = _matmul(uncorrected_forward_matrix(geom), uncorrected_inverse_matrix(geom))
    scale = -geom.wheel_radius
    residual_u = max(
        abs(comp_u[i][j] - (scale if i == j else 0.0)) for i in range(3) for j in range(3)
    )

    return ConsistencyReport(
        residual_identity=residual,
        residual_uncorrected=residual_u,
        uncorrected_scale=scale,
        tolerance=tolerance,
        passed=residual < tolerance,
    )
