"""Mecanum kinematics walkthrough.

Maps a few body velocities to wheel speeds and back, then shows the
consistency audit: the canonical forward/inverse pair composes to the
identity, while the commonly transcribed pair composes to -R * I.
"""

import math

from gaze_drive import (
    DEFAULT_GEOMETRY,
    BodyVelocity,
    WheelSpeeds,
    forward_kinematics,
    inverse_kinematics,
    kinematic_consistency_report,
)

geom = DEFAULT_GEOMETRY
print(f"geometry: R={geom.wheel_radius} m, alpha={math.degrees(geom.roller_angle):.0f} deg, "
      f"d1={geom.d1} m, d2={geom.d2} m")

print("\nbody velocity -> wheel speeds (rad/s), order FL FR RL RR")
for v in (
    BodyVelocity(0.5, 0.0, 0.0),   # straight ahead
    BodyVelocity(0.0, 0.3, 0.0),   # strafe left
    BodyVelocity(0.0, 0.0, 1.0),   # spin in place
    BodyVelocity(0.3, 0.2, 0.5),   # everything at once
):
    w = inverse_kinematics(v, geom)
    back = forward_kinematics(w, geom)
    ws = "  ".join(f"{wi:+7.3f}" for wi in w.as_tuple())
    print(f"  v=({v.vx:+.2f},{v.vy:+.2f},{v.omega:+.2f})  ->  [{ws}]  "
          f"-> back=({back.vx:+.2f},{back.vy:+.2f},{back.omega:+.2f})")

print("\nwheel patterns -> body velocity")
for w in (
    WheelSpeeds(2.0, 2.0, 2.0, 2.0),     # all equal: pure longitudinal
    WheelSpeeds(-2.0, 2.0, 2.0, -2.0),   # anti-symmetric: pure yaw
    WheelSpeeds(-2.0, 2.0, -2.0, 2.0),   # alternating: pure strafe
):
    v = forward_kinematics(w, geom)
    print(f"  w={w.as_tuple()} -> v=({v.vx:+.3f}, {v.vy:+.3f}, {v.omega:+.3f})")

report = kinematic_consistency_report(geom)
print(f"\nconsistency report:")
print(f"  canonical forward o inverse vs identity: residual {report.residual_identity:.2e} "
      f"-> {'PASS' if report.passed else 'FAIL'}")
print(f"  uncorrected pair composes to {report.uncorrected_scale:+.3f} * I "
      f"(residual {report.residual_uncorrected:.2e}); the canonical maps add the "
      f"missing 1/R and sign fixes")
