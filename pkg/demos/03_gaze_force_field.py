"""Gaze intent regions and the dead-zone force law, rendered as ASCII.

The robot sits at the origin heading +x ("up" on the operator console).
Each cell shows how a gaze point there classifies; the force table shows
the axis-projected virtual force for a few gaze points.
"""

from gaze_drive import GazeSample, IntentLayout, Pose, classify_region, compute_force

layout = IntentLayout(deadzone_length=0.750, deadzone_width=0.665, region_extent=2.0)
robot = Pose(0.0, 0.0, 0.0)

GLYPH = {
    "dead_zone": "#",
    "up": "U",
    "down": "D",
    "left": "L",
    "right": "R",
    "outside": ".",
}

print("region map (robot frame, x up the page, y to the left):")
steps = 13
span = 3.0
for i in range(steps):
    dx = span - 2 * span * i / (steps - 1)
    row = []
    for j in range(steps):
        dy = span - 2 * span * j / (steps - 1)
        region = classify_region(GazeSample(0.0, dx, dy), robot, layout)
        row.append(GLYPH[region.value])
    print("   " + " ".join(row))
print("   # dead zone, U/D/L/R directional bands, . outside\n")

print("force law (stiffness 10 N/m, center-referenced):")
for label, gx, gy in (
    ("gaze on the robot", 0.1, 0.05),
    ("1.0 m ahead", 1.0, 0.0),
    ("0.8 m left", 0.0, 0.8),
    ("1.4 m behind", -1.4, 0.0),
    ("corner (no band)", 1.5, 1.5),
    ("far outside", 50.0, 0.0),
):
    f = compute_force(GazeSample(0.0, gx, gy), robot, 10.0, layout)
    region = classify_region(GazeSample(0.0, gx, gy), robot, layout)
    print(f"  {label:20s} ({gx:+5.1f},{gy:+5.1f}) -> {region.value:10s} F=({f.fx:+6.2f}, {f.fy:+6.2f}) N")

print("\nnote the axis projection: at most one force component is ever nonzero,")
print("and everything inside the dead-zone rectangle maps to exactly zero force.")
