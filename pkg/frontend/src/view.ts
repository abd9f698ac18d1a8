// Canvas renderer for the operator view: arena, obstacles, goal, robot
// footprint, dead-zone with its four directional squares, the gaze sphere,
// a force arrow, and the HUD. Rendering is decoupled from the publish rate;
// a draw failure must never interrupt publishing, so render() swallows
// nothing and touches no network state.

import { worldToScreen } from "./transform.js";
import type { Camera } from "./transform.js";
import type { RectSpec, ViewState } from "./state.js";

const COLORS = {
  arena: "#10151c",
  grid: "#1d2531",
  obstacle: "#4a5568",
  goal: "rgba(72, 187, 120, 0.35)",
  goalEdge: "#48bb78",
  robot: "#63b3ed",
  deadzone: "rgba(237, 100, 100, 0.25)",
  deadzoneEdge: "#ed6464",
  band: "rgba(236, 201, 75, 0.12)",
  bandActive: "rgba(236, 201, 75, 0.45)",
  bandEdge: "#ecc94b",
  gaze: "#ffffff",
  force: "#f56565",
  text: "#e2e8f0",
};

function drawRect(ctx: CanvasRenderingContext2D, cam: Camera, rect: RectSpec, fill: string, edge?: string): void {
  const a = worldToScreen(cam, rect.x_min, rect.y_max);
  const b = worldToScreen(cam, rect.x_max, rect.y_min);
  ctx.fillStyle = fill;
  ctx.fillRect(a.x, a.y, b.x - a.x, b.y - a.y);
  if (edge) {
    ctx.strokeStyle = edge;
    ctx.lineWidth = 1.5;
    ctx.strokeRect(a.x, a.y, b.x - a.x, b.y - a.y);
  }
}

// Directional band rectangles in the robot frame, matching the controller's
// region layout: longitudinal bands ahead/behind, lateral bands either side.
function bandRects(halfL: number, halfW: number, extent: number): { name: string; x0: number; y0: number; x1: number; y1: number }[] {
  return [
    { name: "up", x0: halfL, y0: -halfW, x1: halfL + extent, y1: halfW },
    { name: "down", x0: -halfL - extent, y0: -halfW, x1: -halfL, y1: halfW },
    { name: "left", x0: -halfL, y0: halfW, x1: halfL, y1: halfW + extent },
    { name: "right", x0: -halfL, y0: -halfW - extent, x1: halfL, y1: -halfW },
  ];
}

function activeBand(state: ViewState): string | null {
  const gaze = state.lastGaze;
  const pose = state.pose;
  if (!gaze || !gaze.valid || !pose) return null;
  const c = Math.cos(pose.theta);
  const s = Math.sin(pose.theta);
  const dxw = gaze.x - pose.x;
  const dyw = gaze.y - pose.y;
  const dx = c * dxw + s * dyw;
  const dy = -s * dxw + c * dyw;
  const halfL = state.scenario.intent.deadzone_length_m / 2;
  const halfW = state.scenario.intent.deadzone_width_m / 2;
  const extent = state.scenario.intent.region_extent_m;
  if (Math.abs(dx) <= halfL && Math.abs(dy) <= halfW) return "deadzone";
  if (Math.abs(dy) <= halfW && dx > halfL && dx <= halfL + extent) return "up";
  if (Math.abs(dy) <= halfW && dx < -halfL && dx >= -halfL - extent) return "down";
  if (Math.abs(dx) <= halfL && dy > halfW && dy <= halfW + extent) return "left";
  if (Math.abs(dx) <= halfL && dy < -halfW && dy >= -halfW - extent) return "right";
  return null;
}

function drawRobotFrame(ctx: CanvasRenderingContext2D, state: ViewState): void {
  const pose = state.pose ?? { ...state.scenario.world.start_pose, stamp: 0 };
  const cam = state.camera;
  const center = worldToScreen(cam, pose.x, pose.y);
  ctx.save();
  ctx.translate(center.x, center.y);
  ctx.rotate(-pose.theta); // screen y is flipped

  const m2px = cam.scale;
  const halfL = (state.scenario.robot.footprint_length_m / 2) * m2px;
  const halfW = (state.scenario.robot.footprint_width_m / 2) * m2px;
  const dzHalfL = (state.scenario.intent.deadzone_length_m / 2) * m2px;
  const dzHalfW = (state.scenario.intent.deadzone_width_m / 2) * m2px;
  const extent = state.scenario.intent.region_extent_m * m2px;

  const active = activeBand(state);
  for (const band of bandRects(dzHalfL, dzHalfW, extent)) {
    ctx.fillStyle = band.name === active ? COLORS.bandActive : COLORS.band;
    // robot frame: x forward maps to screen +x here, y left maps to screen -y
    ctx.fillRect(band.x0, -band.y1, band.x1 - band.x0, band.y1 - band.y0);
    ctx.strokeStyle = COLORS.bandEdge;
    ctx.lineWidth = 0.5;
    ctx.strokeRect(band.x0, -band.y1, band.x1 - band.x0, band.y1 - band.y0);
  }

  ctx.fillStyle = active === "deadzone" ? "rgba(237,100,100,0.45)" : COLORS.deadzone;
  ctx.fillRect(-dzHalfL, -dzHalfW, 2 * dzHalfL, 2 * dzHalfW);
  ctx.strokeStyle = COLORS.deadzoneEdge;
  ctx.lineWidth = 1.5;
  ctx.strokeRect(-dzHalfL, -dzHalfW, 2 * dzHalfL, 2 * dzHalfW);

  ctx.fillStyle = COLORS.robot;
  ctx.fillRect(-halfL, -halfW, 2 * halfL, 2 * halfW);
  ctx.strokeStyle = "#2b6cb0";
  ctx.beginPath();
  ctx.moveTo(0, 0);
  ctx.lineTo(halfL, 0);
  ctx.lineWidth = 2;
  ctx.stroke();

  ctx.restore();
}

function drawForceArrow(ctx: CanvasRenderingContext2D, state: ViewState): void {
  const force = state.force;
  const pose = state.pose;
  if (!force || !pose || (force.fx === 0 && force.fy === 0)) return;
  const cam = state.camera;
  const start = worldToScreen(cam, pose.x, pose.y);
  // Force is in the robot frame; rotate into the world for display.
  const c = Math.cos(pose.theta);
  const s = Math.sin(pose.theta);
  const fxw = c * force.fx - s * force.fy;
  const fyw = s * force.fx + c * force.fy;
  const px = fxw * cam.scale * 0.08; // 0.08 m per newton, display only
  const py = -fyw * cam.scale * 0.08;
  ctx.strokeStyle = COLORS.force;
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(start.x, start.y);
  ctx.lineTo(start.x + px, start.y + py);
  ctx.stroke();
}

export function render(ctx: CanvasRenderingContext2D, state: ViewState): void {
  const cam = state.camera;
  ctx.fillStyle = COLORS.arena;
  ctx.fillRect(0, 0, cam.width, cam.height);

  const bounds = state.scenario.world.bounds;
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  for (let gx = Math.ceil(bounds.x_min); gx <= bounds.x_max; gx++) {
    const a = worldToScreen(cam, gx, bounds.y_min);
    const b = worldToScreen(cam, gx, bounds.y_max);
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }
  for (let gy = Math.ceil(bounds.y_min); gy <= bounds.y_max; gy++) {
    const a = worldToScreen(cam, bounds.x_min, gy);
    const b = worldToScreen(cam, bounds.x_max, gy);
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }
  const tl = worldToScreen(cam, bounds.x_min, bounds.y_max);
  const br = worldToScreen(cam, bounds.x_max, bounds.y_min);
  ctx.strokeStyle = "#718096";
  ctx.lineWidth = 2;
  ctx.strokeRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);

  drawRect(ctx, cam, state.scenario.world.goal_region, COLORS.goal, COLORS.goalEdge);
  for (const obstacle of state.scenario.world.obstacles) {
    drawRect(ctx, cam, obstacle, COLORS.obstacle);
  }

  drawRobotFrame(ctx, state);
  drawForceArrow(ctx, state);

  // Gaze sphere: drawn from the last transmitted sample, never from raw
  // pointer state, so the view shows exactly what the robot was told.
  const gaze = state.lastGaze;
  if (gaze && gaze.valid) {
    const g = worldToScreen(cam, gaze.x, gaze.y);
    ctx.fillStyle = COLORS.gaze;
    ctx.beginPath();
    ctx.arc(g.x, g.y, 6, 0, 2 * Math.PI);
    ctx.fill();
    ctx.strokeStyle = "#a0aec0";
    ctx.stroke();
  }

  ctx.fillStyle = COLORS.text;
  ctx.font = "13px system-ui, sans-serif";
  const v = state.velocity;
  const f = state.force;
  const lines = [
    `${state.connected ? "connected" : "DISCONNECTED"} | mode: ${state.mode} | D = ${state.damping} N*s/m`,
    `v = (${v ? v.vx.toFixed(3) : "-"}, ${v ? v.vy.toFixed(3) : "-"}) m/s   F = (${f ? f.fx.toFixed(1) : "-"}, ${f ? f.fy.toFixed(1) : "-"}) N`,
    state.goalTime !== null
      ? `GOAL REACHED in ${state.goalTime.toFixed(2)} s`
      : `elapsed ${state.elapsed.toFixed(1)} s`,
  ];
  lines.forEach((line, i) => ctx.fillText(line, 12, 20 + 18 * i));
  if (state.statusText) {
    ctx.fillText(state.statusText, 12, cam.height - 12);
  }

  if (state.goalTime !== null) {
    ctx.fillStyle = "rgba(72, 187, 120, 0.85)";
    ctx.fillRect(cam.width / 2 - 130, 40, 260, 44);
    ctx.fillStyle = "#0c1117";
    ctx.font = "bold 18px system-ui, sans-serif";
    ctx.fillText(`Goal in ${state.goalTime.toFixed(2)} s`, cam.width / 2 - 70, 68);
  }
}
