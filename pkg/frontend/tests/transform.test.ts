// Screen <-> world mapping: identity round trips within one pixel equivalent.

import { describe, expect, it } from "vitest";

import { fitCamera, screenToWorld, worldToScreen } from "../src/transform.js";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const BOUNDS = { x_min: 0, y_min: 0, x_max: 12, y_max: 8 };

describe("camera transforms", () => {
  it("fits the arena inside the canvas", () => {
    const cam = fitCamera(BOUNDS, 960, 640, 20);
    const tl = worldToScreen(cam, BOUNDS.x_min, BOUNDS.y_max);
    const br = worldToScreen(cam, BOUNDS.x_max, BOUNDS.y_min);
    expect(tl.x).toBeGreaterThanOrEqual(0);
    expect(tl.y).toBeGreaterThanOrEqual(0);
    expect(br.x).toBeLessThanOrEqual(960);
    expect(br.y).toBeLessThanOrEqual(640);
  });

  it("maps world +y to screen up", () => {
    const cam = fitCamera(BOUNDS, 960, 640);
    const low = worldToScreen(cam, 6, 1);
    const high = worldToScreen(cam, 6, 7);
    expect(high.y).toBeLessThan(low.y);
  });

  it("round-trips 1000 random points within one pixel equivalent", () => {
    const cam = fitCamera(BOUNDS, 960, 640);
    const rand = mulberry32(42);
    const pixelInMeters = 1 / cam.scale;
    for (let i = 0; i < 1000; i++) {
      const wx = BOUNDS.x_min + rand() * (BOUNDS.x_max - BOUNDS.x_min);
      const wy = BOUNDS.y_min + rand() * (BOUNDS.y_max - BOUNDS.y_min);
      const s = worldToScreen(cam, wx, wy);
      const back = screenToWorld(cam, s.x, s.y);
      expect(Math.abs(back.x - wx)).toBeLessThan(pixelInMeters);
      expect(Math.abs(back.y - wy)).toBeLessThan(pixelInMeters);

      const sx = rand() * 960;
      const sy = rand() * 640;
      const w = screenToWorld(cam, sx, sy);
      const s2 = worldToScreen(cam, w.x, w.y);
      expect(Math.abs(s2.x - sx)).toBeLessThan(1.0);
      expect(Math.abs(s2.y - sy)).toBeLessThan(1.0);
    }
  });
});
