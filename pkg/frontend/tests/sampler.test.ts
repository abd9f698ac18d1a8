// Gaze sampler cadence and latest-wins semantics, on fake timers.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { GazeMsg } from "../src/protocol.js";
import { GazeSampler } from "../src/sampler.js";

describe("gaze sampler", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("publishes at 30 Hz over 10 seconds", () => {
    const sent: GazeMsg[] = [];
    const sampler = new GazeSampler((m) => sent.push(m), () => ({ x: 1, y: 2 }));
    sampler.start();
    vi.advanceTimersByTime(10_000);
    sampler.stop();
    expect(sent.length).toBeGreaterThanOrEqual(270);
    expect(sent.length).toBeLessThanOrEqual(330);
    expect(sent.every((m) => m.valid && m.x === 1 && m.y === 2)).toBe(true);
  });

  it("transmits only the latest pointer position per tick", () => {
    const sent: GazeMsg[] = [];
    let point = { x: 0, y: 0 };
    const sampler = new GazeSampler((m) => sent.push(m), () => point);
    sampler.start();
    // Many pointer moves between ticks; only the value at the tick goes out.
    for (let i = 1; i <= 10; i++) {
      point = { x: i, y: 0 };
    }
    vi.advanceTimersByTime(34);
    sampler.stop();
    expect(sent.length).toBe(1);
    expect(sent[0].x).toBe(10);
    expect(sampler.lastSample).toEqual(sent[0]);
  });

  it("publishes valid=false when the pointer leaves or focus is lost", () => {
    const sent: GazeMsg[] = [];
    let onCanvas = true;
    const sampler = new GazeSampler(
      (m) => sent.push(m),
      () => (onCanvas ? { x: 3, y: 4 } : null),
    );
    sampler.start();
    vi.advanceTimersByTime(100); // ~3 valid samples
    onCanvas = false;
    vi.advanceTimersByTime(100); // off-canvas -> invalid
    onCanvas = true;
    sampler.setFocused(false);
    vi.advanceTimersByTime(100); // blurred -> invalid even on canvas
    sampler.stop();

    const validCount = sent.filter((m) => m.valid).length;
    const invalidCount = sent.filter((m) => !m.valid).length;
    expect(validCount).toBeGreaterThanOrEqual(2);
    expect(invalidCount).toBeGreaterThanOrEqual(4);
    expect(sent[sent.length - 1].valid).toBe(false);
  });

  it("stamps monotonically", () => {
    const sent: GazeMsg[] = [];
    let t = 0;
    const sampler = new GazeSampler((m) => sent.push(m), () => ({ x: 0, y: 0 }), {
      now: () => (t += 1 / 30),
    });
    sampler.start();
    vi.advanceTimersByTime(1000);
    sampler.stop();
    const stamps = sent.map((m) => m.stamp);
    expect([...stamps].sort((a, b) => a - b)).toEqual(stamps);
  });
});
