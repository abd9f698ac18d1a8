// Fixed-rate gaze publisher. The pointer may move arbitrarily often; only
// its latest position at each tick is transmitted (latest wins, no backlog).
// Publishes valid=false while the pointer is off the canvas or the window
// has lost focus, so the robot decays to rest through the hold timeout.

import type { GazeMsg } from "./protocol.js";

export type PointerSource = () => { x: number; y: number } | null;

export interface SamplerOptions {
  rateHz?: number;
  now?: () => number; // monotonic seconds
}

export class GazeSampler {
  readonly periodMs: number;
  private readonly send: (msg: GazeMsg) => void;
  private readonly pointer: PointerSource;
  private readonly now: () => number;
  private timer: ReturnType<typeof setInterval> | null = null;
  private focused = true;
  private last: GazeMsg | null = null;
  private sent = 0;

  constructor(send: (msg: GazeMsg) => void, pointer: PointerSource, options: SamplerOptions = {}) {
    this.send = send;
    this.pointer = pointer;
    this.periodMs = 1000 / (options.rateHz ?? 30);
    this.now = options.now ?? (() => performance.now() / 1000);
  }

  get lastSample(): GazeMsg | null {
    return this.last;
  }

  get publishCount(): number {
    return this.sent;
  }

  setFocused(focused: boolean): void {
    this.focused = focused;
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => this.tick(), this.periodMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  // One sampling instant: read the current pointer, stamp, transmit.
  tick(): void {
    const stamp = this.now();
    const point = this.focused ? this.pointer() : null;
    const msg: GazeMsg =
      point === null
        ? { x: 0, y: 0, valid: false, stamp }
        : { x: point.x, y: point.y, valid: true, stamp };
    this.last = msg;
    this.sent += 1;
    this.send(msg);
  }
}
