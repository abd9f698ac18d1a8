// End-to-end against a real served simulation: spawns `gaze-drive serve`,
// holds the synthetic pointer on the robot-anchored Up square for 10 s, and
// checks the cadence, telemetry, and blur-to-rest behavior over the wire.
// Requires the Python package (gaze-drive CLI) to be installed.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { createServer } from "node:net";

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { BridgeClient } from "../src/client.js";
import type { CmdVelMsg, ForceMsg, PoseMsg } from "../src/protocol.js";
import { GazeSampler } from "../src/sampler.js";

const CORRIDOR_SCENARIO = `
schema_version: 1
name: integration-corridor
world:
  bounds: {x_min: 0.0, y_min: 0.0, x_max: 30.0, y_max: 8.0}
  obstacles: []
  start_pose: {x: 1.5, y: 1.5, theta: 0.0}
  goal_region: {x_min: 28.0, y_min: 6.0, x_max: 29.0, y_max: 7.0}
geometry: {}
intent: {}
admittance: {}
input:
  mode: live
sim: {}
`;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const port = address.port;
      srv.close(() => resolve(port));
    });
  });
}

async function waitForServer(port: number, timeoutMs = 8000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`http://127.0.0.1:${port}/scenario.json`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("serve did not come up in time");
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

describe("live console pipeline", () => {
  let proc: ChildProcess;
  let port: number;

  beforeAll(async () => {
    port = await freePort();
    const dir = mkdtempSync(join(tmpdir(), "gaze-console-"));
    const scenarioPath = join(dir, "corridor.yaml");
    writeFileSync(scenarioPath, CORRIDOR_SCENARIO);
    proc = spawn("gaze-drive", ["serve", "--port", String(port), "--scenario", scenarioPath], {
      stdio: "ignore",
    });
    await waitForServer(port);
  }, 20000);

  afterAll(async () => {
    proc.kill("SIGINT");
    await sleep(500);
    proc.kill("SIGKILL");
  });

  it(
    "holds gaze on the Up square: 30 +- 3 Hz, fy = 0, x monotone, blur -> rest within 5 tau",
    async () => {
      const url = `ws://127.0.0.1:${port}/bridge`;
      let pose: PoseMsg | null = null;
      const xs: number[] = [];
      const fys: number[] = [];
      let cmdVel: CmdVelMsg | null = null;

      const operator = new BridgeClient(url, {
        advertise: ["/gaze"],
        subscribe: ["/robot/pose", "/telemetry/force", "/cmd_vel"],
        webSocketImpl: WebSocket as unknown as typeof globalThis.WebSocket,
        onMessage: (env) => {
          if (env.topic === "/robot/pose") {
            pose = env.msg as unknown as PoseMsg;
            xs.push(pose.x);
          } else if (env.topic === "/telemetry/force") {
            fys.push((env.msg as unknown as ForceMsg).fy);
          } else if (env.topic === "/cmd_vel") {
            cmdVel = env.msg as unknown as CmdVelMsg;
          }
        },
      });
      operator.connect();

      // Second peer just counts /gaze deliveries off the wire.
      let gazeSeen = 0;
      const observer = new BridgeClient(url, {
        advertise: [],
        subscribe: ["/gaze"],
        webSocketImpl: WebSocket as unknown as typeof globalThis.WebSocket,
        onMessage: (env) => {
          if (env.topic === "/gaze") gazeSeen += 1;
        },
      });
      observer.connect();

      await sleep(700); // connections + subscriptions settle

      // Pointer held on the Up square: a fixed lead ahead of the robot, in
      // the robot frame, exactly like the square is drawn.
      const sampler = new GazeSampler(
        (msg) => operator.publish("/gaze", { ...msg }),
        () => {
          const p = pose ?? { x: 1.5, y: 1.5, theta: 0, stamp: 0 };
          return { x: p.x + 1.2 * Math.cos(p.theta), y: p.y + 1.2 * Math.sin(p.theta) };
        },
      );

      const countBefore = sampler.publishCount;
      sampler.start();
      await sleep(10_000);
      const published = sampler.publishCount - countBefore;

      // 30 +- 3 Hz over 10 s, and the frames really crossed the wire.
      expect(published).toBeGreaterThanOrEqual(270);
      expect(published).toBeLessThanOrEqual(330);
      expect(gazeSeen).toBeGreaterThanOrEqual(250);

      // Longitudinal-only intent: every published force has fy = 0.
      expect(fys.length).toBeGreaterThan(50);
      expect(fys.every((fy) => fy === 0)).toBe(true);

      // The robot advanced monotonically along x.
      expect(xs.length).toBeGreaterThan(50);
      for (let i = 1; i < xs.length; i++) {
        expect(xs[i]).toBeGreaterThanOrEqual(xs[i - 1] - 1e-9);
      }
      expect(xs[xs.length - 1] - xs[0]).toBeGreaterThan(1.0);

      // Blur: samples go invalid, the hold times out, velocity decays to
      // rest within 5 tau (tau = 0.5 s at the default damping).
      sampler.setFocused(false);
      await sleep(2700);
      sampler.stop();
      expect(sampler.lastSample?.valid).toBe(false);
      expect(cmdVel).not.toBeNull();
      expect(Math.abs(cmdVel!.vx)).toBeLessThan(0.01);
      expect(Math.abs(cmdVel!.vy)).toBeLessThan(0.01);

      operator.close();
      observer.close();
    },
    30000,
  );
});
