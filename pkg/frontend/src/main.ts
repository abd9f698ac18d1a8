// Console entry point: wires the canvas, pointer, keyboard joystick, damping
// selector, and the bridge connection together.
//
//   gaze mode     pointer on the canvas is the gaze point, streamed at 30 Hz
//   joystick mode arrow keys / WASD publish /joy at the same cadence
//
// The bridge endpoint defaults to ws://<host>/bridge on the serving origin
// and can be overridden with ?bridge=ws://host:port/bridge.

import { BridgeClient } from "./client.js";
import type { Envelope, CmdVelMsg, ForceMsg, GazeMsg, PoseMsg } from "./protocol.js";
import { GazeSampler } from "./sampler.js";
import { fitCamera, onCanvas, screenToWorld } from "./transform.js";
import { render } from "./view.js";
import type { InputMode, ScenarioInfo, ViewState } from "./state.js";

const FALLBACK_SCENARIO: ScenarioInfo = {
  name: "default-course",
  world: {
    bounds: { x_min: 0, y_min: 0, x_max: 12, y_max: 8 },
    obstacles: [
      { x_min: 3.0, y_min: 0.0, x_max: 3.6, y_max: 5.2 },
      { x_min: 7.2, y_min: 2.8, x_max: 7.8, y_max: 8.0 },
      { x_min: 8.5, y_min: 3.0, x_max: 9.1, y_max: 5.5 },
    ],
    start_pose: { x: 1.5, y: 1.5, theta: 0 },
    goal_region: { x_min: 10, y_min: 6, x_max: 11, y_max: 7 },
    operator_offset_m: 0.5,
  },
  robot: { footprint_length_m: 0.75, footprint_width_m: 0.665 },
  intent: { deadzone_length_m: 0.75, deadzone_width_m: 0.665, region_extent_m: 2.0, stiffness_n_per_m: 10 },
  admittance: { virtual_mass_kg: 10, damping_ns_per_m: 20, v_max_mps: 0.5 },
};

function bridgeUrl(): string {
  const override = new URLSearchParams(window.location.search).get("bridge");
  if (override) return override;
  const proto = window.location.protocol === "https:" ? "wss:" : "ws:";
  return `${proto}//${window.location.host}/bridge`;
}

function scenarioUrl(): string {
  return bridgeUrl().replace(/^ws/, "http").replace(/\/bridge$/, "/scenario.json");
}

async function loadScenario(): Promise<ScenarioInfo> {
  try {
    const resp = await fetch(scenarioUrl());
    if (!resp.ok) throw new Error(`HTTP ${resp.status}`);
    return (await resp.json()) as ScenarioInfo;
  } catch (err) {
    console.warn("scenario.json unavailable, using bundled defaults:", err);
    return FALLBACK_SCENARIO;
  }
}

async function start(): Promise<void> {
  const canvas = document.getElementById("arena") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const scenario = await loadScenario();

  const state: ViewState = {
    camera: fitCamera(scenario.world.bounds, canvas.width, canvas.height),
    scenario,
    connected: false,
    mode: "gaze",
    pose: null,
    force: null,
    velocity: null,
    lastGaze: null,
    damping: scenario.admittance.damping_ns_per_m,
    elapsed: 0,
    goalTime: null,
    statusText: "connecting...",
  };
  const startedAt = performance.now();

  const client = new BridgeClient(bridgeUrl(), {
    advertise: ["/gaze", "/joy", "/control/params"],
    subscribe: ["/robot/pose", "/telemetry/force", "/cmd_vel"],
    onStatus: (connected) => {
      state.connected = connected;
      state.statusText = connected ? "" : "disconnected, retrying...";
    },
    onMessage: (env: Envelope) => {
      if (env.topic === "/robot/pose") {
        state.pose = env.msg as unknown as PoseMsg;
        const g = scenario.world.goal_region;
        const p = state.pose;
        if (
          state.goalTime === null &&
          p.x >= g.x_min && p.x <= g.x_max && p.y >= g.y_min && p.y <= g.y_max
        ) {
          state.goalTime = state.elapsed; // freeze the timer at goal entry
        }
      } else if (env.topic === "/telemetry/force") {
        state.force = env.msg as unknown as ForceMsg;
      } else if (env.topic === "/cmd_vel") {
        state.velocity = env.msg as unknown as CmdVelMsg;
      }
    },
    onProtocolError: (message) => {
      state.statusText = message;
    },
  });
  client.connect();

  // Pointer tracking in screen space; converted to world at each 30 Hz tick.
  let pointerScreen: { x: number; y: number } | null = null;
  canvas.addEventListener("pointermove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    pointerScreen = { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  });
  canvas.addEventListener("pointerleave", () => {
    pointerScreen = null;
  });

  const sampler = new GazeSampler(
    (msg: GazeMsg) => {
      state.lastGaze = msg;
      if (state.mode === "gaze") client.publish("/gaze", { ...msg });
    },
    () => {
      if (pointerScreen === null || !onCanvas(state.camera, pointerScreen.x, pointerScreen.y)) {
        return null;
      }
      return screenToWorld(state.camera, pointerScreen.x, pointerScreen.y);
    },
    { rateHz: 30 },
  );
  sampler.start();
  window.addEventListener("blur", () => sampler.setFocused(false));
  window.addEventListener("focus", () => sampler.setFocused(true));

  // Keyboard joystick: arrows/WASD for x/y, Q/E for yaw.
  const held = new Set<string>();
  window.addEventListener("keydown", (ev) => held.add(ev.key.toLowerCase()));
  window.addEventListener("keyup", (ev) => held.delete(ev.key.toLowerCase()));
  setInterval(() => {
    if (state.mode !== "joystick") return;
    const axisX = (held.has("arrowup") || held.has("w") ? 1 : 0) - (held.has("arrowdown") || held.has("s") ? 1 : 0);
    const axisY = (held.has("arrowleft") || held.has("a") ? 1 : 0) - (held.has("arrowright") || held.has("d") ? 1 : 0);
    const axisYaw = (held.has("q") ? 1 : 0) - (held.has("e") ? 1 : 0);
    client.publish("/joy", { axis_x: axisX, axis_y: axisY, axis_yaw: axisYaw, stamp: client.stampNow() });
  }, 1000 / 30);

  // Mode toggle and damping selector; each change sends exactly one message.
  const modeSelect = document.getElementById("mode") as HTMLSelectElement;
  modeSelect.addEventListener("change", () => {
    state.mode = modeSelect.value as InputMode;
  });
  for (const button of document.querySelectorAll<HTMLButtonElement>("button[data-damping]")) {
    button.addEventListener("click", () => {
      const value = Number(button.dataset.damping);
      state.damping = value;
      client.sendDamping(value);
    });
  }
  const customDamping = document.getElementById("damping-custom") as HTMLInputElement;
  customDamping.addEventListener("change", () => {
    const value = Number(customDamping.value);
    if (Number.isFinite(value) && value > 0) {
      state.damping = value;
      client.sendDamping(value);
    }
  });

  function frame(): void {
    state.elapsed = (performance.now() - startedAt) / 1000;
    render(ctx, state);
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

start();
