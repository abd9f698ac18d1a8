// Everything the render loop needs, in one bag.

import type { Camera } from "./transform.js";
import type { CmdVelMsg, ForceMsg, GazeMsg, PoseMsg } from "./protocol.js";

export interface RectSpec {
  x_min: number;
  y_min: number;
  x_max: number;
  y_max: number;
}

export interface ScenarioInfo {
  name: string;
  world: {
    bounds: RectSpec;
    obstacles: RectSpec[];
    start_pose: { x: number; y: number; theta: number };
    goal_region: RectSpec;
    operator_offset_m: number;
  };
  robot: { footprint_length_m: number; footprint_width_m: number };
  intent: {
    deadzone_length_m: number;
    deadzone_width_m: number;
    region_extent_m: number;
    stiffness_n_per_m: number;
  };
  admittance: { virtual_mass_kg: number; damping_ns_per_m: number; v_max_mps: number };
}

export type InputMode = "gaze" | "joystick";

export interface ViewState {
  camera: Camera;
  scenario: ScenarioInfo;
  connected: boolean;
  mode: InputMode;
  pose: PoseMsg | null;
  force: ForceMsg | null;
  velocity: CmdVelMsg | null;
  lastGaze: GazeMsg | null; // exactly what was last transmitted
  damping: number;
  elapsed: number; // seconds since session start
  goalTime: number | null; // frozen timer once the goal is entered
  statusText: string;
}
