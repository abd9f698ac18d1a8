// World <-> screen mapping for the top-down arena view.
// World: meters, x right, y up. Screen: pixels, y down, origin top-left.

export interface Camera {
  centerX: number; // world point at the canvas center, meters
  centerY: number;
  scale: number; // pixels per meter, > 0
  width: number; // canvas size, pixels
  height: number;
}

export interface Bounds {
  x_min: number;
  y_min: number;
  x_max: number;
  y_max: number;
}

export function fitCamera(bounds: Bounds, width: number, height: number, marginPx = 20): Camera {
  const spanX = bounds.x_max - bounds.x_min;
  const spanY = bounds.y_max - bounds.y_min;
  const scale = Math.min((width - 2 * marginPx) / spanX, (height - 2 * marginPx) / spanY);
  return {
    centerX: (bounds.x_min + bounds.x_max) / 2,
    centerY: (bounds.y_min + bounds.y_max) / 2,
    scale,
    width,
    height,
  };
}

export function worldToScreen(cam: Camera, wx: number, wy: number): { x: number; y: number } {
  return {
    x: cam.width / 2 + (wx - cam.centerX) * cam.scale,
    y: cam.height / 2 - (wy - cam.centerY) * cam.scale,
  };
}

export function screenToWorld(cam: Camera, sx: number, sy: number): { x: number; y: number } {
  return {
    x: cam.centerX + (sx - cam.width / 2) / cam.scale,
    y: cam.centerY - (sy - cam.height / 2) / cam.scale,
  };
}

export function onCanvas(cam: Camera, sx: number, sy: number): boolean {
  return sx >= 0 && sx <= cam.width && sy >= 0 && sy <= cam.height;
}
