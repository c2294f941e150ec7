// World-to-canvas mapping for the two orthographic workspace views.
//
// Workcell axes: front=+x, back=-x, left=+y, right=-y, up=+z, down=-z.
// Top view: +x up the screen, +y to the LEFT (matching an operator
// standing behind the robot).  Side view: +x to the right, +z up.

export interface Bounds {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  zMin: number;
  zMax: number;
}

export interface Transform {
  scale: number; // px per mm, uniform
  offsetX: number;
  offsetY: number;
}

function fit(widthMm: number, heightMm: number, widthPx: number,
             heightPx: number, margin: number): number {
  const usableW = Math.max(widthPx - 2 * margin, 1);
  const usableH = Math.max(heightPx - 2 * margin, 1);
  return Math.min(usableW / widthMm, usableH / heightMm);
}

export function topTransform(bounds: Bounds, widthPx: number,
                             heightPx: number, margin = 20): Transform {
  // Screen horizontal spans world -y..+y (y grows leftward on screen),
  // screen vertical spans world x (x grows upward on screen).
  const scale = fit(bounds.yMax - bounds.yMin, bounds.xMax - bounds.xMin,
                    widthPx, heightPx, margin);
  const midY = (bounds.yMin + bounds.yMax) / 2;
  const midX = (bounds.xMin + bounds.xMax) / 2;
  return {
    scale,
    offsetX: widthPx / 2 + midY * scale,
    offsetY: heightPx / 2 + midX * scale,
  };
}

export function topPoint(t: Transform, x: number, y: number):
    [number, number] {
  return [t.offsetX - y * t.scale, t.offsetY - x * t.scale];
}

export function sideTransform(bounds: Bounds, widthPx: number,
                              heightPx: number, margin = 20): Transform {
  const scale = fit(bounds.xMax - bounds.xMin, bounds.zMax - bounds.zMin,
                    widthPx, heightPx, margin);
  const midX = (bounds.xMin + bounds.xMax) / 2;
  const midZ = (bounds.zMin + bounds.zMax) / 2;
  return {
    scale,
    offsetX: widthPx / 2 - midX * scale,
    offsetY: heightPx / 2 + midZ * scale,
  };
}

export function sidePoint(t: Transform, x: number, z: number):
    [number, number] {
  return [t.offsetX + x * t.scale, t.offsetY - z * t.scale];
}
