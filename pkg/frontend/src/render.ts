// Canvas drawing for the two orthographic workspace views.

import { Bounds, sidePoint, sideTransform, topPoint, topTransform }
  from "./geometry.js";
import { Snapshot, WorkcellObject } from "./protocol.js";

const TABLE_COLOR = "#2b2f36";
const OBJECT_COLOR = "#7aa2f7";
const HELD_COLOR = "#e0af68";
const ROBOT_COLOR = "#9ece6a";
const TEXT_COLOR = "#c0caf5";

function boundsOf(snapshot: Snapshot, workspace: Bounds | null): Bounds {
  if (workspace) return workspace;
  // Without a workspace advertised, frame everything with headroom.
  return { xMin: 0, xMax: 800, yMin: -400, yMax: 400, zMin: 0, zMax: 600 };
}

export function drawTop(canvas: HTMLCanvasElement, snapshot: Snapshot,
                        workspace: Bounds | null): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const bounds = boundsOf(snapshot, workspace);
  const t = topTransform(bounds, canvas.width, canvas.height);
  ctx.fillStyle = TABLE_COLOR;
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const [left, top] = topPoint(t, bounds.xMax, bounds.yMax);
  const [right, bottom] = topPoint(t, bounds.xMin, bounds.yMin);
  ctx.strokeStyle = "#414868";
  ctx.strokeRect(left, top, right - left, bottom - top);

  for (const obj of snapshot.objects) {
    const [cx, cy] = topPoint(t, obj.x, obj.y);
    ctx.beginPath();
    ctx.arc(cx, cy, Math.max(obj.radius * t.scale, 2), 0, Math.PI * 2);
    ctx.fillStyle = obj.held ? HELD_COLOR : OBJECT_COLOR;
    ctx.fill();
    ctx.fillStyle = TEXT_COLOR;
    ctx.font = "11px sans-serif";
    ctx.fillText(obj.name, cx + 6, cy - 6);
  }

  drawCrosshair(ctx, ...topPoint(t, snapshot.robot.x, snapshot.robot.y),
                snapshot.robot.gripper > 0.5);
}

export function drawSide(canvas: HTMLCanvasElement, snapshot: Snapshot,
                         workspace: Bounds | null): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const bounds = boundsOf(snapshot, workspace);
  const t = sideTransform(bounds, canvas.width, canvas.height);
  ctx.fillStyle = TABLE_COLOR;
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const [floorLeft, floorY] = sidePoint(t, bounds.xMin, 0);
  const [floorRight] = sidePoint(t, bounds.xMax, 0);
  ctx.strokeStyle = "#565f89";
  ctx.beginPath();
  ctx.moveTo(floorLeft, floorY);
  ctx.lineTo(floorRight, floorY);
  ctx.stroke();

  for (const obj of snapshot.objects) {
    drawSideObject(ctx, t, obj);
  }
  drawCrosshair(ctx, ...sidePoint(t, snapshot.robot.x, snapshot.robot.z),
                snapshot.robot.gripper > 0.5);
}

function drawSideObject(ctx: CanvasRenderingContext2D,
                        t: ReturnType<typeof sideTransform>,
                        obj: WorkcellObject): void {
  const [leftPx, topPx] = sidePoint(t, obj.x - obj.radius, obj.z + obj.height);
  const [rightPx, bottomPx] = sidePoint(t, obj.x + obj.radius, obj.z);
  ctx.fillStyle = obj.held ? HELD_COLOR : OBJECT_COLOR;
  ctx.fillRect(leftPx, topPx, Math.max(rightPx - leftPx, 3),
               Math.max(bottomPx - topPx, 3));
}

function drawCrosshair(ctx: CanvasRenderingContext2D, x: number, y: number,
                       open: boolean): void {
  ctx.strokeStyle = ROBOT_COLOR;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(x - 10, y);
  ctx.lineTo(x + 10, y);
  ctx.moveTo(x, y - 10);
  ctx.lineTo(x, y + 10);
  ctx.stroke();
  // Gripper glyph: open ring vs filled dot.
  ctx.beginPath();
  ctx.arc(x, y, 5, 0, Math.PI * 2);
  if (open) {
    ctx.stroke();
  } else {
    ctx.fillStyle = ROBOT_COLOR;
    ctx.fill();
  }
  ctx.lineWidth = 1;
}
