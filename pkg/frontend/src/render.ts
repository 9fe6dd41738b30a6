// Canvas renderer: draws exactly what the last server frame says.

import { UiState } from "./state.js";

export interface Layout {
  cx: number;
  cy: number;
  scale: number; // pixels per meter
}

export const ARENA_RADIUS = 1.4; // meters shown around the center
const CENTER_RADIUS = 0.165;
const HAZARD_RADIUS = 1.0;
const GAUGE_CAP = 5.0;

export function computeLayout(width: number, height: number): Layout {
  const margin = 24;
  const scale = (Math.min(width, height) / 2 - margin) / ARENA_RADIUS;
  return { cx: width / 2, cy: height / 2, scale };
}

export function toScreen(layout: Layout, x: number, y: number): [number, number] {
  return [layout.cx + x * layout.scale, layout.cy - y * layout.scale];
}

export function draw(ctx: CanvasRenderingContext2D, state: UiState,
                     width: number, height: number): void {
  const layout = computeLayout(width, height);
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#0b1220";
  ctx.fillRect(0, 0, width, height);

  const frame = state.frame;
  // Hazard ring, wind overlay while a pulse is active.
  circle(ctx, layout, 0, 0, HAZARD_RADIUS,
         frame?.hazard_active ? "rgba(120,180,255,0.25)" : "rgba(120,180,255,0.06)",
         "#4a7dbf");
  circle(ctx, layout, 0, 0, CENTER_RADIUS, "rgba(255,190,90,0.25)", "#d9a441");

  if (frame) {
    const [ax, ay] = toScreen(layout, frame.pos[0], frame.pos[1]);
    ctx.beginPath();
    ctx.arc(ax, ay, 7, 0, Math.PI * 2);
    ctx.fillStyle = frame.being_hit ? "#ff5555" : "#eef2f7";
    ctx.fill();

    drawGauge(ctx, frame.gauge, width);
    ctx.fillStyle = "#eef2f7";
    ctx.font = "16px sans-serif";
    ctx.fillText(`points ${frame.points}`, 16, 64);
    ctx.fillText(`t ${frame.t.toFixed(1)}s`, 16, 84);
  }

  if (state.cueOn && state.cueStyle !== "tone") {
    ctx.lineWidth = 10;
    ctx.strokeStyle = "#ffd34d";
    ctx.strokeRect(5, 5, width - 10, height - 10);
    ctx.lineWidth = 1;
  }

  if (state.status !== "open") {
    banner(ctx, width, state.status === "connecting"
      ? "connecting..." : "connection lost - reload to start a new session");
  } else if (state.frame?.trial_over && state.summary) {
    const s = state.summary;
    banner(ctx, width,
           `trial over - points ${s.points_cached} | hit steps ${s.hit_steps}` +
           ` | heat ${s.heat_gain.toFixed(1)}`);
  }
}

function circle(ctx: CanvasRenderingContext2D, layout: Layout, x: number,
                y: number, r: number, fill: string, stroke: string): void {
  const [sx, sy] = toScreen(layout, x, y);
  ctx.beginPath();
  ctx.arc(sx, sy, r * layout.scale, 0, Math.PI * 2);
  ctx.fillStyle = fill;
  ctx.fill();
  ctx.strokeStyle = stroke;
  ctx.stroke();
}

function drawGauge(ctx: CanvasRenderingContext2D, gauge: number, width: number): void {
  const w = Math.min(260, width - 32);
  ctx.fillStyle = "#222c3d";
  ctx.fillRect(16, 24, w, 18);
  ctx.fillStyle = "#57c785";
  ctx.fillRect(16, 24, (gauge / GAUGE_CAP) * w, 18);
  ctx.strokeStyle = "#8fa3bf";
  ctx.strokeRect(16, 24, w, 18);
}

function banner(ctx: CanvasRenderingContext2D, width: number, text: string): void {
  ctx.fillStyle = "rgba(10,14,22,0.85)";
  ctx.fillRect(0, 0, width, 112);
  ctx.fillStyle = "#ffd34d";
  ctx.font = "18px sans-serif";
  ctx.fillText(text, 16, 104);
}
