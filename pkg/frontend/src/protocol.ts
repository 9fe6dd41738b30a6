// Wire protocol: JSON text messages exchanged with the session service.
// Parsing is defensive; malformed messages yield null so callers can drop
// them with a warning instead of crashing the client.

export interface StateFrame {
  step: number;
  t: number;
  pos: [number, number];
  gauge: number;
  points: number;
  hazard_active: boolean;
  being_hit: boolean;
  agent_signal: boolean;
  trial_over: boolean;
  prediction?: number;
}

export interface TrialSummary {
  points_cached: number;
  points_norm: number;
  hit_steps: number;
  hit_steps_norm: number;
  heat_gain: number;
  heat_gain_norm: number;
}

export type ServerMessage =
  | ({ type: "frame" } & StateFrame)
  | ({ type: "summary" } & TrialSummary)
  | { type: "bye"; log?: string; trace?: string }
  | { type: "error"; reason: string };

export interface HelloOptions {
  condition?: string;
  agent_kind?: string;
  tick_hz?: number;
  seed?: number;
  trial_len?: number;
  lockstep?: boolean;
}

const isNum = (v: unknown): v is number => typeof v === "number" && Number.isFinite(v);
const isBool = (v: unknown): v is boolean => typeof v === "boolean";

function isFrame(m: Record<string, unknown>): boolean {
  return (
    isNum(m.step) && isNum(m.t) && isNum(m.gauge) && isNum(m.points) &&
    isBool(m.hazard_active) && isBool(m.being_hit) && isBool(m.agent_signal) &&
    isBool(m.trial_over) && Array.isArray(m.pos) && m.pos.length === 2 &&
    isNum(m.pos[0]) && isNum(m.pos[1])
  );
}

function isSummary(m: Record<string, unknown>): boolean {
  return (
    isNum(m.points_cached) && isNum(m.points_norm) && isNum(m.hit_steps) &&
    isNum(m.hit_steps_norm) && isNum(m.heat_gain) && isNum(m.heat_gain_norm)
  );
}

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const m = data as Record<string, unknown>;
  switch (m.type) {
    case "frame":
      return isFrame(m) ? (m as unknown as ServerMessage) : null;
    case "summary":
      return isSummary(m) ? (m as unknown as ServerMessage) : null;
    case "bye":
      return m as unknown as ServerMessage;
    case "error":
      return typeof m.reason === "string" ? (m as unknown as ServerMessage) : null;
    default:
      return null;
  }
}

export function helloMessage(opts: HelloOptions): string {
  return JSON.stringify({
    type: "hello",
    condition: opts.condition ?? "fixed",
    agent_kind: opts.agent_kind ?? "tct",
    tick_hz: opts.tick_hz ?? 125,
    seed: opts.seed ?? 0,
    trial_len: opts.trial_len ?? 300.0,
    lockstep: opts.lockstep ?? false,
  });
}

export function inputMessage(seq: number, moveTo: [number, number] | null,
                             cache: boolean): string {
  return JSON.stringify({ type: "input", seq, move_to: moveTo, cache });
}

export function byeMessage(): string {
  return JSON.stringify({ type: "bye" });
}
