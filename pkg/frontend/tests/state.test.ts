import { describe, expect, it } from "vitest";
import { StateFrame } from "../src/protocol.js";
import {
  applyDropped,
  applyFrame,
  applyStatus,
  applySummary,
  initialUiState,
} from "../src/state.js";

function frame(overrides: Partial<StateFrame> = {}): StateFrame {
  return {
    step: 1, t: 0.008, pos: [0, 0], gauge: 0, points: 0, hazard_active: false,
    being_hit: false, agent_signal: false, trial_over: false, ...overrides,
  };
}

describe("UiState", () => {
  it("cue turns on in the same update as the frame that carries it", () => {
    // The render loop reads cueOn each animation frame, so flipping it here
    // bounds signal-to-visible-cue latency to at most one render frame.
    let state = initialUiState();
    state = applyFrame(state, frame({ agent_signal: true }));
    expect(state.cueOn).toBe(true);
    expect(state.cueRise).toBe(true);
  });

  it("cue rise fires only once while the signal holds", () => {
    let state = initialUiState();
    state = applyFrame(state, frame({ agent_signal: true }));
    state = applyFrame(state, frame({ step: 2, agent_signal: true }));
    expect(state.cueOn).toBe(true);
    expect(state.cueRise).toBe(false);
    state = applyFrame(state, frame({ step: 3, agent_signal: false }));
    expect(state.cueOn).toBe(false);
  });

  it("holds only server-provided state", () => {
    let state = initialUiState();
    const f = frame({ gauge: 1.25, points: 2 });
    state = applyFrame(state, f);
    expect(state.frame).toBe(f); // no client-side re-simulation or mutation
  });

  it("tracks dropped frames and connection status", () => {
    let state = initialUiState();
    state = applyDropped(applyDropped(state));
    expect(state.droppedFrames).toBe(2);
    state = applyStatus(state, "error", "bad hello");
    expect(state.status).toBe("error");
    expect(state.lastError).toBe("bad hello");
  });

  it("keeps the summary for the end-of-trial panel", () => {
    let state = initialUiState();
    state = applySummary(state, {
      points_cached: 3, points_norm: 0.27, hit_steps: 5, hit_steps_norm: 0.01,
      heat_gain: 20.0, heat_gain_norm: 0.36,
    });
    expect(state.summary!.points_cached).toBe(3);
  });
});
