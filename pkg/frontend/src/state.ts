// Client-side state: a thin mirror of server frames plus presentation flags.
// The client never simulates; everything rendered comes from the last frame.

import { StateFrame, TrialSummary } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed" | "error";
export type InputMode = "key-dodge" | "pointer-follow";
export type CueStyle = "flash" | "tone" | "both";

export interface UiState {
  status: ConnectionStatus;
  frame: StateFrame | null;
  summary: TrialSummary | null;
  inputMode: InputMode;
  cueStyle: CueStyle;
  cueOn: boolean;
  cueRise: boolean; // true only on the frame where the cue turned on
  droppedFrames: number;
  lastError: string | null;
}

export function initialUiState(inputMode: InputMode = "key-dodge",
                               cueStyle: CueStyle = "flash"): UiState {
  return {
    status: "connecting",
    frame: null,
    summary: null,
    inputMode,
    cueStyle,
    cueOn: false,
    cueRise: false,
    droppedFrames: 0,
    lastError: null,
  };
}

/** Frame receipt updates the cue immediately, so the very next render shows it. */
export function applyFrame(state: UiState, frame: StateFrame): UiState {
  return {
    ...state,
    frame,
    cueRise: frame.agent_signal && !state.cueOn,
    cueOn: frame.agent_signal,
  };
}

export function applySummary(state: UiState, summary: TrialSummary): UiState {
  return { ...state, summary };
}

export function applyStatus(state: UiState, status: ConnectionStatus,
                            error: string | null = null): UiState {
  return { ...state, status, lastError: error };
}

export function applyDropped(state: UiState): UiState {
  return { ...state, droppedFrames: state.droppedFrames + 1 };
}
