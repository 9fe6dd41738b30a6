// App wiring: query params -> session; keyboard/pointer -> input loop;
// frames -> state -> render loop; cue -> border flash and optional tone.

import { KeyDodgeModel, PointerFollowModel, InputModel } from "./input.js";
import { SessionClient } from "./net.js";
import { draw, computeLayout } from "./render.js";
import {
  CueStyle,
  InputMode,
  UiState,
  applyDropped,
  applyFrame,
  applyStatus,
  applySummary,
  initialUiState,
} from "./state.js";

const INPUT_HZ = 60;

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

function start(): void {
  const canvas = document.getElementById("arena") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const mode = (param("mode", "key") === "pointer"
    ? "pointer-follow" : "key-dodge") as InputMode;
  const cueStyle = param("cue", "flash") as CueStyle;
  let state: UiState = initialUiState(mode, cueStyle);

  const model: InputModel = mode === "key-dodge"
    ? new KeyDodgeModel() : new PointerFollowModel();
  const keys = { dodge: false, cache: false };

  window.addEventListener("keydown", (e) => {
    if (e.code === "Space") keys.dodge = true;
    if (e.code === "KeyC") keys.cache = true;
  });
  window.addEventListener("keyup", (e) => {
    if (e.code === "Space") keys.dodge = false;
    if (e.code === "KeyC") keys.cache = false;
  });
  canvas.addEventListener("pointermove", (e) => {
    if (model instanceof PointerFollowModel) {
      const layout = computeLayout(canvas.width, canvas.height);
      const rect = canvas.getBoundingClientRect();
      const x = (e.clientX - rect.left - layout.cx) / layout.scale;
      const y = (layout.cy - (e.clientY - rect.top)) / layout.scale;
      model.setPointer(x, y);
    }
  });

  const server = param("server", `ws://${window.location.host}/ws`);
  const client = new SessionClient(server, (url) => new WebSocket(url), {
    onOpen: () => { state = applyStatus(state, "open"); },
    onClose: () => { state = applyStatus(state, "closed"); },
    onMalformed: (raw) => {
      console.warn("dropped malformed frame", raw.slice(0, 120));
      state = applyDropped(state);
    },
    onMessage: (msg) => {
      if (msg.type === "frame") {
        state = applyFrame(state, msg);
        if (state.cueRise && (state.cueStyle === "tone" || state.cueStyle === "both")) {
          beep();
        }
      } else if (msg.type === "summary") {
        state = applySummary(state, msg);
      } else if (msg.type === "error") {
        state = applyStatus(state, "error", msg.reason);
        console.warn("session rejected:", msg.reason);
      }
    },
  });

  // Condition and agent stay hidden by default, mirroring blinded trials;
  // they are only ever visible in the page URL the operator typed.
  client.connect({
    condition: param("condition", "fixed"),
    agent_kind: param("agent", "tct"),
    tick_hz: Number(param("tick_hz", "125")),
    seed: Number(param("seed", "0")),
    trial_len: Number(param("trial_len", "300")),
  });

  setInterval(() => {
    if (state.status !== "open") return;
    const sample = model.tick(1 / INPUT_HZ, keys);
    client.sendInput(sample.moveTo, sample.cache);
  }, 1000 / INPUT_HZ);

  const render = () => {
    draw(ctx, state, canvas.width, canvas.height);
    requestAnimationFrame(render);
  };
  requestAnimationFrame(render);
}

let audio: AudioContext | null = null;

function beep(): void {
  try {
    audio = audio ?? new AudioContext();
    const osc = audio.createOscillator();
    const gain = audio.createGain();
    osc.frequency.value = 880;
    gain.gain.value = 0.08;
    osc.connect(gain).connect(audio.destination);
    osc.start();
    osc.stop(audio.currentTime + 0.12);
  } catch {
    // Audio is best-effort; the border flash is the primary cue.
  }
}

window.addEventListener("DOMContentLoaded", start);
