"""Interactive session core: the authoritative per-tick loop behind the
real-time service.

A session wraps the same environment/agent stepping the harness uses, applies
the most recent buffered client input once per tick, and records both the
trial log and the per-tick applied-action trace.  Replaying that trace through
``run_trial`` reproduces the session's log exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .agent import AgentState, GvfParams, agent_tick
from .env import (EV_CACHE, HumanAction, IsiCondition, SimConfig, WorldState,
                  env_step, make_schedule)
from .harness import (ROLE_SCHEDULE, SCHEMA_VERSION, AgentKind, ExperimentConfig,
                      TrialLog, agent_label, config_hash, substream)
from .metrics import TrialPerformance, trial_performance


@dataclass(frozen=True)
class SessionConfig:
    condition: IsiCondition = IsiCondition.FIXED
    agent_kind: AgentKind = None
    tick_hz: int = 125
    seed: int = 0
    trial_len: float = 300.0
    debug_prediction: bool = False

    def __post_init__(self) -> None:
        if self.tick_hz < 1:
            raise ValueError("tick_hz must be >= 1")
        if self.trial_len <= 0:
            raise ValueError("trial_len must be positive")

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_hz


@dataclass(frozen=True)
class ClientInput:
    seq: int
    move_to: tuple[float, float] | None = None
    cache: bool = False


@dataclass(frozen=True)
class StateFrame:
    step: int
    t: float
    pos: tuple[float, float]
    gauge: float
    points: int
    hazard_active: bool
    being_hit: bool
    agent_signal: bool
    trial_over: bool
    prediction: float | None = None

    def to_dict(self) -> dict:
        d = {
            "type": "frame",
            "step": self.step,
            "t": self.t,
            "pos": [self.pos[0], self.pos[1]],
            "gauge": self.gauge,
            "points": self.points,
            "hazard_active": self.hazard_active,
            "being_hit": self.being_hit,
            "agent_signal": self.agent_signal,
            "trial_over": self.trial_over,
        }
        if self.prediction is not None:
            d["prediction"] = self.prediction
        return d


class Session:
    """One authoritative trial loop driven by client inputs."""

    def __init__(self, cfg: SessionConfig, gvf: GvfParams | None = None):
        self.cfg = cfg
        gvf = gvf if gvf is not None else GvfParams()
        sim = SimConfig(dt=cfg.dt, trial_len=cfg.trial_len)
        # The equivalent harness config; sharing it makes session logs
        # byte-compatible with run_trial replays.
        self.exp_cfg = ExperimentConfig(sim=sim, gvf=gvf,
                                        conditions=(cfg.condition,),
                                        agents=(cfg.agent_kind,),
                                        sessions=1, base_seed=cfg.seed)
        self.sim = sim
        self.gvf = gvf
        self.sched = make_schedule(cfg.condition, sim, substream(cfg.seed, ROLE_SCHEDULE))
        self.agent = (AgentState.fresh(cfg.agent_kind, sim.dt)
                      if cfg.agent_kind is not None else None)
        self.ws = WorldState()
        self.log = TrialLog(condition=cfg.condition, agent_kind=cfg.agent_kind,
                            seed=cfg.seed, config_hash=config_hash(self.exp_cfg),
                            sim=sim)
        self.log.pulses = self.sched.pulses_within(sim.trial_len)
        self.applied_actions: list[HumanAction] = []
        self._mailbox: ClientInput | None = None
        self._last_seq = -1
        self._signal = False
        self._prediction = float("nan")

    @property
    def trial_over(self) -> bool:
        return self.ws.step_index >= self.sim.n_steps

    def initial_frame(self) -> StateFrame:
        return self._frame()

    def submit_input(self, ci: ClientInput) -> bool:
        """Buffer a client input; stale sequence numbers are dropped."""
        if ci.seq <= self._last_seq:
            return False
        self._last_seq = ci.seq
        self._mailbox = ci
        return True

    def tick(self) -> StateFrame:
        """Advance one step using the latest buffered input (hold if none)."""
        if self.trial_over:
            return self._frame()
        ci = self._mailbox
        self._mailbox = None
        action = (HumanAction(move_to=ci.move_to, cache=ci.cache)
                  if ci is not None else HumanAction())
        self.applied_actions.append(action)

        prev_hazard = self.ws.hazard_active
        self.ws, events = env_step(self.ws, action, self.sched, self.sim)
        falling_edge = prev_hazard and not self.ws.hazard_active
        if self.agent is not None:
            self.agent, out = agent_tick(self.agent, prev_hazard,
                                         self.ws.hazard_active, falling_edge,
                                         self.gvf)
            self._prediction, self._signal = out.prediction, out.signal
        self.log.append(self.ws, self._prediction, self._signal,
                        cache_event=EV_CACHE in events)
        return self._frame()

    def _frame(self) -> StateFrame:
        show_pred = self.cfg.debug_prediction and self.agent is not None
        return StateFrame(step=self.ws.step_index, t=self.ws.t, pos=self.ws.pos,
                          gauge=self.ws.gauge, points=self.ws.points,
                          hazard_active=self.ws.hazard_active,
                          being_hit=self.ws.being_hit,
                          agent_signal=self._signal,
                          trial_over=self.trial_over,
                          prediction=self._prediction if show_pred else None)

    def summary(self) -> TrialPerformance:
        return trial_performance(self.log, self.sim)

    def end(self) -> TrialLog:
        """Finalize the log; mid-trial sessions are flagged incomplete."""
        self.log.complete = self.trial_over
        return self.log

    def trace_header(self) -> dict:
        return {
            "type": "input_trace",
            "schema_version": SCHEMA_VERSION,
            "config_hash": config_hash(self.exp_cfg),
            "condition": self.cfg.condition.value,
            "agent_kind": agent_label(self.cfg.agent_kind),
            "seed": self.cfg.seed,
            "experiment": self.exp_cfg.to_dict(),
        }

    def write_trace(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps(self.trace_header(), separators=(",", ":")) + "\n")
            for k, action in enumerate(self.applied_actions):
                row = {"step": k + 1,
                       "move_to": None if action.move_to is None else list(action.move_to),
                       "cache": action.cache}
                fh.write(json.dumps(row, separators=(",", ":")) + "\n")
        return path


def read_trace(path: str | Path) -> tuple[dict, list[HumanAction]]:
    with Path(path).open("r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("type") != "input_trace":
            raise ValueError(f"{path} is not an input trace")
        actions = []
        for line in fh:
            row = json.loads(line)
            move_to = row["move_to"]
            actions.append(HumanAction(
                move_to=None if move_to is None else (move_to[0], move_to[1]),
                cache=row["cache"]))
    return header, actions


def replay_trace(header: dict, actions: list[HumanAction]) -> TrialLog:
    """Re-run a recorded session through the harness trial loop."""
    from .config import config_from_dict
    from .harness import ReplayHuman, run_trial

    exp_cfg = config_from_dict(header["experiment"])
    condition = IsiCondition(header["condition"])
    kind = exp_cfg.agents[0]
    return run_trial(exp_cfg, condition, kind, header["seed"],
                     policy=ReplayHuman(actions))
