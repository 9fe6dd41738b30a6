"""Experiment runner: seeded condition-grid execution and per-step trial logs.

A trial closes the loop env_step -> agent_tick -> human_step once per fixed
time step and records everything needed by the metrics pipeline.  Trials are
plain functions of (config, condition, agent kind, seed), so identical inputs
reproduce byte-identical logs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .agent import AgentState, GvfParams, ReprKind, agent_tick
from .env import (EV_CACHE, HumanAction, IsiCondition, SimConfig, WorldState,
                  env_step, gauge_is_full, make_schedule)
from .humans import HumanModelConfig, HumanModelState, Observation, human_step

SCHEMA_VERSION = 1

AgentKind = ReprKind | None

AGENT_LABELS = {None: "none", ReprKind.BIT_CASCADE: "bc", ReprKind.TILE_CODED_TRACE: "tct"}
LABEL_AGENTS = {v: k for k, v in AGENT_LABELS.items()}


def agent_label(kind: AgentKind) -> str:
    return AGENT_LABELS[kind]


@dataclass(frozen=True)
class ExperimentConfig:
    sim: SimConfig = field(default_factory=SimConfig)
    gvf: GvfParams = field(default_factory=GvfParams)
    human: HumanModelConfig = field(default_factory=HumanModelConfig)
    conditions: tuple[IsiCondition, ...] = (IsiCondition.FIXED, IsiCondition.DRIFTING,
                                            IsiCondition.RANDOM)
    agents: tuple[AgentKind, ...] = (None, ReprKind.BIT_CASCADE, ReprKind.TILE_CODED_TRACE)
    sessions: int = 10
    trials_per_cell: int = 1
    base_seed: int = 0
    output_dir: str = "out"

    def __post_init__(self) -> None:
        if self.sessions < 1:
            raise ValueError("sessions must be >= 1")
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["conditions"] = [c.value for c in self.conditions]
        d["agents"] = [agent_label(a) for a in self.agents]
        d["human"]["kind"] = self.human.kind.value
        return d


def config_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def trial_seed(base_seed: int, session: int, condition: IsiCondition,
               kind: AgentKind, trial: int = 0) -> int:
    """Deterministic, order-independent per-trial seed."""
    key = f"{base_seed}|{session}|{trial}|{condition.value}|{agent_label(kind)}"
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def substream(seed: int, role: int) -> np.random.Generator:
    """Independent named generator derived from a trial seed."""
    return np.random.default_rng(np.random.SeedSequence([seed, role]))


ROLE_SCHEDULE = 0
ROLE_HUMAN = 1


@dataclass
class TrialLog:
    """Header, pulse table, and per-step record columns for one trial."""

    condition: IsiCondition
    agent_kind: AgentKind
    seed: int
    config_hash: str
    sim: SimConfig = field(default_factory=SimConfig)
    session: int = 0
    trial: int = 0
    complete: bool = True
    pulses: list[tuple[int, float, float]] = field(default_factory=list)
    step: list[int] = field(default_factory=list)
    t: list[float] = field(default_factory=list)
    pos_x: list[float] = field(default_factory=list)
    pos_y: list[float] = field(default_factory=list)
    gauge: list[float] = field(default_factory=list)
    points: list[int] = field(default_factory=list)
    hazard_active: list[bool] = field(default_factory=list)
    being_hit: list[bool] = field(default_factory=list)
    prediction: list[float] = field(default_factory=list)
    signal: list[bool] = field(default_factory=list)
    cache_event: list[bool] = field(default_factory=list)

    def append(self, ws: WorldState, prediction: float, signal: bool,
               cache_event: bool) -> None:
        self.step.append(ws.step_index)
        self.t.append(ws.t)
        self.pos_x.append(ws.pos[0])
        self.pos_y.append(ws.pos[1])
        self.gauge.append(ws.gauge)
        self.points.append(ws.points)
        self.hazard_active.append(ws.hazard_active)
        self.being_hit.append(ws.being_hit)
        self.prediction.append(prediction)
        self.signal.append(signal)
        self.cache_event.append(cache_event)

    def __len__(self) -> int:
        return len(self.step)

    def header(self) -> dict:
        return {
            "type": "trial_log",
            "schema_version": SCHEMA_VERSION,
            "config_hash": self.config_hash,
            "condition": self.condition.value,
            "agent_kind": agent_label(self.agent_kind),
            "seed": self.seed,
            "session": self.session,
            "trial": self.trial,
            "complete": self.complete,
            "n_records": len(self.step),
            "sim": asdict(self.sim),
            "pulses": [{"index": i, "onset_t": o, "falling_t": f}
                       for i, o, f in self.pulses],
        }

    def record(self, k: int) -> dict:
        row = {
            "step": self.step[k],
            "t": self.t[k],
            "pos": [self.pos_x[k], self.pos_y[k]],
            "gauge": self.gauge[k],
            "points": self.points[k],
            "hazard_active": self.hazard_active[k],
            "being_hit": self.being_hit[k],
        }
        if self.agent_kind is not None:
            row["prediction"] = self.prediction[k]
        row["signal"] = self.signal[k]
        row["cache_event"] = self.cache_event[k]
        return row

    def file_name(self) -> str:
        return (f"trial_{self.condition.value}_{agent_label(self.agent_kind)}"
                f"_s{self.session:03d}_t{self.trial:02d}.jsonl")


class ScriptedHuman:
    """Policy adapter: drives a scripted participant model."""

    def __init__(self, cfg: HumanModelConfig, sim: SimConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.sim = sim
        self.rng = rng
        self.state = HumanModelState.initial(sim)

    def initial_action(self) -> HumanAction:
        # The participant starts standing at the center point.
        return HumanAction(move_to=(0.0, 0.0), cache=False)

    def step(self, obs: Observation) -> HumanAction:
        self.state, action = human_step(self.state, self.cfg, obs, self.rng, self.sim)
        return action


class ReplayHuman:
    """Policy adapter: replays a recorded per-step applied-action trace."""

    def __init__(self, actions: list[HumanAction]):
        self.actions = list(actions)
        self.k = 0

    def _next(self) -> HumanAction:
        action = self.actions[self.k] if self.k < len(self.actions) else HumanAction()
        self.k += 1
        return action

    def initial_action(self) -> HumanAction:
        return self._next()

    def step(self, obs: Observation) -> HumanAction:
        return self._next()


def run_trial(cfg: ExperimentConfig, condition: IsiCondition, kind: AgentKind,
              seed: int, session: int = 0, trial: int = 0,
              policy=None) -> TrialLog:
    """Execute one closed-loop trial and return its full log.

    The agent learns from a blank slate (weights zero-initialized).  The
    default participant is the configured scripted model; pass ``policy`` to
    drive the trial from a recorded action trace instead.
    """
    sim = cfg.sim
    sched = make_schedule(condition, sim, substream(seed, ROLE_SCHEDULE))
    if policy is None:
        policy = ScriptedHuman(cfg.human, sim, substream(seed, ROLE_HUMAN))
    agent = AgentState.fresh(kind, sim.dt) if kind is not None else None

    log = TrialLog(condition=condition, agent_kind=kind, seed=seed,
                   config_hash=config_hash(cfg), sim=sim, session=session, trial=trial)
    log.pulses = sched.pulses_within(sim.trial_len)

    ws = WorldState()
    action = policy.initial_action()
    for _ in range(sim.n_steps):
        prev_hazard = ws.hazard_active
        ws, events = env_step(ws, action, sched, sim)
        falling_edge = prev_hazard and not ws.hazard_active
        if agent is not None:
            agent, out = agent_tick(agent, prev_hazard, ws.hazard_active,
                                    falling_edge, cfg.gvf)
            prediction, signal = out.prediction, out.signal
        else:
            prediction, signal = float("nan"), False
        obs = Observation(gauge=ws.gauge, gauge_full=gauge_is_full(ws.gauge, sim),
                          hazard_active=ws.hazard_active, agent_signal=signal, t=ws.t)
        action = policy.step(obs)
        log.append(ws, prediction, signal, cache_event=EV_CACHE in events)
    return log


def iter_cells(cfg: ExperimentConfig):
    for condition in cfg.conditions:
        for kind in cfg.agents:
            yield condition, kind


def run_experiment(cfg: ExperimentConfig,
                   cells: list[tuple[IsiCondition, AgentKind]] | None = None):
    """Run every (condition, agent) cell for every session; yield TrialLogs."""
    if cells is None:
        cells = list(iter_cells(cfg))
    for session in range(cfg.sessions):
        for condition, kind in cells:
            for trial in range(cfg.trials_per_cell):
                seed = trial_seed(cfg.base_seed, session, condition, kind, trial)
                yield run_trial(cfg, condition, kind, seed, session=session, trial=trial)
