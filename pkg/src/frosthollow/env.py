"""Frost Hollow environment: pulse schedules, heat gauge, caching, geometry.

The environment is a pure rule engine over fixed time steps.  A participant
position arrives as an action (teleport semantics; movement kinematics are the
caller's concern), heat fills while standing in the warm center, drains while
hit by an active hazard pulse, and a full gauge can be cached as a point.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Tolerance for "gauge is full" checks; absorbs float accumulation error.
GAUGE_FULL_EPS = 1e-9

# Event tags emitted by env_step.
EV_PULSE_ONSET = "pulse_onset"
EV_PULSE_FALL = "pulse_fall"
EV_HIT_START = "hit_start"
EV_HIT_STOP = "hit_stop"
EV_CACHE = "cache"
EV_GAUGE_FULL = "gauge_full"
EV_TRIAL_OVER = "trial_over"


class IsiCondition(str, Enum):
    """How the inactive part of each inter-stimulus interval is drawn."""

    FIXED = "fixed"
    DRIFTING = "drifting"
    RANDOM = "random"


@dataclass(frozen=True)
class SimConfig:
    """Environment constants.  Defaults are the nominal task parameters."""

    dt: float = 0.008
    trial_len: float = 300.0
    center_radius: float = 0.165
    hazard_radius: float = 1.0
    fill_rate: float = 0.1875
    drain_rate: float = 25.0
    gauge_cap: float = 5.0
    pulse_len: float = 4.0
    inactive_min: float = 12.0
    inactive_max: float = 22.0
    drift_step: float = 2.0

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.inactive_min > self.inactive_max:
            raise ValueError("inactive_min must not exceed inactive_max")
        for name in ("trial_len", "center_radius", "hazard_radius", "fill_rate",
                     "drain_rate", "gauge_cap", "pulse_len", "inactive_min"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.drift_step < 0:
            raise ValueError("drift_step must be nonnegative")

    @property
    def n_steps(self) -> int:
        """Steps per trial; trial_len is forced onto the step grid by rounding."""
        return int(round(self.trial_len / self.dt))


@dataclass(frozen=True)
class PulseSchedule:
    """Realized hazard timing for one trial.

    ``segments`` is an ordered list of (inactive_duration, active_duration)
    pairs.  The trial starts at a virtual falling edge at t=0, so the first
    segment begins inactive.  Hazard pulses occupy half-open intervals
    [onset, falling_edge).
    """

    segments: tuple[tuple[float, float], ...]
    starts: tuple[float, ...] = field(init=False)   # falling edges incl. t=0
    onsets: tuple[float, ...] = field(init=False)
    falls: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        starts, onsets, falls = [], [], []
        t = 0.0
        for inactive, active in self.segments:
            starts.append(t)
            onsets.append(t + inactive)
            falls.append(t + inactive + active)
            t = falls[-1]
        object.__setattr__(self, "starts", tuple(starts))
        object.__setattr__(self, "onsets", tuple(onsets))
        object.__setattr__(self, "falls", tuple(falls))

    @property
    def total_len(self) -> float:
        return self.falls[-1] if self.falls else 0.0

    def pulses_within(self, t_end: float) -> list[tuple[int, float, float]]:
        """(index, onset, falling_edge) for pulses whose onset precedes t_end."""
        return [(i, o, f) for i, (o, f) in enumerate(zip(self.onsets, self.falls))
                if o < t_end]


def make_schedule(cond: IsiCondition, cfg: SimConfig, rng: np.random.Generator) -> PulseSchedule:
    """Draw one trial's pulse schedule for the given ISI condition.

    Fixed: a single inactive duration drawn uniformly from
    [inactive_min, inactive_max] and repeated.  Drifting: each inactive
    duration shifts from the previous one by uniform[-drift_step, drift_step],
    clamped into range.  Random: each drawn i.i.d. uniform.  Segments are
    appended until they cover at least trial_len.
    """
    segments: list[tuple[float, float]] = []
    total = 0.0
    prev: float | None = None
    while total < cfg.trial_len:
        if prev is None:
            inactive = rng.uniform(cfg.inactive_min, cfg.inactive_max)
        elif cond is IsiCondition.FIXED:
            inactive = prev
        elif cond is IsiCondition.DRIFTING:
            shifted = prev + rng.uniform(-cfg.drift_step, cfg.drift_step)
            inactive = min(cfg.inactive_max, max(cfg.inactive_min, shifted))
        else:
            inactive = rng.uniform(cfg.inactive_min, cfg.inactive_max)
        prev = inactive
        segments.append((inactive, cfg.pulse_len))
        total += inactive + cfg.pulse_len
    return PulseSchedule(segments=tuple(segments))


def hazard_phase(sched: PulseSchedule, t: float) -> tuple[bool, int, float]:
    """Hazard state at time t: (active, current_pulse_index, time_since_falling_edge).

    t=0 counts as a falling edge.  Pulses are active on [onset, falling_edge).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    i = bisect_right(sched.starts, t) - 1
    if i < 0:
        i = 0
    if i >= len(sched.segments):
        i = len(sched.segments) - 1
    active = sched.onsets[i] <= t < sched.falls[i]
    return active, i, t - sched.starts[i]


@dataclass(frozen=True)
class WorldState:
    """Snapshot of the environment after a step."""

    t: float = 0.0
    step_index: int = 0
    pos: tuple[float, float] = (0.0, 0.0)
    gauge: float = 0.0
    points: int = 0
    hazard_active: bool = False
    being_hit: bool = False


@dataclass(frozen=True)
class HumanAction:
    """Participant input for one step: a teleport target (None = hold) and a cache attempt."""

    move_to: tuple[float, float] | None = None
    cache: bool = False


HOLD = HumanAction()


def gauge_is_full(gauge: float, cfg: SimConfig) -> bool:
    return gauge >= cfg.gauge_cap - GAUGE_FULL_EPS


def env_step(ws: WorldState, action: HumanAction, sched: PulseSchedule,
             cfg: SimConfig) -> tuple[WorldState, list[str]]:
    """Advance the world by one step.

    Within-step resolution order: position update, hazard drain, heat fill,
    cache.  Stepping past the trial end returns the state unchanged with a
    trial-over event.
    """
    if ws.step_index >= cfg.n_steps:
        return ws, [EV_TRIAL_OVER]

    step_index = ws.step_index + 1
    t = step_index * cfg.dt
    pos = action.move_to if action.move_to is not None else ws.pos
    radius = math.hypot(pos[0], pos[1])
    active, _, _ = hazard_phase(sched, t)

    events: list[str] = []
    if active and not ws.hazard_active:
        events.append(EV_PULSE_ONSET)
    elif ws.hazard_active and not active:
        events.append(EV_PULSE_FALL)

    gauge = ws.gauge
    being_hit = active and radius <= cfg.hazard_radius
    if being_hit:
        gauge = max(0.0, gauge - cfg.drain_rate * cfg.dt)
    if being_hit and not ws.being_hit:
        events.append(EV_HIT_START)
    elif ws.being_hit and not being_hit:
        events.append(EV_HIT_STOP)

    was_full = gauge_is_full(gauge, cfg)
    if radius <= cfg.center_radius:
        gauge = min(cfg.gauge_cap, gauge + cfg.fill_rate * cfg.dt)
    if gauge_is_full(gauge, cfg) and not was_full:
        events.append(EV_GAUGE_FULL)

    points = ws.points
    if action.cache and gauge_is_full(gauge, cfg):
        points += 1
        gauge = 0.0
        events.append(EV_CACHE)

    new_ws = WorldState(t=t, step_index=step_index, pos=pos, gauge=gauge,
                        points=points, hazard_active=active, being_hit=being_hit)
    return new_ws, events
