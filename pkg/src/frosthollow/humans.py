"""Scripted participant policies.

Each model converts per-step observations (gauge, hazard, agent cue, clock)
into teleport/cache actions so closed-loop experiments can run without a live
human.  Movement is a radial line: the avatar leaves the goal region on its
first exit step and clears the hazard boundary exit_duration after the exit
trigger, matching the measured mean exit time the task design assumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .env import HumanAction, SimConfig


class HumanKind(str, Enum):
    CUE_FOLLOWER = "cue_follower"
    INTERNAL_TIMER = "internal_timer"
    HYBRID = "hybrid"


class Phase(str, Enum):
    IN_CENTER = "in_center"
    EXITING = "exiting"
    OUTSIDE = "outside"
    RETURNING = "returning"


@dataclass(frozen=True)
class HumanModelConfig:
    kind: HumanKind = HumanKind.CUE_FOLLOWER
    reaction_delay: float = 0.25
    exit_duration: float = 0.89
    return_delay: float = 0.5
    timer_noise_sigma: float = 0.5
    safety_margin: float = 1.5

    def __post_init__(self) -> None:
        for name in ("reaction_delay", "exit_duration", "return_delay",
                     "timer_noise_sigma", "safety_margin"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.exit_duration == 0:
            raise ValueError("exit_duration must be positive")


@dataclass(frozen=True)
class Observation:
    """What the participant can perceive after one environment step."""

    gauge: float
    gauge_full: bool
    hazard_active: bool
    agent_signal: bool
    t: float


@dataclass
class HumanModelState:
    phase: Phase = Phase.IN_CENTER
    phase_start: float = 0.0
    phase_elapsed: float = 0.0
    isi_estimate: float = 0.0
    isi_count: int = 0
    last_falling_edge: float = 0.0
    exit_start: float | None = None
    hold_radius: float = 0.0
    prev_signal: bool = False
    prev_hazard: bool = False
    dt: float = 0.008

    @classmethod
    def initial(cls, sim: SimConfig) -> HumanModelState:
        return cls(dt=sim.dt)


def update_isi_estimate(m: HumanModelState, observed_inactive: float) -> HumanModelState:
    """Fold one observed inactive duration into the running-mean estimate."""
    if observed_inactive <= 0:
        raise ValueError("observed_inactive must be positive")
    total = m.isi_estimate * m.isi_count + observed_inactive
    m.isi_count += 1
    m.isi_estimate = total / m.isi_count
    return m


def _exit_radius(u: float, sim: SimConfig, cfg: HumanModelConfig) -> float:
    # First moved step is already past the goal-region boundary; the hazard
    # boundary is crossed strictly after exit_duration.
    return sim.center_radius + (sim.hazard_radius - sim.center_radius) * (u / cfg.exit_duration)


def human_step(m: HumanModelState, cfg: HumanModelConfig, obs: Observation,
               rng: np.random.Generator, sim: SimConfig) -> tuple[HumanModelState, HumanAction]:
    """One decision step; the returned action applies at obs.t + dt."""
    t = obs.t
    t_next = t + m.dt

    if obs.hazard_active and not m.prev_hazard:
        # Pulse onset: the inactive interval just ended, fold a (noisy) reading
        # of its duration into the mental timekeeping estimate.
        observed = t - m.last_falling_edge
        if observed > 0:
            noise = rng.normal(0.0, cfg.timer_noise_sigma) if cfg.timer_noise_sigma > 0 else 0.0
            update_isi_estimate(m, max(observed + noise, 1e-6))
    if m.prev_hazard and not obs.hazard_active:
        m.last_falling_edge = t

    signal_rise = obs.agent_signal and not m.prev_signal
    cache = False

    if m.phase is Phase.IN_CENTER:
        wants_cue = cfg.kind in (HumanKind.CUE_FOLLOWER, HumanKind.HYBRID)
        wants_timer = cfg.kind in (HumanKind.INTERNAL_TIMER, HumanKind.HYBRID)
        if wants_cue and signal_rise:
            candidate = t + cfg.reaction_delay
            if m.exit_start is None or candidate < m.exit_start:
                m.exit_start = candidate
        if wants_timer and m.isi_count > 0:
            trigger = m.last_falling_edge + max(m.isi_estimate - cfg.safety_margin, 0.0)
            # Arm only as the timer moment passes; a trigger that already
            # elapsed before the estimate existed (first interval) is moot.
            if t <= trigger < t_next:
                if m.exit_start is None or trigger < m.exit_start:
                    m.exit_start = trigger
        if obs.gauge_full:
            cache = True

    pos: tuple[float, float] | None = None
    if m.phase is Phase.IN_CENTER:
        if m.exit_start is not None and t_next > m.exit_start:
            m.phase = Phase.EXITING
            m.phase_start = m.exit_start
        pos = (0.0, 0.0)
    if m.phase is Phase.EXITING:
        u = t_next - m.exit_start
        r = _exit_radius(u, sim, cfg)
        if r > sim.hazard_radius:
            m.phase = Phase.OUTSIDE
            m.phase_start = t_next
            m.hold_radius = r
        pos = (r, 0.0)
    elif m.phase is Phase.OUTSIDE:
        returnable = (not obs.hazard_active
                      and m.last_falling_edge > (m.exit_start or 0.0)
                      and t_next > m.last_falling_edge + cfg.return_delay)
        if returnable:
            m.phase = Phase.RETURNING
            m.phase_start = m.last_falling_edge + cfg.return_delay
        else:
            pos = (m.hold_radius, 0.0)
    if m.phase is Phase.RETURNING:
        u = t_next - m.phase_start
        speed = (sim.hazard_radius - sim.center_radius) / cfg.exit_duration
        r = m.hold_radius - speed * u
        if r <= 0.0:
            r = 0.0
            m.phase = Phase.IN_CENTER
            m.phase_start = t_next
            m.exit_start = None
        pos = (r, 0.0)

    m.phase_elapsed = t_next - m.phase_start
    m.prev_signal = obs.agent_signal
    m.prev_hazard = obs.hazard_active
    return m, HumanAction(move_to=pos, cache=cache)
