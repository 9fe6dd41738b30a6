"""Metrics pipeline: per-pulse signal intervals, trial performance, bootstrap CIs.

Interval conventions: a pulse's signal rise is the last rising edge of the cue
strictly before that pulse's onset (and after the previous falling edge); its
exit is the last outward crossing of the goal-region boundary in the same
window.  Pulses without the required events contribute missing values rather
than zeros so that interval means stay meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import SimConfig
from .harness import TrialLog

# Minimum useful signal lead (s): the participant's mean exit time.
USEFUL_LEAD = 0.89

BOOTSTRAP_RESAMPLES = 2000
BOOTSTRAP_SEED = 20_20


@dataclass(frozen=True)
class PulseMetricsRow:
    pulse_index: int          # schedule index of the pulse
    position: int             # 1-based position within the trial
    onset_t: float
    signal_to_hazard: float | None
    signal_to_exit: float | None
    useful: bool


@dataclass(frozen=True)
class TrialPerformance:
    points_cached: int
    points_norm: float
    hit_steps: int
    hit_steps_norm: float
    heat_gain: float
    heat_gain_norm: float


def signal_rise_times(log: TrialLog) -> list[float]:
    """Times of rising edges of the cue stream (off at trial start)."""
    rises = []
    prev = False
    for t, s in zip(log.t, log.signal):
        if s and not prev:
            rises.append(t)
        prev = s
    return rises


def goal_exit_times(log: TrialLog, sim: SimConfig) -> list[float]:
    """Times of outward crossings of the goal-region boundary."""
    exits = []
    prev_r = 0.0
    for k in range(len(log)):
        r = math.hypot(log.pos_x[k], log.pos_y[k])
        if r > sim.center_radius and prev_r <= sim.center_radius:
            exits.append(log.t[k])
        prev_r = r
    return exits


def _last_in_window(times: list[float], lo: float, hi: float) -> float | None:
    best = None
    for t in times:
        if lo < t < hi:
            best = t
        elif t >= hi:
            break
    return best


def pulse_metrics(log: TrialLog, sim: SimConfig) -> list[PulseMetricsRow]:
    """Signal-to-hazard and signal-to-exit intervals for every pulse in the log."""
    rises = signal_rise_times(log)
    exits = goal_exit_times(log, sim)
    rows = []
    prev_fall = 0.0
    for position, (index, onset, fall) in enumerate(log.pulses, start=1):
        rise = _last_in_window(rises, prev_fall, onset)
        exit_t = _last_in_window(exits, prev_fall, onset)
        lead = onset - rise if rise is not None else None
        s2e = (exit_t - rise) if (rise is not None and exit_t is not None) else None
        rows.append(PulseMetricsRow(
            pulse_index=index, position=position, onset_t=onset,
            signal_to_hazard=lead, signal_to_exit=s2e,
            useful=(lead is not None and lead >= USEFUL_LEAD)))
        prev_fall = fall
    return rows


def reliable_pulse_index(leads: list[float | None],
                         useful_lead: float = USEFUL_LEAD) -> int:
    """First pulse (1-based) after which every subsequent lead is useful.

    0 means every pulse already had a useful lead; a missing lead counts as
    not useful.
    """
    k = 0
    for j in range(len(leads) - 1, -1, -1):
        if leads[j] is None or leads[j] < useful_lead:
            k = j + 1
            break
    return k


def max_points(sim: SimConfig) -> int:
    """Most points a trial's heat budget allows."""
    return int(sim.trial_len * sim.fill_rate / sim.gauge_cap)


def trial_performance(log: TrialLog, sim: SimConfig) -> TrialPerformance:
    """Fig-2-style per-trial aggregates, each normalized by its maximum."""
    points = log.points[-1] if log.points else 0
    hit_steps = sum(log.being_hit)
    active_steps = sum(log.hazard_active)
    heat = _gross_heat_gain(log, sim)
    possible = max_points(sim)
    return TrialPerformance(
        points_cached=points,
        points_norm=(points / possible) if possible else 0.0,
        hit_steps=hit_steps,
        hit_steps_norm=(hit_steps / active_steps) if active_steps else 0.0,
        heat_gain=heat,
        heat_gain_norm=heat / (sim.trial_len * sim.fill_rate),
    )


def _gross_heat_gain(log: TrialLog, sim: SimConfig) -> float:
    """Sum of fill increments, replayed from the recorded trajectory.

    Re-applies the environment's per-step gauge arithmetic (drain, capped
    fill, cache reset) so the gross accrual is exact even when drains and
    fills land in the same step.
    """
    drain = sim.drain_rate * sim.dt
    fill = sim.fill_rate * sim.dt
    g = 0.0
    heat = 0.0
    for k in range(len(log)):
        if log.being_hit[k]:
            g = max(0.0, g - drain)
        if math.hypot(log.pos_x[k], log.pos_y[k]) <= sim.center_radius:
            g2 = min(sim.gauge_cap, g + fill)
            heat += g2 - g
            g = g2
        if log.cache_event[k]:
            g = 0.0
    return heat


@dataclass(frozen=True)
class Aggregate:
    mean: float
    ci_lo: float
    ci_hi: float
    n: int


def aggregate(samples, n_resamples: int = BOOTSTRAP_RESAMPLES,
              seed: int = BOOTSTRAP_SEED) -> Aggregate:
    """Mean with a seeded 95% percentile-bootstrap confidence interval."""
    arr = np.asarray(list(samples), dtype=float)
    if arr.size == 0:
        raise ValueError("aggregate requires at least one sample")
    rng = np.random.default_rng(np.random.SeedSequence([seed, arr.size]))
    idx = rng.integers(0, arr.size, size=(n_resamples, arr.size))
    means = arr[idx].mean(axis=1)
    return Aggregate(mean=float(arr.mean()),
                     ci_lo=float(np.quantile(means, 0.025)),
                     ci_hi=float(np.quantile(means, 0.975)),
                     n=int(arr.size))
