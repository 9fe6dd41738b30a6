"""Continually-learning hazard-prediction agent.

A one-hot temporal representation (a bit-cascade clock or a saturating-trace
clock) feeds a TD(lambda)-trained general value function over the hazard
indicator.  A fixed reflexive policy turns the prediction into a binary cue
whenever it crosses a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

N_FEATURES = 40
BC_BIN_SECONDS = 0.5
TCT_DECAY = 0.998


class GvfDivergenceError(RuntimeError):
    """Raised when the TD update produces non-finite values."""


class ReprKind(str, Enum):
    """Temporal representation flavour."""

    BIT_CASCADE = "bc"
    TILE_CODED_TRACE = "tct"


def bc_feature_index(steps_since_edge: int, dt: float) -> int:
    """Bit-cascade bin: features activate sequentially, 0.5 s each, clamped at the last bin."""
    return min(int(steps_since_edge * dt / BC_BIN_SECONDS), N_FEATURES - 1)


def tct_trace_step(trace: float) -> float:
    """One step of the saturating trace: n steps after a reset it equals 1 - 0.998**n."""
    return 1.0 - TCT_DECAY * (1.0 - trace)


def tct_feature_index(trace: float) -> int:
    """Uniform tiling of the trace value over [0, 1) into one-hot bins."""
    return min(int(trace * N_FEATURES), N_FEATURES - 1)


@dataclass
class ReprState:
    """Clock state for either representation; resets at each hazard falling edge."""

    kind: ReprKind
    steps_since_edge: int = 0
    trace: float = 0.0

    def feature_index(self, dt: float) -> int:
        if self.kind is ReprKind.BIT_CASCADE:
            return bc_feature_index(self.steps_since_edge, dt)
        return tct_feature_index(self.trace)

    def advanced(self, falling_edge: bool) -> ReprState:
        """State one step later; a falling edge restarts the sequence at feature 0."""
        if falling_edge:
            return ReprState(kind=self.kind)
        return ReprState(kind=self.kind,
                         steps_since_edge=self.steps_since_edge + 1,
                         trace=tct_trace_step(self.trace))


@dataclass(frozen=True)
class GvfParams:
    """Learning and signalling parameters.

    alpha, lam, gamma and the signal threshold tau are per-step quantities
    defined at dt = 8 ms; changing dt requires re-deriving them.

    trace_bound clamps each eligibility component.  The textbook accumulating
    trace (bound = inf) is unstable here: one-hot features dwell for 62-650
    consecutive steps, so traces pile up to ~1/(1-gamma*lam) = 50 and the
    effective step size alpha*e reaches 5, which diverges within one trial.
    bound = 1.0 is the classic replacing trace; 1.4 keeps the same stability
    while learning at the rate the task was designed around.
    """

    alpha: float = 0.1
    lam: float = 0.99
    gamma: float = 0.99
    tau: float = 10.0
    trace_bound: float = 1.4

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if not 0 <= self.lam <= 0.99:
            raise ValueError("lam must be in [0, 0.99]")
        if not 0 <= self.gamma < 1:
            raise ValueError("gamma must be in [0, 1)")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.trace_bound <= 0:
            raise ValueError("trace_bound must be positive")


@dataclass
class GvfState:
    """Weight and eligibility vectors; zero-initialized at every trial start."""

    w: np.ndarray
    e: np.ndarray

    @classmethod
    def zeros(cls, n_features: int = N_FEATURES) -> GvfState:
        return cls(w=np.zeros(n_features), e=np.zeros(n_features))


def gvf_predict(g: GvfState, x_index: int) -> float:
    """Value estimate for a one-hot feature: the dot product collapses to one weight."""
    return float(g.w[x_index])


def td_lambda_step(g: GvfState, p: GvfParams, x_t: int, x_t1: int,
                   c_t1: float) -> tuple[GvfState, float]:
    """One TD(lambda) update over the transition x_t -> x_t1 with cumulant c_t1.

    Updates in order: eligibility bump at x_t (clamped to trace_bound), TD
    error, weight update, trace decay.  Mutates ``g`` in place and returns it
    together with the TD error.
    """
    e = g.e
    w = g.w
    e[x_t] = min(e[x_t] + 1.0, p.trace_bound)
    delta = c_t1 + p.gamma * w[x_t1] - w[x_t]
    if not math.isfinite(delta):
        raise GvfDivergenceError(
            f"non-finite TD error {delta!r} at transition {x_t}->{x_t1}")
    w += p.alpha * delta * e
    e *= p.gamma * p.lam
    if not math.isfinite(w[x_t]):
        raise GvfDivergenceError(f"non-finite weight at feature {x_t}")
    return g, float(delta)


def pavlovian_signal(prediction: float, p: GvfParams) -> bool:
    """Fixed reflexive policy: cue on whenever the prediction reaches tau."""
    return prediction >= p.tau


@dataclass(frozen=True)
class AgentOutput:
    prediction: float
    signal: bool


@dataclass
class AgentState:
    """Clock + GVF state plus the per-step time base (dt) the clock is tied to."""

    clock: ReprState
    gvf: GvfState
    dt: float

    @classmethod
    def fresh(cls, kind: ReprKind, dt: float) -> AgentState:
        return cls(clock=ReprState(kind=kind), gvf=GvfState.zeros(), dt=dt)


def agent_tick(a: AgentState, hazard_active_now: bool, hazard_active_next: bool,
               falling_edge_now: bool, p: GvfParams) -> tuple[AgentState, AgentOutput]:
    """Advance the agent one environment step.

    The cumulant is the hazard indicator of the state being entered.  The
    emitted prediction uses the pre-update weights at the current feature, so
    the cue is a causal function of information available at tick start.
    """
    x_t = a.clock.feature_index(a.dt)
    prediction = gvf_predict(a.gvf, x_t)
    a.clock = a.clock.advanced(falling_edge_now)
    x_t1 = a.clock.feature_index(a.dt)
    c_t1 = 1.0 if hazard_active_next else 0.0
    a.gvf, _ = td_lambda_step(a.gvf, p, x_t, x_t1, c_t1)
    return a, AgentOutput(prediction=prediction, signal=pavlovian_signal(prediction, p))
