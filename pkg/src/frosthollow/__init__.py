"""Frost Hollow: a deterministic time-interval prediction task with
continually-learning cueing agents, scripted participants, an experiment
harness, and a real-time session service."""

from .agent import (AgentOutput, AgentState, GvfParams, GvfState, ReprKind,
                    ReprState, agent_tick, bc_feature_index, gvf_predict,
                    pavlovian_signal, tct_feature_index, tct_trace_step,
                    td_lambda_step)
from .env import (HumanAction, IsiCondition, PulseSchedule, SimConfig,
                  WorldState, env_step, hazard_phase, make_schedule)
from .harness import ExperimentConfig, TrialLog, run_experiment, run_trial, trial_seed
from .humans import HumanKind, HumanModelConfig, HumanModelState, Observation, human_step
from .metrics import (Aggregate, aggregate, pulse_metrics, reliable_pulse_index,
                      trial_performance)
from .session import ClientInput, Session, SessionConfig, StateFrame

__all__ = [name for name in dir() if not name.startswith("_")]
