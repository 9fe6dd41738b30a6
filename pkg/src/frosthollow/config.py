"""Experiment configuration loading.

The config file is a single YAML document whose keys mirror ExperimentConfig
field names; every key is optional and defaults to the built-in values.
"""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path

import yaml

from .agent import GvfParams
from .env import IsiCondition, SimConfig
from .harness import LABEL_AGENTS, AgentKind, ExperimentConfig
from .humans import HumanKind, HumanModelConfig


class ConfigError(ValueError):
    pass


def _check_keys(data: dict, cls, where: str) -> None:
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def parse_agent(label: str) -> AgentKind:
    try:
        return LABEL_AGENTS[label]
    except KeyError:
        raise ConfigError(f"unknown agent kind {label!r}; expected one of "
                          f"{sorted(LABEL_AGENTS)}") from None


def parse_condition(label: str) -> IsiCondition:
    try:
        return IsiCondition(label)
    except ValueError:
        raise ConfigError(f"unknown condition {label!r}; expected one of "
                          f"{[c.value for c in IsiCondition]}") from None


def config_from_dict(data: dict) -> ExperimentConfig:
    data = dict(data)
    _check_keys(data, ExperimentConfig, "config")
    kwargs = {}
    if "sim" in data:
        sim = data.pop("sim")
        _check_keys(sim, SimConfig, "sim")
        kwargs["sim"] = SimConfig(**sim)
    if "gvf" in data:
        gvf = data.pop("gvf")
        _check_keys(gvf, GvfParams, "gvf")
        kwargs["gvf"] = GvfParams(**gvf)
    if "human" in data:
        human = dict(data.pop("human"))
        _check_keys(human, HumanModelConfig, "human")
        if "kind" in human:
            try:
                human["kind"] = HumanKind(human["kind"])
            except ValueError:
                raise ConfigError(f"unknown human kind {human['kind']!r}") from None
        kwargs["human"] = HumanModelConfig(**human)
    if "conditions" in data:
        kwargs["conditions"] = tuple(parse_condition(c) for c in data.pop("conditions"))
    if "agents" in data:
        kwargs["agents"] = tuple(parse_agent(a) for a in data.pop("agents"))
    kwargs.update(data)
    try:
        return ExperimentConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    raw = Path(path).read_text(encoding="utf-8")
    data = yaml.safe_load(raw)
    if data is None:
        return ExperimentConfig()
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    return config_from_dict(data)


def parse_cells(spec: str) -> list[tuple[IsiCondition, AgentKind]]:
    """Parse a CLI cell list like ``fixed:tct,random:none``."""
    cells = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            cond_label, agent = part.split(":")
        except ValueError:
            raise ConfigError(f"bad cell spec {part!r}; expected COND:AGENT") from None
        cells.append((parse_condition(cond_label.strip()), parse_agent(agent.strip())))
    if not cells:
        raise ConfigError("empty cell list")
    return cells
