"""Structured export and re-import of trial logs, metrics, and summaries.

Every output is a line-delimited JSON file whose first line is a header
carrying the schema version and config hash.  Exports are pure functions of
their inputs, so re-exporting the same data produces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .env import IsiCondition, SimConfig
from .harness import LABEL_AGENTS, SCHEMA_VERSION, TrialLog, agent_label
from .metrics import Aggregate, aggregate, pulse_metrics, trial_performance


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _write_lines(path: Path, lines) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with path.open("w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc
    return path


def trial_log_lines(log: TrialLog):
    yield _dumps(log.header())
    for k in range(len(log)):
        yield _dumps(log.record(k))


def trial_log_bytes(log: TrialLog) -> bytes:
    return ("\n".join(trial_log_lines(log)) + "\n").encode()


def write_trial_log(log: TrialLog, out_dir: str | Path, name: str | None = None) -> Path:
    path = Path(out_dir) / (name if name is not None else log.file_name())
    return _write_lines(path, trial_log_lines(log))


def read_trial_log(path: str | Path) -> TrialLog:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("type") != "trial_log":
            raise ValueError(f"{path} is not a trial log")
        sim = SimConfig(**header["sim"])
        log = TrialLog(condition=IsiCondition(header["condition"]),
                       agent_kind=LABEL_AGENTS[header["agent_kind"]],
                       seed=header["seed"], config_hash=header["config_hash"],
                       sim=sim, session=header["session"], trial=header["trial"],
                       complete=header["complete"])
        log.pulses = [(p["index"], p["onset_t"], p["falling_t"])
                      for p in header["pulses"]]
        for line in fh:
            row = json.loads(line)
            log.step.append(row["step"])
            log.t.append(row["t"])
            log.pos_x.append(row["pos"][0])
            log.pos_y.append(row["pos"][1])
            log.gauge.append(row["gauge"])
            log.points.append(row["points"])
            log.hazard_active.append(row["hazard_active"])
            log.being_hit.append(row["being_hit"])
            log.prediction.append(row.get("prediction", float("nan")))
            log.signal.append(row["signal"])
            log.cache_event.append(row["cache_event"])
    return log


def trial_log_paths(logs_dir: str | Path) -> list[Path]:
    return sorted(Path(logs_dir).glob("trial_*.jsonl"))


def _trial_key(log: TrialLog) -> dict:
    return {
        "condition": log.condition.value,
        "agent_kind": agent_label(log.agent_kind),
        "session": log.session,
        "trial": log.trial,
        "seed": log.seed,
    }


def metrics_rows(log: TrialLog) -> list[dict]:
    """Pulse-interval rows plus one trial-performance row for one log."""
    key = _trial_key(log)
    rows = []
    for pm in pulse_metrics(log, log.sim):
        rows.append({"row": "pulse", **key,
                     "pulse_index": pm.pulse_index,
                     "position": pm.position,
                     "onset_t": pm.onset_t,
                     "signal_to_hazard": pm.signal_to_hazard,
                     "signal_to_exit": pm.signal_to_exit,
                     "useful": pm.useful})
    perf = trial_performance(log, log.sim)
    rows.append({"row": "trial", **key,
                 "points_cached": perf.points_cached,
                 "points_norm": perf.points_norm,
                 "hit_steps": perf.hit_steps,
                 "hit_steps_norm": perf.hit_steps_norm,
                 "heat_gain": perf.heat_gain,
                 "heat_gain_norm": perf.heat_gain_norm})
    return rows


def write_metrics(logs: list[TrialLog], out_path: str | Path) -> Path:
    # Canonical trial order, so the table is identical whether it was derived
    # from in-memory logs or re-read from files in any order.
    logs = sorted(logs, key=lambda log: (log.condition.value,
                                         agent_label(log.agent_kind),
                                         log.session, log.trial))
    hashes = {log.config_hash for log in logs}
    header = {"type": "metrics", "schema_version": SCHEMA_VERSION,
              "config_hash": hashes.pop() if len(hashes) == 1 else "mixed",
              "n_trials": len(logs)}

    def lines():
        yield _dumps(header)
        for log in logs:
            for row in metrics_rows(log):
                yield _dumps(row)

    return _write_lines(Path(out_path), lines())


def read_metrics(path: str | Path) -> tuple[dict, list[dict]]:
    with Path(path).open("r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("type") != "metrics":
            raise ValueError(f"{path} is not a metrics table")
        return header, [json.loads(line) for line in fh]


def _agg_fields(prefix: str, agg: Aggregate) -> dict:
    return {f"{prefix}_mean": agg.mean, f"{prefix}_ci_lo": agg.ci_lo,
            f"{prefix}_ci_hi": agg.ci_hi}


def summary_rows(rows: list[dict]) -> list[dict]:
    """Cell-level performance aggregates and per-pulse-position interval aggregates."""
    cells = sorted({(r["condition"], r["agent_kind"]) for r in rows})
    out = []
    for condition, kind in cells:
        trials = [r for r in rows
                  if r["row"] == "trial" and r["condition"] == condition
                  and r["agent_kind"] == kind]
        if trials:
            row = {"row": "cell_performance", "condition": condition,
                   "agent_kind": kind, "n_trials": len(trials)}
            for metric in ("points_norm", "hit_steps_norm", "heat_gain_norm"):
                row.update(_agg_fields(metric, aggregate(r[metric] for r in trials)))
            out.append(row)
    for condition, kind in cells:
        pulses = [r for r in rows
                  if r["row"] == "pulse" and r["condition"] == condition
                  and r["agent_kind"] == kind]
        for position in sorted({r["position"] for r in pulses}):
            group = [r for r in pulses if r["position"] == position]
            leads = [r["signal_to_hazard"] for r in group
                     if r["signal_to_hazard"] is not None]
            s2es = [r["signal_to_exit"] for r in group
                    if r["signal_to_exit"] is not None]
            row = {"row": "pulse_interval", "condition": condition,
                   "agent_kind": kind, "position": position,
                   "n_pulses": len(group), "n_leads": len(leads), "n_exits": len(s2es)}
            if leads:
                row.update(_agg_fields("lead", aggregate(leads)))
            if s2es:
                row.update(_agg_fields("exit", aggregate(s2es)))
            out.append(row)
    return out


def write_summary(metrics_header: dict, rows: list[dict], out_path: str | Path) -> Path:
    header = {"type": "summary", "schema_version": SCHEMA_VERSION,
              "config_hash": metrics_header.get("config_hash", "unknown")}

    def lines():
        yield _dumps(header)
        for row in summary_rows(rows):
            yield _dumps(row)

    return _write_lines(Path(out_path), lines())
