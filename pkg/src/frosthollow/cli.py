"""Command-line interface: run experiments, derive metrics, summarize, serve, replay."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, load_config, parse_cells


def _cmd_run(args: argparse.Namespace) -> int:
    from .export import write_metrics, write_trial_log
    from .harness import run_experiment

    cfg = load_config(args.config)
    if args.sessions is not None:
        cfg = replace(cfg, sessions=args.sessions)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    cells = parse_cells(args.cells) if args.cells else None

    out_dir = Path(cfg.output_dir)
    logs = []
    for log in run_experiment(cfg, cells):
        path = write_trial_log(log, out_dir)
        logs.append(log)
        print(f"wrote {path}")
    if logs:
        path = write_metrics(logs, out_dir / "metrics.jsonl")
        print(f"wrote {path}")
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    from .export import read_trial_log, trial_log_paths, write_metrics

    paths = trial_log_paths(args.logs)
    if not paths:
        print(f"no trial logs found under {args.logs}", file=sys.stderr)
        return 1
    logs = [read_trial_log(p) for p in paths]
    out = Path(args.out) if args.out else Path(args.logs) / "metrics.jsonl"
    print(f"wrote {write_metrics(logs, out)}")
    return 0


def _cmd_summarize(args: argparse.Namespace) -> int:
    from .export import read_metrics, write_summary

    metrics_path = Path(args.metrics)
    if metrics_path.is_dir():
        metrics_path = metrics_path / "metrics.jsonl"
    header, rows = read_metrics(metrics_path)
    out = Path(args.out) if args.out else metrics_path.parent / "summary.jsonl"
    print(f"wrote {write_summary(header, rows, out)}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    serve(args.bind, config_path=args.config, sessions_dir=args.sessions_dir,
          static_dir=args.static)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    from .export import trial_log_bytes, write_trial_log
    from .session import read_trace, replay_trace

    header, actions = read_trace(args.trace)
    replayed = replay_trace(header, actions)
    if args.out:
        print(f"wrote {write_trial_log(replayed, Path(args.out).parent, name=Path(args.out).name)}")
    if args.log:
        if trial_log_bytes(replayed) == Path(args.log).read_bytes():
            print("replay identical")
            return 0
        print("replay DIFFERS from recorded log", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="frosthollow",
                                     description="Frost Hollow simulator and experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a seeded experiment grid")
    p_run.add_argument("--config", help="YAML config file")
    p_run.add_argument("--cells", help="cell list, e.g. fixed:tct,random:none")
    p_run.add_argument("--sessions", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out", help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_met = sub.add_parser("metrics", help="derive the per-pulse metrics table from trial logs")
    p_met.add_argument("--logs", required=True, help="directory containing trial_*.jsonl")
    p_met.add_argument("--out")
    p_met.set_defaults(func=_cmd_metrics)

    p_sum = sub.add_parser("summarize", help="aggregate a metrics table into a cell summary")
    p_sum.add_argument("--metrics", required=True, help="metrics file or its directory")
    p_sum.add_argument("--out")
    p_sum.set_defaults(func=_cmd_summarize)

    p_srv = sub.add_parser("serve", help="host live sessions over a websocket")
    p_srv.add_argument("--bind", default="127.0.0.1:8000")
    p_srv.add_argument("--config", help="YAML config file (gvf parameters)")
    p_srv.add_argument("--sessions-dir", default="sessions")
    p_srv.add_argument("--static", help="serve a static client from this directory")
    p_srv.set_defaults(func=_cmd_serve)

    p_rep = sub.add_parser("replay", help="replay a recorded session input trace")
    p_rep.add_argument("--trace", required=True)
    p_rep.add_argument("--log", help="compare against this recorded session log")
    p_rep.add_argument("--out", help="write the replayed log here")
    p_rep.set_defaults(func=_cmd_replay)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
