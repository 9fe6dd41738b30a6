"""Real-time session service.

Hosts the authoritative session loop and exchanges JSON text messages over a
websocket: ``hello`` (client -> server session request), ``frame`` (server ->
client state), ``input`` (client -> server), ``summary`` and ``bye`` (server ->
client at trial end).  The clock starts on the first client message after the
initial frame.  A ``lockstep: true`` hello field makes the server tick once
per received input instead of pacing by wall clock (deterministic testing).
"""

from __future__ import annotations

import asyncio
import json
import uuid
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .agent import GvfParams
from .config import ConfigError, parse_agent, parse_condition
from .export import write_trial_log
from .session import ClientInput, Session, SessionConfig


def parse_hello(msg: dict) -> tuple[SessionConfig, bool]:
    if msg.get("type") != "hello":
        raise ConfigError("first message must be a hello")
    try:
        cfg = SessionConfig(
            condition=parse_condition(msg.get("condition", "fixed")),
            agent_kind=parse_agent(msg.get("agent_kind", "none")),
            tick_hz=int(msg.get("tick_hz", 125)),
            seed=int(msg.get("seed", 0)),
            trial_len=float(msg.get("trial_len", 300.0)),
            debug_prediction=bool(msg.get("debug_prediction", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg, bool(msg.get("lockstep", False))


def parse_input(msg: dict) -> ClientInput | None:
    if msg.get("type") != "input":
        return None
    move_to = msg.get("move_to")
    return ClientInput(
        seq=int(msg.get("seq", 0)),
        move_to=None if move_to is None else (float(move_to[0]), float(move_to[1])),
        cache=bool(msg.get("cache", False)),
    )


async def paced_loop(session: Session, tick_hz: int, emit) -> None:
    """Tick at wall-clock rate; target times are absolute to avoid drift."""
    loop = asyncio.get_running_loop()
    t0 = loop.time()
    k = 1
    while not session.trial_over:
        delay = t0 + k / tick_hz - loop.time()
        if delay > 0:
            await asyncio.sleep(delay)
        frame = session.tick()
        await emit(frame)
        k += 1


def create_app(sessions_dir: str | Path = "sessions",
               gvf: GvfParams | None = None) -> FastAPI:
    app = FastAPI(title="frosthollow-session-service")
    sessions_dir = Path(sessions_dir)

    def save_session(session: Session) -> tuple[Path, Path]:
        sid = uuid.uuid4().hex[:8]
        log = session.end()
        log_path = write_trial_log(log, sessions_dir, name=f"session_{sid}_log.jsonl")
        trace_path = session.write_trace(sessions_dir / f"session_{sid}_trace.jsonl")
        return log_path, trace_path

    async def send_json(ws: WebSocket, obj: dict) -> None:
        await ws.send_text(json.dumps(obj, separators=(",", ":")))

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        try:
            hello = json.loads(await ws.receive_text())
        except (json.JSONDecodeError, WebSocketDisconnect):
            await ws.close()
            return
        try:
            cfg, lockstep = parse_hello(hello)
        except ConfigError as exc:
            await send_json(ws, {"type": "error", "reason": str(exc)})
            await ws.close()
            return

        session = Session(cfg, gvf)
        await send_json(ws, session.initial_frame().to_dict())
        try:
            if lockstep:
                await _run_lockstep(ws, session, send_json)
            else:
                await _run_paced(ws, session, send_json)
            log_path, trace_path = save_session(session)
            await send_json(ws, {"type": "summary", **asdict(session.summary())})
            await send_json(ws, {"type": "bye", "log": str(log_path),
                                 "trace": str(trace_path)})
            await ws.close()
        except WebSocketDisconnect:
            save_session(session)

    async def _run_lockstep(ws: WebSocket, session: Session, send) -> None:
        # Clock starts on (and advances with) each client message.
        while not session.trial_over:
            try:
                msg = json.loads(await ws.receive_text())
            except json.JSONDecodeError:
                continue
            if msg.get("type") == "bye":
                return
            ci = parse_input(msg)
            if ci is not None:
                session.submit_input(ci)
            await send(ws, session.tick().to_dict())

    async def _run_paced(ws: WebSocket, session: Session, send) -> None:
        # Wait for the first client message: it acknowledges the initial frame.
        msg = json.loads(await ws.receive_text())
        if msg.get("type") == "bye":
            return
        ci = parse_input(msg)
        if ci is not None:
            session.submit_input(ci)

        stop = asyncio.Event()

        async def reader() -> None:
            try:
                while not stop.is_set():
                    raw = await ws.receive_text()
                    try:
                        msg = json.loads(raw)
                    except json.JSONDecodeError:
                        continue
                    if msg.get("type") == "bye":
                        stop.set()
                        return
                    ci = parse_input(msg)
                    if ci is not None:
                        session.submit_input(ci)
            except (WebSocketDisconnect, RuntimeError):
                stop.set()

        reader_task = asyncio.create_task(reader())

        async def emit(frame) -> None:
            if stop.is_set():
                raise WebSocketDisconnect(code=1000)
            await send(ws, frame.to_dict())

        try:
            await paced_loop(session, session.cfg.tick_hz, emit)
        finally:
            stop.set()
            reader_task.cancel()

    return app


def serve(bind: str, config_path: str | None = None,
          sessions_dir: str = "sessions", static_dir: str | None = None) -> None:
    """Blocking entry point for the ``serve`` CLI subcommand."""
    import uvicorn

    from .config import load_config

    gvf = load_config(config_path).gvf
    app = create_app(sessions_dir=sessions_dir, gvf=gvf)
    if static_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    host, _, port = bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
