"""Session core and websocket service tests."""

from __future__ import annotations

import asyncio
import json
import time

import pytest
from starlette.testclient import TestClient

from frosthollow.agent import ReprKind
from frosthollow.env import IsiCondition
from frosthollow.export import write_trial_log
from frosthollow.server import create_app, paced_loop, parse_hello
from frosthollow.session import (ClientInput, Session, SessionConfig, read_trace,
                                 replay_trace)


def make_session(**kwargs) -> Session:
    defaults = dict(condition=IsiCondition.FIXED, agent_kind=None, seed=7,
                    trial_len=60.0)
    defaults.update(kwargs)
    return Session(SessionConfig(**defaults))


class TestSessionCore:
    def test_initial_frame(self):
        frame = make_session().initial_frame()
        assert (frame.step, frame.t, frame.gauge, frame.points) == (0, 0.0, 0.0, 0)
        assert not frame.agent_signal and not frame.trial_over

    def test_tick_hz_dt_consistency(self):
        cfg = SessionConfig(tick_hz=125)
        assert cfg.dt * cfg.tick_hz == pytest.approx(1.0)

    def test_hold_semantics(self):
        s = make_session()
        s.submit_input(ClientInput(seq=1, move_to=(0.4, 0.1)))
        f1 = s.tick()
        assert f1.pos == (0.4, 0.1)
        f2 = s.tick()  # no input: position held
        assert f2.pos == (0.4, 0.1)

    def test_stale_seq_dropped(self):
        s = make_session()
        assert s.submit_input(ClientInput(seq=2, move_to=(0.1, 0.0)))
        assert not s.submit_input(ClientInput(seq=1, move_to=(0.9, 0.9)))
        assert s.tick().pos == (0.1, 0.0)

    def test_last_writer_wins_within_tick(self):
        s = make_session()
        s.submit_input(ClientInput(seq=1, move_to=(0.1, 0.0)))
        s.submit_input(ClientInput(seq=2, move_to=(0.2, 0.0)))
        assert s.tick().pos == (0.2, 0.0)

    def test_cache_with_full_gauge_scores(self):
        # Dodge outward whenever the hazard is active so the gauge can fill.
        s = make_session()
        frame = s.initial_frame()
        seq = 0
        for _ in range(s.sim.n_steps):
            seq += 1
            target = (1.5, 0.0) if frame.hazard_active else (0.0, 0.0)
            s.submit_input(ClientInput(seq=seq, move_to=target))
            frame = s.tick()
            if frame.gauge == s.sim.gauge_cap:
                break
        assert frame.gauge == s.sim.gauge_cap
        s.submit_input(ClientInput(seq=seq + 1, cache=True))
        frame = s.tick()
        assert frame.points == 1
        assert frame.gauge == 0.0

    def test_terminal_frame_repeats(self):
        s = make_session(trial_len=0.08)
        frames = [s.tick() for _ in range(13)]
        assert frames[9].trial_over
        assert frames[10] == frames[9] == frames[12]

    def test_no_agent_never_signals(self):
        s = make_session(trial_len=1.0)
        assert not any(s.tick().agent_signal for _ in range(125))

    def test_prediction_hidden_unless_debug(self):
        s = make_session(agent_kind=ReprKind.TILE_CODED_TRACE, trial_len=1.0)
        assert s.tick().to_dict().get("prediction") is None
        s_dbg = make_session(agent_kind=ReprKind.TILE_CODED_TRACE, trial_len=1.0,
                             debug_prediction=True)
        assert "prediction" in s_dbg.tick().to_dict()

    def test_deterministic_frame_streams(self):
        def play():
            s = make_session(agent_kind=ReprKind.BIT_CASCADE, trial_len=5.0)
            frames = [s.initial_frame()]
            for k in range(s.sim.n_steps):
                if k % 7 == 0:
                    s.submit_input(ClientInput(seq=k + 1, move_to=(0.01 * (k % 50), 0.0),
                                               cache=(k % 11 == 0)))
                frames.append(s.tick())
            return frames

        assert play() == play()

    def test_incomplete_flag(self):
        s = make_session(trial_len=1.0)
        s.tick()
        log = s.end()
        assert not log.complete
        done = make_session(trial_len=0.08)
        for _ in range(10):
            done.tick()
        assert done.end().complete


class TestReplayEquivalence:
    def test_session_log_reproduced_by_run_trial(self, tmp_path):
        s = make_session(agent_kind=ReprKind.TILE_CODED_TRACE, trial_len=20.0,
                         condition=IsiCondition.FIXED, seed=13)
        for k in range(s.sim.n_steps):
            if k % 5 == 0:
                radius = 1.2 if (k // 5) % 2 else 0.0
                s.submit_input(ClientInput(seq=k + 1, move_to=(radius, 0.0),
                                           cache=(k % 40 == 0)))
            s.tick()
        recorded = s.end()
        trace_path = s.write_trace(tmp_path / "trace.jsonl")

        header, actions = read_trace(trace_path)
        replayed = replay_trace(header, actions)

        original_bytes = write_trial_log(recorded, tmp_path / "a").read_bytes()
        replayed_bytes = write_trial_log(replayed, tmp_path / "b").read_bytes()
        assert original_bytes == replayed_bytes


class TestPacing:
    def test_mean_tick_period_within_ten_percent(self):
        session = make_session(trial_len=5.0)
        stamps: list[float] = []

        async def run():
            async def emit(_frame):
                stamps.append(time.perf_counter())
            await paced_loop(session, session.cfg.tick_hz, emit)

        asyncio.run(run())
        assert len(stamps) == 625
        window = stamps[-1] - stamps[0]
        mean_period = window / (len(stamps) - 1)
        assert abs(mean_period - 0.008) <= 0.1 * 0.008


class TestWebsocketService:
    def hello(self, **kw):
        msg = {"type": "hello", "condition": "fixed", "agent_kind": "none",
               "tick_hz": 125, "seed": 3, "trial_len": 0.2, "lockstep": True}
        msg.update(kw)
        return msg

    def test_lockstep_session_full_protocol(self, tmp_path):
        app = create_app(sessions_dir=tmp_path)
        with TestClient(app) as client:
            with client.websocket_connect("/ws") as ws:
                ws.send_text(json.dumps(self.hello()))
                first = json.loads(ws.receive_text())
                assert first["type"] == "frame" and first["step"] == 0
                frame = None
                for k in range(25):
                    ws.send_text(json.dumps({"type": "input", "seq": k + 1,
                                             "move_to": [0.05, 0.0], "cache": False}))
                    frame = json.loads(ws.receive_text())
                    assert frame["type"] == "frame"
                assert frame["trial_over"]
                summary = json.loads(ws.receive_text())
                assert summary["type"] == "summary"
                assert set(summary) >= {"points_cached", "hit_steps_norm",
                                        "heat_gain_norm"}
                bye = json.loads(ws.receive_text())
                assert bye["type"] == "bye"
        names = sorted(p.name for p in tmp_path.iterdir())
        assert any("log" in n for n in names) and any("trace" in n for n in names)

    def test_paced_session_over_websocket(self, tmp_path):
        app = create_app(sessions_dir=tmp_path)
        with TestClient(app) as client:
            with client.websocket_connect("/ws") as ws:
                ws.send_text(json.dumps(self.hello(lockstep=False)))
                first = json.loads(ws.receive_text())
                assert first["step"] == 0
                ws.send_text(json.dumps({"type": "input", "seq": 1,
                                         "move_to": [0.0, 0.0], "cache": False}))
                got = [json.loads(ws.receive_text()) for _ in range(27)]
                frames = [m for m in got if m["type"] == "frame"]
                assert len(frames) == 25
                assert frames[-1]["trial_over"]
                assert got[-2]["type"] == "summary"
                assert got[-1]["type"] == "bye"

    def test_invalid_hello_rejected(self, tmp_path):
        app = create_app(sessions_dir=tmp_path)
        with TestClient(app) as client:
            with client.websocket_connect("/ws") as ws:
                ws.send_text(json.dumps(self.hello(condition="sideways")))
                reply = json.loads(ws.receive_text())
                assert reply["type"] == "error"
                assert "sideways" in reply["reason"]

    def test_malformed_input_skipped(self, tmp_path):
        app = create_app(sessions_dir=tmp_path)
        with TestClient(app) as client:
            with client.websocket_connect("/ws") as ws:
                ws.send_text(json.dumps(self.hello()))
                json.loads(ws.receive_text())
                ws.send_text("{not json")
                ws.send_text(json.dumps({"type": "input", "seq": 1,
                                         "move_to": None, "cache": False}))
                frame = json.loads(ws.receive_text())
                assert frame["type"] == "frame" and frame["step"] == 1

    def test_disconnect_saves_incomplete_session(self, tmp_path):
        app = create_app(sessions_dir=tmp_path)
        with TestClient(app) as client:
            with client.websocket_connect("/ws") as ws:
                ws.send_text(json.dumps(self.hello(trial_len=10.0)))
                json.loads(ws.receive_text())
                ws.send_text(json.dumps({"type": "input", "seq": 1,
                                         "move_to": [0.1, 0.0], "cache": False}))
                json.loads(ws.receive_text())
        logs = [p for p in tmp_path.iterdir() if "log" in p.name]
        assert logs
        header = json.loads(logs[0].read_text().splitlines()[0])
        assert header["complete"] is False


class TestParseHello:
    def test_defaults(self):
        cfg, lockstep = parse_hello({"type": "hello"})
        assert cfg.condition is IsiCondition.FIXED
        assert cfg.agent_kind is None
        assert not lockstep

    def test_requires_hello_type(self):
        from frosthollow.config import ConfigError
        with pytest.raises(ConfigError):
            parse_hello({"type": "input"})
