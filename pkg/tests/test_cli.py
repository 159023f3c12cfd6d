import json
import socket
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

from sa_engine.cli import EXIT_ENVIRONMENT, EXIT_VALIDATION, _default_ports, main
from sa_engine.net import DEFAULT_HUB_PORT, DEFAULT_UI_PORT, HubService
from sa_engine.scenario import load_scenario
from sa_engine.wire import FrameDecoder, Message, frame_encode

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"
CONVOY = str(SCENARIO_DIR / "convoy-corridor.json")


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class TestRunCommand:
    def test_success_exit_zero(self, tmp_path):
        out = tmp_path / "run.ndjson"
        result = CliRunner().invoke(main, ["run", CONVOY, "-o", str(out)])
        assert result.exit_code == 0
        assert out.exists()

    def test_missing_scenario_is_environment_error(self, tmp_path):
        result = CliRunner().invoke(main, ["run", "/no/such/file.json",
                                           "-o", str(tmp_path / "x")])
        assert result.exit_code == EXIT_ENVIRONMENT

    def test_invalid_scenario_is_validation_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"entities": [], "foci": {}}), encoding="utf-8")
        result = CliRunner().invoke(main, ["run", str(bad), "-o", str(tmp_path / "x")])
        assert result.exit_code == EXIT_VALIDATION
        assert "zone" in result.output

    def test_unwritable_output_is_environment_error(self):
        result = CliRunner().invoke(main, ["run", CONVOY, "-o", "/no/such/dir/out"])
        assert result.exit_code == EXIT_ENVIRONMENT


class TestReplayCommand:
    def test_round_trip_exit_zero(self, tmp_path):
        out = tmp_path / "run.ndjson"
        runner = CliRunner()
        assert runner.invoke(main, ["run", CONVOY, "-o", str(out)]).exit_code == 0
        result = runner.invoke(main, ["replay", str(out)])
        assert result.exit_code == 0
        assert json.loads(result.output)["ok"] is True

    def test_divergent_record_exit_one(self, tmp_path):
        out = tmp_path / "run.ndjson"
        CliRunner().invoke(main, ["run", CONVOY, "-o", str(out)])
        lines = out.read_bytes().split(b"\n")
        lines[1] = lines[1].replace(b'"show"', b'"hide"', 1)
        out.write_bytes(b"\n".join(lines))
        result = CliRunner().invoke(main, ["replay", str(out)])
        assert result.exit_code == EXIT_VALIDATION

    def test_missing_record_exit_two(self):
        result = CliRunner().invoke(main, ["replay", "/no/such/records"])
        assert result.exit_code == EXIT_ENVIRONMENT


class TestProjectCommand:
    def test_writes_placements(self, tmp_path):
        out = tmp_path / "placements.ndjson"
        result = CliRunner().invoke(
            main, ["project", str(SCENARIO_DIR / "camera-overwatch.json"),
                   "-o", str(out)])
        assert result.exit_code == 0
        records = [json.loads(l) for l in out.read_text().splitlines()]
        assert records and all(len(r["homography"]) == 9 for r in records)


class TestHubAddrEnv:
    def test_default_ports(self, monkeypatch):
        monkeypatch.delenv("SA_HUB_ADDR", raising=False)
        assert _default_ports() == ("127.0.0.1", DEFAULT_HUB_PORT)
        assert (DEFAULT_HUB_PORT, DEFAULT_UI_PORT) == (7411, 7412)

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("SA_HUB_ADDR", "10.0.0.9:9001")
        assert _default_ports() == ("10.0.0.9", 9001)

    def test_env_port_only(self, monkeypatch):
        monkeypatch.setenv("SA_HUB_ADDR", ":9002")
        assert _default_ports() == ("127.0.0.1", 9002)


class FederateClient:
    """Minimal framed TCP federate for service tests."""

    def __init__(self, port, fed_id, kind="c2", timeout=5.0):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=timeout)
        self.id = fed_id
        self.seq = 0
        self.decoder = FrameDecoder()
        self.inbox = []
        self.send("JOIN", {"kind": kind})

    def send(self, mtype, payload=None):
        self.seq += 1
        self.sock.sendall(frame_encode(Message(mtype, self.id, self.seq, payload or {})))

    def recv_until(self, predicate, deadline=5.0):
        end = time.monotonic() + deadline
        while time.monotonic() < end:
            for msg in self.inbox:
                if predicate(msg):
                    return msg
            try:
                data = self.sock.recv(65536)
            except socket.timeout:
                continue
            if not data:
                break
            self.inbox.extend(self.decoder.feed(data))
        raise AssertionError(f"no matching message; got {[m.type for m in self.inbox]}")

    def close(self):
        self.sock.close()


@pytest.fixture
def service():
    sc = load_scenario(SCENARIO_DIR / "convoy-corridor.json")
    svc = HubService(sc, hub_port=free_port(), ui_port=None, play_events=False)
    svc.start()
    yield svc
    svc.stop()


class TestServe:
    def test_join_gets_welcome_and_snapshot(self, service):
        fed = FederateClient(service.hub_port, "c2-1")
        welcome = fed.recv_until(lambda m: m.type == "WELCOME")
        assert welcome.payload["federate"] == "c2-1"
        snap = fed.recv_until(lambda m: m.type == "SNAPSHOT")
        assert len(snap.payload["entities"]) >= 30
        fed.close()

    def test_focus_update_triggers_decisions(self, service):
        fed = FederateClient(service.hub_port, "c2-1")
        fed.recv_until(lambda m: m.type == "SNAPSHOT")
        fed.send("FOCUS_UPDATE", {"awareness_range": 5.0})
        dec = fed.recv_until(lambda m: m.type == "DECISIONS")
        states = {eid: d["state"] for eid, d in dec.payload["decisions"].items()}
        assert states  # a decision for every entity
        # Collapsed awareness hides the far hostiles but never the vitals.
        assert states["ied-0"] == "show"
        assert states["hos-far-0"] == "hide"
        fed.close()

    def test_entity_update_fans_out(self, service):
        a = FederateClient(service.hub_port, "fed-a")
        b = FederateClient(service.hub_port, "fed-b")
        b.recv_until(lambda m: m.type == "SNAPSHOT")
        a.recv_until(lambda m: m.type == "SNAPSHOT")
        a.send("ENTITY_UPDATE", {"id": "live-1", "class": "hostile",
                                 "position": [310.0, 80.0, 0.0],
                                 "version": 1, "owner": "fed-a"})
        fwd = b.recv_until(lambda m: m.type == "ENTITY_UPDATE")
        assert fwd.payload["id"] == "live-1"
        dec = b.recv_until(lambda m: m.type == "DECISIONS"
                           and "live-1" in m.payload["decisions"])
        assert dec.payload["decisions"]["live-1"]["state"] == "show"
        a.close()
        b.close()

    def test_rejoin_converges_from_snapshot(self, service):
        a = FederateClient(service.hub_port, "fed-a")
        a.recv_until(lambda m: m.type == "SNAPSHOT")
        a.send("ENTITY_UPDATE", {"id": "late-1", "class": "vehicle",
                                 "position": [1.0, 2.0, 0.0],
                                 "version": 4, "owner": "fed-a"})
        a.close()
        # A fresh connection under the same id sees the update it missed.
        a2 = FederateClient(service.hub_port, "fed-a")
        snap = a2.recv_until(lambda m: m.type == "SNAPSHOT")
        ids = {r["id"] for r in snap.payload["entities"]}
        assert "late-1" in ids
        a2.close()

    def test_non_join_first_message_disconnected(self, service):
        sock = socket.create_connection(("127.0.0.1", service.hub_port), timeout=5.0)
        sock.sendall(frame_encode(Message("HEARTBEAT", "rogue", 1)))
        sock.settimeout(5.0)
        chunks = b""
        while True:
            data = sock.recv(4096)
            if not data:
                break
            chunks += data
        sock.close()  # server closed on us without a WELCOME
        assert b"WELCOME" not in chunks
