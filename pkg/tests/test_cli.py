"""CLI contract: exit codes, output files, sweep table."""

import csv
import io
from pathlib import Path

import pytest

from gaze_drive.cli import EXIT_ERROR, EXIT_OK, EXIT_TIMEOUT, main
from gaze_drive.scenario import default_scenario_path

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "gaze_drive" / "data"
JOY_SCRIPT = DATA_DIR / "joystick_course.script"


def run_cli(*argv):
    return main(list(argv))


def test_run_default_scenario_reaches_goal(tmp_path, capsys):
    code = run_cli("run", "--out-dir", str(tmp_path))
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "goal in" in out
    trace = (tmp_path / "episode.trace.csv").read_text()
    assert trace.splitlines()[0] == "t,x,y,theta,fx,fy,vx,vy"
    report = (tmp_path / "episode.report.yaml").read_text()
    assert "reached: true" in report


def test_run_trace_monotone_grid(tmp_path):
    run_cli("run", "--out-dir", str(tmp_path), "--t-limit", "2.0")
    rows = list(csv.DictReader(io.StringIO((tmp_path / "episode.trace.csv").read_text())))
    times = [float(r["t"]) for r in rows]
    assert times == [pytest.approx(0.01 * i) for i in range(len(times))]


def test_run_timeout_exit_code(capsys):
    code = run_cli("run", "--t-limit", "0.1")
    assert code == EXIT_TIMEOUT
    assert "timeout" in capsys.readouterr().out


def test_run_missing_scenario_exit_code(capsys):
    code = run_cli("run", "--scenario", "/no/such/file.yaml")
    assert code == EXIT_ERROR
    assert "/no/such/file.yaml" in capsys.readouterr().err


def test_run_determinism_identical_trace_bytes(tmp_path):
    run_cli("run", "--out-dir", str(tmp_path / "a"))
    run_cli("run", "--out-dir", str(tmp_path / "b"))
    a = (tmp_path / "a" / "episode.trace.csv").read_bytes()
    b = (tmp_path / "b" / "episode.trace.csv").read_bytes()
    assert a == b


def test_sweep_ordering(tmp_path, capsys):
    code = run_cli("sweep", "--damping", "10,20,30", "--out-dir", str(tmp_path))
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "strictly increasing with damping: yes" in out
    rows = list(csv.DictReader(io.StringIO((tmp_path / "sweep.csv").read_text())))
    assert [float(r["damping"]) for r in rows] == [10.0, 20.0, 30.0]
    times = [float(r["time_to_goal"]) for r in rows]
    assert times[0] < times[1] < times[2]
    assert all(int(r["collisions"]) == 0 for r in rows)


def test_sweep_single_value(capsys):
    code = run_cli("sweep", "--damping", "20")
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    data_rows = [l for l in lines if l and not l.startswith("#") and not l.startswith("damping")]
    assert len(data_rows) == 1


def test_sweep_rejects_negative_damping(capsys):
    code = run_cli("sweep", "--damping", "-5")
    assert code == EXIT_ERROR
    assert "damping" in capsys.readouterr().err


def test_joystick_script_run(capsys):
    code = run_cli("run", "--script", str(JOY_SCRIPT))
    assert code == EXIT_OK
    assert "goal in" in capsys.readouterr().out


def test_validate_ok(capsys):
    code = run_cli("validate", "--scenario", str(default_scenario_path()), "--script", str(JOY_SCRIPT))
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "scenario ok" in out and "script ok" in out


def test_validate_bad_script(tmp_path, capsys):
    bad = tmp_path / "bad.script"
    bad.write_text("schema_version, 1\n0.0, gaze, nope, 1.0, 1\n")
    code = run_cli("validate", "--script", str(bad))
    assert code == EXIT_ERROR
    assert "line 2" in capsys.readouterr().err


def test_replay_missing_session(capsys):
    code = run_cli("replay", "/no/such/session.jsonl")
    assert code == EXIT_ERROR
