import csv

import pytest

from eogchair.cli import main
from eogchair.decision import load_commands_csv
from eogchair.harness import load_report_csv
from eogchair.sallen_key import load_coeffs_csv
from eogchair.signal_model import Direction, load_trace_csv


@pytest.fixture
def script(tmp_path):
    path = tmp_path / "script.txt"
    path.write_text("Right,0.3,0.4,1200\nLeft,1.2,0.4,800\nRight,2.1,0.4,2000\n")
    return path


@pytest.fixture
def trace_csv(tmp_path, script):
    out = tmp_path / "trace.csv"
    assert main(["synth", str(script), "-o", str(out), "--total-s", "3"]) == 0
    return out


def test_synth_writes_trace(trace_csv):
    tr = load_trace_csv(trace_csv)
    assert tr.length == 750 and tr.sample_rate_hz == 250
    assert tr.v_p_uV.max() == pytest.approx(2000)


def test_synth_with_noise_is_seeded(tmp_path, script):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["synth", str(script), "-o", str(p), "--total-s", "3",
                     "--white-sigma", "20", "--seed", "4"]) == 0
    assert a.read_text() == b.read_text()


def test_classify_and_motor_log(tmp_path, trace_csv):
    out, mlog = tmp_path / "cmds.csv", tmp_path / "motor.csv"
    assert main(["classify", str(trace_csv), "-o", str(out), "--motor-log", str(mlog)]) == 0
    cmds = load_commands_csv(out)
    assert [c.direction for c in cmds] == [Direction.RIGHT, Direction.LEFT, Direction.RIGHT]
    with open(mlog) as f:
        states = [row["state"] for row in csv.DictReader(f)]
    assert states == ["Stop", "Right", "Stop", "Left", "Stop", "Right"]


def test_filter_with_coefficient_dump(tmp_path, trace_csv):
    out, coeffs = tmp_path / "f.csv", tmp_path / "c.csv"
    assert main(["filter", str(trace_csv), "-o", str(out), "--dump-coeffs", str(coeffs)]) == 0
    assert load_coeffs_csv(coeffs).fs_hz == 250
    with open(out) as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 750
    assert max(float(r["v_out_V"]) for r in rows) == pytest.approx(2.0, rel=0.02)


def test_respond(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["respond", "--points", "251", "-o", str(out)]) == 0
    with open(out) as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 251
    at_fc = next(r for r in rows if float(r["f_hz"]) == 50.0)
    assert float(at_fc["magnitude"]) == pytest.approx(0.70710678, rel=1e-3)


def test_evaluate_small_run_csv(tmp_path):
    out = tmp_path / "rep.csv"
    assert main(["evaluate", "--trials", "40", "--format", "csv", "--seed", "3", "-o", str(out)]) == 0
    report = load_report_csv(out.read_text())
    assert [s.subject_id for s in report.subjects] == [1, 2, 3, 4, 5]
    assert all(s.n_trials == 40 for s in report.subjects)


def test_evaluate_to_stdout(capsys):
    assert main(["evaluate", "--trials", "20", "--format", "md"]) == 0
    assert capsys.readouterr().out.startswith("| Subjects | Accuracy | Variance |")


def test_validation_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("Up,0,0.4,500\n")
    assert main(["synth", str(bad), "-o", str(tmp_path / "x.csv"), "--total-s", "1"]) == 1
    assert "error" in capsys.readouterr().err


def test_cutoff_above_nyquist_is_validation_error():
    assert main(["respond", "--fc", "200"]) == 1


def test_io_error_exit_code(tmp_path):
    assert main(["classify", str(tmp_path / "missing.csv"), "-o", str(tmp_path / "o.csv")]) == 2


def test_bad_config_exit_code(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("frontend:\n  gain_A: -3\n")
    assert main(["evaluate", "--config", str(cfg), "--trials", "1"]) == 1
