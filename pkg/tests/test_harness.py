import numpy as np
import pytest

from eogchair.decision import PipelineConfig
from eogchair.errors import ValidationError
from eogchair.harness import (
    EvalReport, SubjectResult, TrialProtocol, evaluate, load_report_csv, render_report,
    run_trial, trial_direction, trial_seed,
)
from eogchair.signal_model import Direction, NoiseConfig, SubjectProfile

CFG = PipelineConfig()
QUIET = SubjectProfile(1, 800.0, 0.5)


def test_zero_noise_trial_is_correct():
    r = run_trial(QUIET, Direction.RIGHT, CFG, seed=5)
    assert r.correct and r.classified_direction is Direction.RIGHT and r.n_commands == 1


def test_trial_is_deterministic():
    noisy = SubjectProfile(2, 700.0, 0.5, NoiseConfig(white_sigma_uV=110, hum_amp_uV=20))
    assert run_trial(noisy, Direction.LEFT, CFG, 77) == run_trial(noisy, Direction.LEFT, CFG, 77)


def test_overwhelming_noise_mostly_fails():
    # filtered noise sigma around 0.6 * 2000 uV * 1000 = 1.2 V against a 0.1 V threshold
    loud = SubjectProfile(3, 500.0, 0.0, NoiseConfig(white_sigma_uV=2000))
    failures = sum(not run_trial(loud, Direction.RIGHT, CFG, s).correct for s in range(100))
    assert failures > 50


def test_balance_of_directions():
    for n in (1, 7, 10, 1000):
        dirs = [trial_direction(i) for i in range(n)]
        assert dirs.count(Direction.LEFT) == n // 2
        assert dirs.count(Direction.RIGHT) == n - n // 2


def test_trial_seed_depends_only_on_coordinates():
    assert trial_seed(0, 1, 5) == trial_seed(0, 1, 5)
    assert len({trial_seed(0, 1, i) for i in range(100)}) == 100
    assert trial_seed(0, 1, 5) != trial_seed(1, 1, 5) != trial_seed(0, 2, 5)
    assert 0 <= trial_seed(2**64 - 1, 5, 999) < 2**64


def test_clean_profiles_score_100():
    profiles = [SubjectProfile(i, 400.0 + 300 * i, 0.5) for i in range(1, 6)]
    report = evaluate(profiles, 200, CFG, master_seed=3)
    for s in report.subjects:
        assert s.accuracy_percent == 100.0 and s.variance_percent == 0.0 and s.n_trials == 200
    assert report.overall_accuracy_percent == 100.0


def test_evaluate_validation():
    with pytest.raises(ValidationError):
        evaluate([QUIET], 0, CFG)


def test_overall_is_trial_weighted():
    report = EvalReport((SubjectResult(1, 100.0, 0.0, 300), SubjectResult(2, 90.0, 0.0, 100)))
    assert report.overall_accuracy_percent == pytest.approx(97.5)


def test_accuracy_non_increasing_with_noise():
    means = []
    for scale in (1, 2, 4):
        p = SubjectProfile(1, 700.0, 0.5, NoiseConfig(white_sigma_uV=60 * scale, hum_amp_uV=10))
        accs = [evaluate([p], 100, CFG, seed).subjects[0].accuracy_percent for seed in range(10)]
        means.append(np.mean(accs))
    assert means[0] >= means[1] >= means[2]
    assert means[2] < means[0]


def test_custom_protocol():
    proto = TrialProtocol(total_s=2.0, onset_s=1.0, duration_s=0.3)
    assert run_trial(QUIET, Direction.LEFT, CFG, 1, proto).correct
    with pytest.raises(ValidationError):
        TrialProtocol(total_s=1.0, onset_s=0.8, duration_s=0.5)


# --- rendering ----------------------------------------------------------------

TABLE = EvalReport((SubjectResult(1, 98.0, 1.0, 1000, 980), SubjectResult(3, 99.5, 1.0, 1000, 995)))


def test_plain_row_layout():
    text = render_report(TABLE, "plain")
    lines = text.splitlines()
    assert lines[0] == "Subjects, Accuracy, Variance"
    assert lines[1] == "01, 98.00%, ±1.0%"
    assert "Overall average accuracy: 98.75%" in text
    assert "Best subject: 03 at 99.50%" in text


def test_markdown_layout():
    text = render_report(TABLE, "md")
    assert text.splitlines()[0] == "| Subjects | Accuracy | Variance |"
    assert "| 01 | 98.00% | ±1.0% |" in text


def test_empty_report_is_header_only():
    for fmt in ("plain", "csv", "md"):
        text = render_report(EvalReport(), fmt)
        assert "Subjects" in text.splitlines()[0]
    assert render_report(EvalReport(), "plain") == "Subjects, Accuracy, Variance\n"
    assert load_report_csv(render_report(EvalReport(), "csv")) == EvalReport()


def test_csv_round_trip_at_two_decimals():
    report = EvalReport((SubjectResult(1, 98.123, 1.0456, 1000), SubjectResult(2, 98.7, 1.2, 997)))
    back = load_report_csv(render_report(report, "csv"))
    for a, b in zip(report.subjects, back.subjects):
        assert b.subject_id == a.subject_id and b.n_trials == a.n_trials
        assert b.accuracy_percent == round(a.accuracy_percent, 2)
        assert b.variance_percent == round(a.variance_percent, 2)
    assert render_report(back, "csv") == render_report(report, "csv")


def test_unknown_format():
    with pytest.raises(ValidationError, match="unknown report format"):
        render_report(TABLE, "xml")
