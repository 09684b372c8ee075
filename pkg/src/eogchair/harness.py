"""Monte-Carlo accuracy evaluation over subject profiles, reported per subject.

Each trial synthesizes one gaze event, corrupts it with the subject's noise and
runs the full classification chain.  A trial is correct when exactly one
command comes out and its direction matches the scripted one.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .decision import PipelineConfig, classify
from .errors import ValidationError
from .signal_model import Direction, GazeEvent, SubjectProfile, add_noise, synth_trace

N_BLOCKS = 10
REPORT_FORMATS = ("plain", "csv", "md")
REPORT_COLUMNS = ("Subjects", "Accuracy", "Variance")

# published per-subject results, for comparison in reports and acceptance
REFERENCE_ACCURACY = {1: 98.00, 2: 98.70, 3: 99.50, 4: 99.00, 5: 98.30}
REFERENCE_VARIANCE = {1: 1.0, 2: 1.2, 3: 1.0, 4: 0.5, 5: 1.5}
REFERENCE_OVERALL = 98.90


@dataclass(frozen=True)
class TrialProtocol:
    """Timing of the single gaze event rendered for each trial."""

    total_s: float = 1.2
    onset_s: float = 0.3
    duration_s: float = 0.5

    def __post_init__(self):
        if not (self.onset_s >= 0 and self.duration_s > 0):
            raise ValidationError("trial onset must be >= 0 and duration > 0")
        if self.onset_s + self.duration_s > self.total_s:
            raise ValidationError("trial event does not fit inside the trial window")


@dataclass(frozen=True)
class TrialResult:
    subject_id: int
    scripted_direction: Direction
    classified_direction: Direction | None
    correct: bool
    seed: int
    n_commands: int = 0


@dataclass(frozen=True)
class SubjectResult:
    subject_id: int
    accuracy_percent: float
    variance_percent: float
    n_trials: int
    n_correct: int | None = None

    @property
    def label(self) -> str:
        return f"{self.subject_id:02d}"


@dataclass(frozen=True)
class EvalReport:
    subjects: tuple[SubjectResult, ...] = field(default_factory=tuple)

    @property
    def total_trials(self) -> int:
        return sum(s.n_trials for s in self.subjects)

    @property
    def overall_accuracy_percent(self) -> float:
        n = self.total_trials
        if n == 0:
            return float("nan")
        if all(s.n_correct is not None for s in self.subjects):
            return 100.0 * sum(s.n_correct for s in self.subjects) / n
        return sum(s.accuracy_percent * s.n_trials for s in self.subjects) / n

    def subject(self, subject_id: int) -> SubjectResult:
        for s in self.subjects:
            if s.subject_id == subject_id:
                return s
        raise KeyError(subject_id)


def trial_seed(master_seed: int, subject_id: int, index: int) -> int:
    """64-bit seed for one trial; depends only on its coordinates, not run order."""
    ss = np.random.SeedSequence([int(master_seed), int(subject_id), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def trial_direction(index: int) -> Direction:
    # alternating, so any n gives ceil(n/2) Right and floor(n/2) Left
    return Direction.RIGHT if index % 2 == 0 else Direction.LEFT


def run_trial(profile: SubjectProfile, direction: Direction, pipeline_cfg: PipelineConfig,
              seed: int, protocol: TrialProtocol = TrialProtocol()) -> TrialResult:
    amp_rng = np.random.default_rng([seed, 1])
    amplitude = profile.draw_amplitude(amp_rng)
    event = GazeEvent(direction, protocol.onset_s, protocol.duration_s, amplitude)
    clean = synth_trace([event], protocol.total_s, pipeline_cfg.sample_rate_hz)
    noisy = add_noise(clean, replace(profile.noise, seed=seed))
    commands = classify(noisy, pipeline_cfg)
    got = commands[0].direction if len(commands) == 1 else None
    return TrialResult(profile.id, direction, got, got is direction, seed, len(commands))


def _block_std(outcomes: Sequence[bool], n_blocks: int = N_BLOCKS) -> float:
    """Sample standard deviation (percent) of accuracy over contiguous blocks."""
    blocks = np.array_split(np.asarray(outcomes, dtype=float), min(n_blocks, len(outcomes)))
    if len(blocks) < 2:
        return 0.0
    acc = [100.0 * b.mean() for b in blocks]
    return float(np.std(acc, ddof=1))


def _run_subject(args) -> SubjectResult:
    profile, n_trials, cfg, master_seed, protocol = args
    outcomes = [
        run_trial(profile, trial_direction(i), cfg, trial_seed(master_seed, profile.id, i),
                  protocol).correct
        for i in range(n_trials)
    ]
    n_correct = sum(outcomes)
    return SubjectResult(profile.id, 100.0 * n_correct / n_trials, _block_std(outcomes),
                         n_trials, n_correct)


def evaluate(profiles: Sequence[SubjectProfile], n_trials: int, pipeline_cfg: PipelineConfig,
             master_seed: int = 0, protocol: TrialProtocol = TrialProtocol(),
             workers: int = 1) -> EvalReport:
    """Per-subject accuracy over ``n_trials`` balanced Left/Right trials.

    ``workers > 1`` evaluates subjects in separate processes; the report is
    identical to the sequential one because every trial seed is derived from
    ``(master_seed, subject_id, trial_index)`` alone.
    """
    if n_trials < 1:
        raise ValidationError(f"n_trials must be >= 1, got {n_trials}")
    jobs = [(p, n_trials, pipeline_cfg, master_seed, protocol) for p in profiles]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_subject, jobs))
    else:
        results = [_run_subject(j) for j in jobs]
    return EvalReport(tuple(results))


# --- reporting --------------------------------------------------------------

def _fmt_acc(v: float) -> str:
    return f"{v:.2f}%"


def _fmt_var(v: float) -> str:
    return f"±{v:.1f}%"


def render_report(report: EvalReport, fmt: str = "plain") -> str:
    if fmt not in REPORT_FORMATS:
        raise ValidationError(f"unknown report format {fmt!r}; choose from {', '.join(REPORT_FORMATS)}")
    rows = [(s.label, s.accuracy_percent, s.variance_percent, s.n_trials) for s in report.subjects]
    overall = report.overall_accuracy_percent

    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS + ("Trials",))
        for label, acc, var, n in rows:
            w.writerow([label, f"{acc:.2f}", f"{var:.2f}", n])
        if rows:
            w.writerow(["Overall", f"{overall:.2f}", "", report.total_trials])
        return buf.getvalue()

    if fmt == "md":
        lines = ["| Subjects | Accuracy | Variance |", "|---|---|---|"]
        lines += [f"| {label} | {_fmt_acc(acc)} | {_fmt_var(var)} |" for label, acc, var, _ in rows]
        if rows:
            lines += ["", f"Overall average accuracy: {_fmt_acc(overall)}"]
        return "\n".join(lines) + "\n"

    lines = [", ".join(REPORT_COLUMNS)]
    lines += [f"{label}, {_fmt_acc(acc)}, {_fmt_var(var)}" for label, acc, var, _ in rows]
    if rows:
        best = max(report.subjects, key=lambda s: s.accuracy_percent)
        lines.append(f"Overall average accuracy: {_fmt_acc(overall)}")
        lines.append(f"Best subject: {best.label} at {_fmt_acc(best.accuracy_percent)}")
    return "\n".join(lines) + "\n"


def load_report_csv(text: str) -> EvalReport:
    """Inverse of ``render_report(..., "csv")``."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header[:3]) != REPORT_COLUMNS:
        raise ValidationError("report CSV: line 1: unexpected header")
    subjects = []
    for lineno, row in enumerate(reader, start=2):
        if not row or row[0] == "Overall":
            continue
        try:
            subjects.append(SubjectResult(int(row[0]), float(row[1]), float(row[2]), int(row[3])))
        except (IndexError, ValueError) as exc:
            raise ValidationError(f"report CSV: line {lineno}: {exc}") from None
    return EvalReport(tuple(subjects))


def reference_deviation(report: EvalReport) -> dict[int, float]:
    """Simulated minus reported accuracy, in percentage points, per subject."""
    return {s.subject_id: s.accuracy_percent - REFERENCE_ACCURACY[s.subject_id]
            for s in report.subjects if s.subject_id in REFERENCE_ACCURACY}

