"""Synthetic EOG traces: scripted gaze pulses, noise injection and CSV I/O.

All electrode potentials are kept in microvolts.  Sample ``i`` sits at
``t = i / sample_rate_hz``.  A trace of ``n`` samples therefore spans
``(n - 1) / sample_rate_hz`` seconds with both endpoints included; the
synthesizer emits ``round(total_s * fs_hz)`` samples covering ``[0, total_s)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError

# physiological EOG amplitude and frequency range
EOG_MIN_UV = 50.0
EOG_MAX_UV = 3500.0
EOG_BAND_HZ = (1.0, 50.0)

# EEG and ECG ranges, documentation only
EEG_RANGE_UV = (10.0, 100.0)
EEG_BAND_HZ = (0.1, 50.0)
ECG_RANGE_UV = (1000.0, 100000.0)
ECG_BAND_HZ = (0.05, 100.0)

DEFAULT_FS_HZ = 250.0
MIN_FS_HZ = 2 * EOG_BAND_HZ[1]
DEFAULT_RAMP_S = 0.05

CSV_HEADER = ("time_s", "v_p_uV", "v_ref_uV")


class Direction(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        key = text.strip().lower()
        for d in cls:
            if d.value.lower() == key:
                return d
        raise ValidationError(f"unknown direction {text!r}, expected Left or Right")

    def opposite(self) -> "Direction":
        return Direction.LEFT if self is Direction.RIGHT else Direction.RIGHT


# Right gaze deflects v_p positive, Left negative.
DEFAULT_POLARITY: Mapping[Direction, float] = {Direction.RIGHT: 1.0, Direction.LEFT: -1.0}


@dataclass(frozen=True)
class SampleTrace:
    sample_rate_hz: float
    v_p_uV: np.ndarray
    v_ref_uV: np.ndarray

    def __post_init__(self):
        v_p = np.asarray(self.v_p_uV, dtype=float)
        v_ref = np.asarray(self.v_ref_uV, dtype=float)
        if v_p.ndim != 1 or v_ref.ndim != 1:
            raise ValidationError("trace channels must be one-dimensional")
        if len(v_p) != len(v_ref):
            raise ValidationError(
                f"channel length mismatch: v_p has {len(v_p)} samples, v_ref has {len(v_ref)}"
            )
        if len(v_p) < 1:
            raise ValidationError("trace must contain at least one sample")
        if not self.sample_rate_hz >= MIN_FS_HZ:
            raise ValidationError(
                f"sample_rate_hz={self.sample_rate_hz} is below {MIN_FS_HZ} Hz, "
                "twice the 50 Hz EOG band edge"
            )
        object.__setattr__(self, "v_p_uV", v_p)
        object.__setattr__(self, "v_ref_uV", v_ref)

    @property
    def length(self) -> int:
        return len(self.v_p_uV)

    @property
    def time_s(self) -> np.ndarray:
        return np.arange(self.length) / self.sample_rate_hz

    def __eq__(self, other):
        if not isinstance(other, SampleTrace):
            return NotImplemented
        return (
            self.sample_rate_hz == other.sample_rate_hz
            and np.array_equal(self.v_p_uV, other.v_p_uV)
            and np.array_equal(self.v_ref_uV, other.v_ref_uV)
        )

    __hash__ = None


@dataclass(frozen=True)
class GazeEvent:
    direction: Direction
    onset_s: float
    duration_s: float
    amplitude_uV: float

    def __post_init__(self):
        if not isinstance(self.direction, Direction):
            object.__setattr__(self, "direction", Direction.parse(str(self.direction)))
        if not self.onset_s >= 0:
            raise ValidationError(f"onset_s must be >= 0, got {self.onset_s}")
        if not self.duration_s > 0:
            raise ValidationError(f"duration_s must be > 0, got {self.duration_s}")
        if not EOG_MIN_UV <= self.amplitude_uV <= EOG_MAX_UV:
            raise ValidationError(
                f"amplitude_uV={self.amplitude_uV} outside the EOG range "
                f"[{EOG_MIN_UV:g}, {EOG_MAX_UV:g}] uV"
            )

    @property
    def end_s(self) -> float:
        return self.onset_s + self.duration_s


@dataclass(frozen=True)
class NoiseConfig:
    white_sigma_uV: float = 0.0
    hum_amp_uV: float = 0.0
    hum_freq_hz: float = 50.0
    drift_amp_uV: float = 0.0
    drift_freq_hz: float = 0.2
    seed: int = 0
    # added to both electrodes at hum_freq_hz
    common_mode_uV: float = 0.0

    def __post_init__(self):
        for name in ("white_sigma_uV", "hum_amp_uV", "drift_amp_uV", "common_mode_uV"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("hum_freq_hz", "drift_freq_hz"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0, got {getattr(self, name)}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def is_silent(self) -> bool:
        return (
            self.white_sigma_uV == 0
            and self.hum_amp_uV == 0
            and self.drift_amp_uV == 0
            and self.common_mode_uV == 0
        )


@dataclass(frozen=True)
class SubjectProfile:
    id: int
    saccade_amp_mean_uV: float
    saccade_amp_jitter_frac: float = 0.0
    noise: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        if not EOG_MIN_UV <= self.saccade_amp_mean_uV <= EOG_MAX_UV:
            raise ValidationError(
                f"subject {self.id}: saccade_amp_mean_uV={self.saccade_amp_mean_uV} "
                f"outside [{EOG_MIN_UV:g}, {EOG_MAX_UV:g}] uV"
            )
        if not 0 <= self.saccade_amp_jitter_frac < 1:
            raise ValidationError(
                f"subject {self.id}: saccade_amp_jitter_frac must be in [0, 1), "
                f"got {self.saccade_amp_jitter_frac}"
            )

    @property
    def label(self) -> str:
        return f"{self.id:02d}"

    def draw_amplitude(self, rng: np.random.Generator) -> float:
        """Mean amplitude scaled by a uniform jitter, clamped to the EOG range."""
        u = rng.uniform(-1.0, 1.0)
        amp = self.saccade_amp_mean_uV * (1.0 + self.saccade_amp_jitter_frac * u)
        return float(min(max(amp, EOG_MIN_UV), EOG_MAX_UV))


def raised_cosine_pulse(t: np.ndarray, onset_s: float, duration_s: float,
                        ramp_s: float = DEFAULT_RAMP_S) -> np.ndarray:
    """Unit-height plateau pulse with half-cosine rise and fall.

    The ramp is shortened to a quarter of the duration for short pulses so the
    plateau always covers at least half the pulse.
    """
    ramp = min(ramp_s, duration_s / 4.0)
    x = t - onset_s
    out = np.zeros_like(t, dtype=float)
    inside = (x >= 0) & (x <= duration_s)
    rise = inside & (x < ramp)
    fall = inside & (x > duration_s - ramp)
    flat = inside & ~rise & ~fall
    out[flat] = 1.0
    out[rise] = 0.5 * (1.0 - np.cos(np.pi * x[rise] / ramp))
    out[fall] = 0.5 * (1.0 - np.cos(np.pi * (duration_s - x[fall]) / ramp))
    return out


def _check_script(script: Sequence[GazeEvent], total_s: float) -> None:
    for i, ev in enumerate(script):
        if ev.end_s > total_s:
            raise ValidationError(
                f"event {i} ends at {ev.end_s:g} s, past the trace end {total_s:g} s"
            )
        if i and ev.onset_s < script[i - 1].end_s:
            raise ValidationError(
                f"events {i - 1} and {i} overlap or are out of order "
                f"({script[i - 1].end_s:g} s > {ev.onset_s:g} s)"
            )


def synth_trace(script: Sequence[GazeEvent], total_s: float, fs_hz: float = DEFAULT_FS_HZ,
                polarity: Mapping[Direction, float] = DEFAULT_POLARITY,
                ramp_s: float = DEFAULT_RAMP_S) -> SampleTrace:
    """Render a gaze script as a noiseless trace; the reference electrode stays at 0."""
    if not total_s > 0:
        raise ValidationError(f"total_s must be > 0, got {total_s}")
    if not fs_hz >= MIN_FS_HZ:
        raise ValidationError(f"fs_hz must be >= {MIN_FS_HZ:g}, got {fs_hz}")
    script = list(script)
    _check_script(script, total_s)

    n = int(round(total_s * fs_hz))
    t = np.arange(n) / fs_hz
    v_p = np.zeros(n)
    for ev in script:
        sign = math.copysign(1.0, polarity[ev.direction])
        v_p += sign * ev.amplitude_uV * raised_cosine_pulse(t, ev.onset_s, ev.duration_s, ramp_s)
    return SampleTrace(fs_hz, v_p, np.zeros(n))


def add_noise(trace: SampleTrace, cfg: NoiseConfig) -> SampleTrace:
    if cfg.is_silent:
        return SampleTrace(trace.sample_rate_hz, trace.v_p_uV.copy(), trace.v_ref_uV.copy())
    t = trace.time_s
    rng = np.random.default_rng(int(cfg.seed))
    white = rng.normal(0.0, cfg.white_sigma_uV, trace.length) if cfg.white_sigma_uV else 0.0
    hum = cfg.hum_amp_uV * np.sin(2 * np.pi * cfg.hum_freq_hz * t)
    drift = cfg.drift_amp_uV * np.sin(2 * np.pi * cfg.drift_freq_hz * t)
    common = cfg.common_mode_uV * np.sin(2 * np.pi * cfg.hum_freq_hz * t)
    v_p = trace.v_p_uV + white + hum + drift + common
    v_ref = trace.v_ref_uV + common
    return SampleTrace(trace.sample_rate_hz, v_p, v_ref)


def common_mode_trace(total_s: float, fs_hz: float, amp_uV: float,
                      freq_hz: float = 50.0, baseline_uV: float = 0.0) -> SampleTrace:
    """Identical sinusoidal interference on both electrodes."""
    n = int(round(total_s * fs_hz))
    t = np.arange(n) / fs_hz
    v = baseline_uV + amp_uV * np.sin(2 * np.pi * freq_hz * t)
    return SampleTrace(fs_hz, v, v.copy())


def band_energy_fraction(x: np.ndarray, fs_hz: float, band_hz=EOG_BAND_HZ,
                         frame_s: float = 1.0) -> float:
    """Share of non-DC spectral energy of ``x`` inside ``band_hz``.

    The signal is cut into consecutive ``frame_s`` frames (the last one
    zero-padded), each frame has its mean removed, and periodogram energies are
    summed per bin.  With the default 1 s frames the bins fall on whole hertz,
    so the first non-DC bin is the 1 Hz band edge.
    """
    x = np.asarray(x, dtype=float)
    m = max(int(round(frame_s * fs_hz)), 1)
    n_frames = -(-len(x) // m)
    frames = np.zeros((n_frames, m))
    frames.flat[: len(x)] = x
    # the padded tail frame is detrended over its real samples only
    counts = np.full(n_frames, m)
    counts[-1] = len(x) - (n_frames - 1) * m
    means = frames.sum(axis=1) / counts
    for i, (c, mu) in enumerate(zip(counts, means)):
        frames[i, :c] -= mu
    power = (np.abs(np.fft.rfft(frames, axis=1)) ** 2).sum(axis=0)
    freqs = np.fft.rfftfreq(m, d=1.0 / fs_hz)
    # one-sided spectrum: interior bins stand for two
    weight = np.full(len(freqs), 2.0)
    weight[0] = 1.0
    if m % 2 == 0:
        weight[-1] = 1.0
    energy = power * weight
    non_dc = energy[1:].sum()
    if non_dc == 0:
        return 1.0
    lo, hi = band_hz
    in_band = energy[(freqs >= lo) & (freqs <= hi)].sum()
    return float(in_band / non_dc)


# --- file formats -----------------------------------------------------------

def save_trace_csv(trace: SampleTrace, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for t, vp, vr in zip(trace.time_s, trace.v_p_uV, trace.v_ref_uV):
            w.writerow([repr(float(t)), repr(float(vp)), repr(float(vr))])


def load_trace_csv(path) -> SampleTrace:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    missing = [c for c in CSV_HEADER if c not in header]
    if missing:
        raise ValidationError(f"{path}: line 1: missing column(s) {', '.join(missing)}")
    idx = [header.index(c) for c in CSV_HEADER]

    times, v_p, v_ref = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ValidationError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            t, vp, vr = (float(row[i]) for i in idx)
        except ValueError as exc:
            raise ValidationError(f"{path}: line {lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in (t, vp, vr)):
            raise ValidationError(f"{path}: line {lineno}: non-finite value")
        times.append(t)
        v_p.append(vp)
        v_ref.append(vr)

    if not times:
        raise ValidationError(f"{path}: no data rows")
    if len(times) == 1:
        # a single sample carries no rate information
        return SampleTrace(DEFAULT_FS_HZ, v_p, v_ref)
    ts = np.asarray(times)
    if ts[0] != 0.0:
        raise ValidationError(f"{path}: line 2: first timestamp must be 0, got {ts[0]}")
    fs = (len(ts) - 1) / (ts[-1] - ts[0]) if ts[-1] != ts[0] else float("inf")
    steps = np.diff(ts) * fs
    bad = np.flatnonzero(np.abs(steps - 1.0) > 1e-6)
    if bad.size:
        raise ValidationError(
            f"{path}: line {bad[0] + 3}: non-uniform timestamp spacing"
        )
    # snap to the nearest micro-hertz so written traces reload at the same rate
    fs = round(fs, 6)
    return SampleTrace(fs, v_p, v_ref)


def parse_script(lines) -> list[GazeEvent]:
    """Parse ``direction,onset_s,duration_s,amplitude_uV`` lines; ``#`` starts a comment."""
    events = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[0].lower() == "direction":
            continue
        if len(parts) != 4:
            raise ValidationError(f"script line {lineno}: expected 4 fields, got {len(parts)}")
        try:
            events.append(GazeEvent(Direction.parse(parts[0]), float(parts[1]),
                                    float(parts[2]), float(parts[3])))
        except ValueError as exc:
            raise ValidationError(f"script line {lineno}: {exc}") from None
    return events


def load_script(path) -> list[GazeEvent]:
    return parse_script(Path(path).read_text().splitlines())
