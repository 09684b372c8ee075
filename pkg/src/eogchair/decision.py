"""Controller stage: ADC quantization, hysteresis pulse detection, direction commands."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .frontend import AmplifiedTrace, FrontEndConfig, diff_amplify
from .sallen_key import SallenKeyParams, apply_filter, discretize
from .signal_model import Direction, SampleTrace

COMMAND_HEADER = ("time_s", "direction")


@dataclass(frozen=True)
class AdcConfig:
    bits: int = 8
    full_scale_V: float = 5.0
    fs_hz: float = 250.0

    def __post_init__(self):
        if not (isinstance(self.bits, (int, np.integer)) and 1 <= self.bits <= 24):
            raise ValidationError(f"ADC bits must be an integer in [1, 24], got {self.bits}")
        if not self.full_scale_V > 0:
            raise ValidationError(f"full_scale_V must be > 0, got {self.full_scale_V}")
        if not self.fs_hz > 0:
            raise ValidationError(f"ADC fs_hz must be > 0, got {self.fs_hz}")

    @property
    def step_V(self) -> float:
        return 2 * self.full_scale_V / 2**self.bits


@dataclass(frozen=True)
class DetectorConfig:
    threshold_V: float = 0.1
    release_V: float = 0.05
    min_pulse_s: float = 0.04
    refractory_s: float = 0.2

    def __post_init__(self):
        if not 0 < self.release_V < self.threshold_V:
            raise ValidationError(
                f"need 0 < release_V < threshold_V, got release={self.release_V}, "
                f"threshold={self.threshold_V}"
            )
        if not self.min_pulse_s > 0:
            raise ValidationError(f"min_pulse_s must be > 0, got {self.min_pulse_s}")
        if not self.refractory_s >= 0:
            raise ValidationError(f"refractory_s must be >= 0, got {self.refractory_s}")


@dataclass(frozen=True)
class DetectedPulse:
    direction: Direction
    onset_s: float
    duration_s: float
    peak_V: float


@dataclass(frozen=True)
class Command:
    direction: Direction
    time_s: float


def quantize(trace: AmplifiedTrace, adc: AdcConfig) -> AmplifiedTrace:
    """Mid-tread ADC: 0 V is code 0, codes span [-2**(bits-1), 2**(bits-1) - 1]."""
    if trace.sample_rate_hz != adc.fs_hz:
        raise ValidationError(
            f"sample-rate mismatch: trace at {trace.sample_rate_hz} Hz, ADC at {adc.fs_hz} Hz"
        )
    step = adc.step_V
    top = 2 ** (adc.bits - 1)
    codes = np.clip(np.round(trace.v_out_V / step), -top, top - 1)
    return trace.with_samples(codes * step)


def detect_pulses(q_trace: AmplifiedTrace, det: DetectorConfig) -> list[DetectedPulse]:
    fs = q_trace.sample_rate_hz
    x = q_trace.v_out_V.tolist()
    min_len = det.min_pulse_s * fs
    refractory = det.refractory_s * fs
    pulses = []

    start = None
    peak = 0.0
    quiet_until = -np.inf  # first sample index allowed to open a pulse

    def close(end):
        nonlocal quiet_until
        if end - start >= min_len - 1e-9:
            direction = Direction.RIGHT if peak > 0 else Direction.LEFT
            pulses.append(DetectedPulse(direction, start / fs, (end - start) / fs, peak))
            quiet_until = end + refractory

    for i, v in enumerate(x):
        a = abs(v)
        if start is None:
            if a > det.threshold_V and i >= quiet_until - 1e-9:
                start, peak = i, v
        elif a < det.release_V:
            close(i)
            start = None
        elif a > abs(peak):
            peak = v
    if start is not None:
        close(len(x))
    return pulses


@dataclass(frozen=True)
class PipelineConfig:
    """Every stage between the electrodes and the command stream."""

    frontend: FrontEndConfig = field(default_factory=FrontEndConfig)
    filter: SallenKeyParams = field(default_factory=SallenKeyParams)
    adc: AdcConfig = field(default_factory=AdcConfig)
    detector: DetectorConfig = field(default_factory=DetectorConfig)

    @property
    def sample_rate_hz(self) -> float:
        return self.adc.fs_hz


def process(trace: SampleTrace, cfg: PipelineConfig) -> AmplifiedTrace:
    """Amplify, filter and digitize; returns what the controller sees."""
    amplified = diff_amplify(trace, cfg.frontend)
    filtered = apply_filter(amplified, discretize(cfg.filter, trace.sample_rate_hz))
    return quantize(filtered, cfg.adc)


def classify(trace: SampleTrace, cfg: PipelineConfig) -> list[Command]:
    pulses = detect_pulses(process(trace, cfg), cfg.detector)
    return [Command(p.direction, p.onset_s) for p in pulses]


def save_commands_csv(commands, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(COMMAND_HEADER)
        for c in commands:
            w.writerow([repr(float(c.time_s)), c.direction.value])


def load_commands_csv(path) -> list[Command]:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != COMMAND_HEADER:
            raise ValidationError(f"{path}: line 1: expected header {','.join(COMMAND_HEADER)}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValidationError(f"{path}: line {lineno}: expected 2 fields")
            try:
                out.append(Command(Direction.parse(row[1]), float(row[0])))
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from None
    return out
