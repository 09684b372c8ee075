"""Instrumentation amplifier model: v_out = A * (v_p - v_ref), clamped to the rails."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .signal_model import SampleTrace

UV_TO_V = 1e-6

DEFAULT_GAIN = 1000.0
DEFAULT_RAIL_V = 5.0


@dataclass(frozen=True)
class FrontEndConfig:
    gain_A: float = DEFAULT_GAIN
    rail_pos_V: float = DEFAULT_RAIL_V
    rail_neg_V: float = -DEFAULT_RAIL_V
    input_offset_uV: float = 0.0

    def __post_init__(self):
        if not self.gain_A > 0:
            raise ValidationError(f"gain_A must be > 0, got {self.gain_A}")
        if not self.rail_neg_V < 0 < self.rail_pos_V:
            raise ValidationError(
                f"rails must satisfy rail_neg_V < 0 < rail_pos_V, "
                f"got ({self.rail_neg_V}, {self.rail_pos_V})"
            )
        if not np.isfinite(self.input_offset_uV):
            raise ValidationError("input_offset_uV must be finite")


@dataclass(frozen=True)
class AmplifiedTrace:
    sample_rate_hz: float
    v_out_V: np.ndarray
    clipped: np.ndarray = None

    def __post_init__(self):
        v = np.asarray(self.v_out_V, dtype=float)
        clipped = np.zeros(len(v), dtype=bool) if self.clipped is None else np.asarray(self.clipped, dtype=bool)
        if v.ndim != 1 or clipped.shape != v.shape:
            raise ValidationError("v_out_V and clipped must be parallel 1-D sequences")
        if not self.sample_rate_hz > 0:
            raise ValidationError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        object.__setattr__(self, "v_out_V", v)
        object.__setattr__(self, "clipped", clipped)

    def __len__(self):
        return len(self.v_out_V)

    @property
    def time_s(self) -> np.ndarray:
        return np.arange(len(self.v_out_V)) / self.sample_rate_hz

    def with_samples(self, v_out_V) -> "AmplifiedTrace":
        return AmplifiedTrace(self.sample_rate_hz, v_out_V, self.clipped)


def ideal_output(trace: SampleTrace, cfg: FrontEndConfig) -> np.ndarray:
    """Unclamped amplifier output in volts."""
    return cfg.gain_A * ((trace.v_p_uV - trace.v_ref_uV + cfg.input_offset_uV) * UV_TO_V)


def diff_amplify(trace: SampleTrace, cfg: FrontEndConfig) -> AmplifiedTrace:
    for name, arr in (("v_p_uV", trace.v_p_uV), ("v_ref_uV", trace.v_ref_uV)):
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise ValidationError(f"non-finite {name} sample at index {bad[0]}")
    ideal = ideal_output(trace, cfg)
    clipped = (ideal > cfg.rail_pos_V) | (ideal < cfg.rail_neg_V)
    v_out = np.clip(ideal, cfg.rail_neg_V, cfg.rail_pos_V)
    return AmplifiedTrace(trace.sample_rate_hz, v_out, clipped)


def common_mode_rejection_check(common_signal: SampleTrace, cfg: FrontEndConfig) -> float:
    """Largest output magnitude produced by a purely common-mode input."""
    if not np.array_equal(common_signal.v_p_uV, common_signal.v_ref_uV):
        i = int(np.flatnonzero(common_signal.v_p_uV != common_signal.v_ref_uV)[0])
        raise ValidationError(f"input is not pure common mode: channels differ at index {i}")
    return float(np.max(np.abs(diff_amplify(common_signal, cfg).v_out_V)))
