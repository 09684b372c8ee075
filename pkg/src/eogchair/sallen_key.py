"""Second-order Sallen-Key low-pass stage and its digital biquad realization.

The continuous prototype is

    H(s) = k * w0**2 / (s**2 + (w0 / q) * s + w0**2),    w0 = 2*pi*f_c

It is discretized with the bilinear transform prewarped at f_c, so the
digital response at f_c equals the analog response at w0 (k*q; k/sqrt(2) for a
Butterworth design).
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleDesign, ValidationError
from .frontend import AmplifiedTrace

BUTTERWORTH_Q = 1 / math.sqrt(2)
DEFAULT_FC_HZ = 50.0  # EOG band upper edge
COMPONENT_RTOL = 1e-4

COEFF_HEADER = ("b0", "b1", "b2", "a1", "a2", "fs_hz")


@dataclass(frozen=True)
class SallenKeyParams:
    f_c_hz: float = DEFAULT_FC_HZ
    q: float = BUTTERWORTH_Q
    k: float = 1.0

    def __post_init__(self):
        if not (self.f_c_hz > 0 and math.isfinite(self.f_c_hz)):
            raise ValidationError(f"f_c_hz must be positive, got {self.f_c_hz}")
        if not (self.q > 0 and math.isfinite(self.q)):
            raise ValidationError(f"q must be positive, got {self.q}")
        if not (self.k >= 1 and math.isfinite(self.k)):
            raise ValidationError(f"k must be >= 1 for the non-inverting stage, got {self.k}")

    @property
    def w0(self) -> float:
        return 2 * math.pi * self.f_c_hz

    def analog_response(self, w: float) -> complex:
        """H(j*w) of the continuous prototype."""
        s = 1j * w
        return self.k * self.w0**2 / (s * s + (self.w0 / self.q) * s + self.w0**2)


@dataclass(frozen=True)
class BiquadCoeffs:
    b0: float
    b1: float
    b2: float
    a1: float
    a2: float
    fs_hz: float

    def __post_init__(self):
        if not self.fs_hz > 0:
            raise ValidationError(f"fs_hz must be > 0, got {self.fs_hz}")
        if not all(abs(p) < 1 for p in self.poles()):
            raise ValidationError(f"unstable biquad: poles {self.poles()}")

    def poles(self) -> tuple[complex, complex]:
        disc = cmath.sqrt(self.a1 * self.a1 - 4 * self.a2)
        return (-self.a1 + disc) / 2, (-self.a1 - disc) / 2

    @property
    def dc_gain(self) -> float:
        return (self.b0 + self.b1 + self.b2) / (1 + self.a1 + self.a2)

    def as_row(self) -> list[float]:
        return [self.b0, self.b1, self.b2, self.a1, self.a2, self.fs_hz]


@dataclass(frozen=True)
class Components:
    R1_ohms: float
    R2_ohms: float
    C1_farads: float  # feedback capacitor, to the op-amp output
    C2_farads: float  # shunt capacitor, to ground
    K: float


def design_sallen_key(f_c_hz: float, q: float, k: float) -> SallenKeyParams:
    return SallenKeyParams(f_c_hz, q, k)


def rederive(c: Components) -> tuple[float, float, float]:
    """(f_c, q, k) of a unity-feedback Sallen-Key low-pass built from ``c``.

    H(s) = K / (1 + s*(C2*(R1 + R2) + (1 - K)*R1*C1) + s**2 * R1*R2*C1*C2)
    """
    rc = c.R1_ohms * c.R2_ohms * c.C1_farads * c.C2_farads
    f_c = 1 / (2 * math.pi * math.sqrt(rc))
    damping = c.C2_farads * (c.R1_ohms + c.R2_ohms) + (1 - c.K) * c.R1_ohms * c.C1_farads
    if damping <= 0:
        raise InfeasibleDesign("component set has no positive damping term")
    return f_c, math.sqrt(rc) / damping, c.K


def component_values(params: SallenKeyParams, c_farads: float) -> Components:
    """Equal-resistor realization with C2 = ``c_farads`` and C1 = m * C2.

    With R1 = R2 the quality factor is q = sqrt(m) / (2 - (k - 1) * m);
    solving the quadratic in x = sqrt(m) gives the positive root used here.
    """
    if not c_farads > 0:
        raise ValidationError(f"capacitance must be positive, got {c_farads}")
    q, k = params.q, params.k
    # rationalized root: no cancellation as k -> 1, and equals 2q at k = 1
    x = 4 * q / (math.sqrt(1 + 8 * q * q * (k - 1)) + 1)
    m = x * x
    c2 = c_farads
    c1 = m * c2
    r = 1 / (params.w0 * c2 * x)
    comps = Components(r, r, c1, c2, k)
    if not all(math.isfinite(v) and v > 0 for v in (r, c1, c2)):
        raise InfeasibleDesign(f"no positive component set for q={q}, k={k}")

    f_c, q_back, k_back = rederive(comps)
    for name, want, got in (("f_c", params.f_c_hz, f_c), ("q", q, q_back), ("k", k, k_back)):
        if abs(got - want) > COMPONENT_RTOL * abs(want):
            raise InfeasibleDesign(
                f"component self-check failed: {name} re-derives to {got}, wanted {want}"
            )
    return comps


def discretize(params: SallenKeyParams, fs_hz: float) -> BiquadCoeffs:
    if not fs_hz > 2 * params.f_c_hz:
        raise ValidationError(
            f"cutoff {params.f_c_hz} Hz is at or above Nyquist for fs={fs_hz} Hz"
        )
    w0 = params.w0
    # s -> c * (z - 1) / (z + 1), with c chosen so that z = exp(j*w0/fs) maps to s = j*w0
    c = w0 / math.tan(w0 / (2 * fs_hz))
    c2 = c * c
    w2 = w0 * w0
    a0 = c2 + c * w0 / params.q + w2
    b = params.k * w2 / a0
    return BiquadCoeffs(
        b0=b,
        b1=2 * b,
        b2=b,
        a1=2 * (w2 - c2) / a0,
        a2=(c2 - c * w0 / params.q + w2) / a0,
        fs_hz=fs_hz,
    )


def apply_filter(trace: AmplifiedTrace, coeffs: BiquadCoeffs) -> AmplifiedTrace:
    """Run the transposed direct-form II recurrence from rest."""
    if trace.sample_rate_hz != coeffs.fs_hz:
        raise ValidationError(
            f"sample-rate mismatch: trace at {trace.sample_rate_hz} Hz, "
            f"filter designed for {coeffs.fs_hz} Hz"
        )
    b0, b1, b2, a1, a2 = coeffs.b0, coeffs.b1, coeffs.b2, coeffs.a1, coeffs.a2
    x = trace.v_out_V.tolist()
    y = [0.0] * len(x)
    s1 = s2 = 0.0
    for i, xi in enumerate(x):
        yi = b0 * xi + s1
        s1 = b1 * xi - a1 * yi + s2
        s2 = b2 * xi - a2 * yi
        y[i] = yi
    return trace.with_samples(np.array(y))


def frequency_response(coeffs: BiquadCoeffs, f_hz: float) -> tuple[float, float]:
    """(magnitude, phase in radians) of the digital filter at ``f_hz``."""
    if not 0 <= f_hz <= coeffs.fs_hz / 2:
        raise ValidationError(f"f_hz={f_hz} outside [0, {coeffs.fs_hz / 2}]")
    zi = cmath.exp(-2j * math.pi * f_hz / coeffs.fs_hz)
    h = (coeffs.b0 + coeffs.b1 * zi + coeffs.b2 * zi * zi) / (1 + coeffs.a1 * zi + coeffs.a2 * zi * zi)
    return abs(h), cmath.phase(h)


def response_table(coeffs: BiquadCoeffs, points: int = 1024) -> np.ndarray:
    """Rows of (f_hz, magnitude, phase) on a uniform grid from DC to Nyquist."""
    freqs = np.linspace(0.0, coeffs.fs_hz / 2, points)
    rows = [(f, *frequency_response(coeffs, float(f))) for f in freqs]
    return np.array(rows)


def save_coeffs_csv(coeffs: BiquadCoeffs, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(COEFF_HEADER)
        w.writerow([repr(float(v)) for v in coeffs.as_row()])


def load_coeffs_csv(path) -> BiquadCoeffs:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if len(rows) != 1:
        raise ValidationError(f"{path}: expected exactly one coefficient row")
    try:
        return BiquadCoeffs(**{k: float(rows[0][k]) for k in COEFF_HEADER})
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: line 2: {exc}") from None
