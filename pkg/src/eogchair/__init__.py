"""Simulator of an EOG-driven wheelchair control chain."""

__version__ = "0.1.0"

from .decision import (
    AdcConfig, Command, DetectedPulse, DetectorConfig, PipelineConfig, classify,
    detect_pulses, quantize,
)
from .errors import InfeasibleDesign, ValidationError
from .frontend import AmplifiedTrace, FrontEndConfig, common_mode_rejection_check, diff_amplify
from .harness import EvalReport, TrialProtocol, TrialResult, evaluate, render_report, run_trial
from .motor import Drive, MotorCommand, MotorState, run_sequence, step
from .sallen_key import (
    BiquadCoeffs, Components, SallenKeyParams, apply_filter, component_values,
    design_sallen_key, discretize, frequency_response,
)
from .signal_model import (
    Direction, GazeEvent, NoiseConfig, SampleTrace, SubjectProfile, add_noise,
    load_trace_csv, save_trace_csv, synth_trace,
)
