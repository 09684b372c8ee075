"""Loading the declarative pipeline configuration (YAML)."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .decision import AdcConfig, DetectorConfig, PipelineConfig
from .errors import ValidationError
from .frontend import FrontEndConfig
from .harness import TrialProtocol
from .motor import DEFAULT_DWELL_S, DEFAULT_TICK_S
from .sallen_key import SallenKeyParams
from .signal_model import DEFAULT_FS_HZ, NoiseConfig, SubjectProfile

DEFAULT_CONFIG = "default.yaml"


@dataclass(frozen=True)
class MotorConfig:
    dwell_s: float = DEFAULT_DWELL_S
    tick_s: float = DEFAULT_TICK_S

    def __post_init__(self):
        if not self.dwell_s >= 0:
            raise ValidationError(f"motor dwell_s must be >= 0, got {self.dwell_s}")
        if not self.tick_s > 0:
            raise ValidationError(f"motor tick_s must be > 0, got {self.tick_s}")


@dataclass(frozen=True)
class AppConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    motor: MotorConfig = field(default_factory=MotorConfig)
    trial: TrialProtocol = field(default_factory=TrialProtocol)
    subjects: tuple[SubjectProfile, ...] = ()
    n_trials: int = 1000
    master_seed: int = 0


def _build(cls, section: Any, where: str, **extra):
    section = dict(section or {})
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(section) - names)
    if unknown:
        raise ValidationError(f"config [{where}]: unknown key(s) {', '.join(unknown)}")
    section.update(extra)
    try:
        return cls(**section)
    except TypeError as exc:
        raise ValidationError(f"config [{where}]: {exc}") from None
    except ValidationError as exc:
        raise ValidationError(f"config [{where}]: {exc}") from None


def parse_config(data: dict) -> AppConfig:
    if not isinstance(data, dict):
        raise ValidationError("config root must be a mapping")
    known = {"sample_rate_hz", "frontend", "filter", "adc", "detector", "motor", "trial",
             "evaluation", "subjects"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValidationError(f"config: unknown section(s) {', '.join(unknown)}")

    fs = float(data.get("sample_rate_hz", DEFAULT_FS_HZ))
    pipeline = PipelineConfig(
        frontend=_build(FrontEndConfig, data.get("frontend"), "frontend"),
        filter=_build(SallenKeyParams, data.get("filter"), "filter"),
        adc=_build(AdcConfig, data.get("adc"), "adc", fs_hz=fs),
        detector=_build(DetectorConfig, data.get("detector"), "detector"),
    )
    subjects = []
    for i, entry in enumerate(data.get("subjects") or []):
        entry = dict(entry)
        noise = _build(NoiseConfig, entry.pop("noise", None), f"subjects[{i}].noise")
        subjects.append(_build(SubjectProfile, entry, f"subjects[{i}]", noise=noise))
    ids = [s.id for s in subjects]
    if len(set(ids)) != len(ids):
        raise ValidationError("config [subjects]: duplicate subject ids")

    evaluation = dict(data.get("evaluation") or {})
    unknown = sorted(set(evaluation) - {"n_trials", "master_seed"})
    if unknown:
        raise ValidationError(f"config [evaluation]: unknown key(s) {', '.join(unknown)}")
    return AppConfig(
        pipeline=pipeline,
        motor=_build(MotorConfig, data.get("motor"), "motor"),
        trial=_build(TrialProtocol, data.get("trial"), "trial"),
        subjects=tuple(subjects),
        n_trials=int(evaluation.get("n_trials", 1000)),
        master_seed=int(evaluation.get("master_seed", 0)),
    )


def default_config_text() -> str:
    return resources.files("eogchair.config").joinpath(DEFAULT_CONFIG).read_text()


def load_config(path: str | Path | None = None) -> AppConfig:
    """Parse ``path``, or the shipped default configuration when ``path`` is None."""
    text = default_config_text() if path is None else Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"config is not valid YAML: {exc}") from None
    return parse_config(data or {})
