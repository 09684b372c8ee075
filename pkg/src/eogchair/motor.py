"""Motor direction state machine with reversal dead time and an auto-stop timeout.

States are Stop, Left and Right.  A reversal (Left to Right or back) always
passes through Stop for one ``tick_s``; a driving state with no command for
``dwell_s`` falls back to Stop.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import ValidationError

DEFAULT_DWELL_S = 1.0
DEFAULT_TICK_S = 1 / 250  # one sample at the default rate


class Drive(str, Enum):
    STOP = "Stop"
    LEFT = "Left"
    RIGHT = "Right"

    @classmethod
    def parse(cls, text) -> "Drive":
        key = str(getattr(text, "value", text)).strip().lower()
        for d in cls:
            if d.value.lower() == key:
                return d
        raise ValidationError(f"unknown motor command {text!r}")


@dataclass(frozen=True)
class MotorState:
    value: Drive = Drive.STOP
    since_s: float = 0.0
    # time of the last accepted command; orders the input stream
    last_cmd_s: float = float("-inf")


@dataclass(frozen=True)
class MotorCommand:
    direction: Drive
    at_s: float

    def __post_init__(self):
        if not isinstance(self.direction, Drive):
            object.__setattr__(self, "direction", Drive.parse(self.direction))


def _opposed(a: Drive, b: Drive) -> bool:
    return {a, b} == {Drive.LEFT, Drive.RIGHT}


def timeout(state: MotorState, now_s: float, dwell_s: float) -> MotorState | None:
    """The auto-stop state if ``state`` has been driving for ``dwell_s`` by ``now_s``."""
    if state.value is not Drive.STOP and now_s >= state.since_s + dwell_s:
        return MotorState(Drive.STOP, state.since_s + dwell_s, state.last_cmd_s)
    return None


def expand(state: MotorState, cmd: MotorCommand, dwell_s: float = DEFAULT_DWELL_S,
           tick_s: float = DEFAULT_TICK_S) -> list[MotorState]:
    """Every state the machine passes through while handling ``cmd``, in order.

    An empty list means the state is unchanged.  A same-direction command
    yields one entry carrying the refreshed ``since_s``.
    """
    if dwell_s < 0:
        raise ValidationError(f"dwell_s must be >= 0, got {dwell_s}")
    if cmd.at_s < state.last_cmd_s:
        raise ValidationError(
            f"out-of-order command at {cmd.at_s} s, previous command at {state.last_cmd_s} s"
        )
    out = []
    stopped = timeout(state, cmd.at_s, dwell_s)
    if stopped is not None:
        out.append(stopped)
        state = stopped

    want = cmd.direction
    at = max(cmd.at_s, state.since_s)
    if want is Drive.STOP:
        if state.value is not Drive.STOP:
            out.append(MotorState(Drive.STOP, at, cmd.at_s))
    elif _opposed(state.value, want):
        out.append(MotorState(Drive.STOP, at, cmd.at_s))
        out.append(MotorState(want, at + tick_s, cmd.at_s))
    else:
        # Stop -> drive, or a same-direction refresh
        out.append(MotorState(want, at, cmd.at_s))
    return out


def step(state: MotorState, cmd: MotorCommand, dwell_s: float = DEFAULT_DWELL_S,
         tick_s: float = DEFAULT_TICK_S) -> MotorState:
    """State after handling ``cmd``; see :func:`expand` for the intermediate ones."""
    states = expand(state, cmd, dwell_s, tick_s)
    if states:
        return states[-1]
    return MotorState(state.value, state.since_s, cmd.at_s)


def run_sequence(commands: Iterable[MotorCommand], dwell_s: float = DEFAULT_DWELL_S,
                 tick_s: float = DEFAULT_TICK_S, until_s: float | None = None) -> list[MotorState]:
    """Transition log starting from Stop at t=0.

    Only changes of drive value are logged.  Timeouts are applied between
    commands and, when ``until_s`` is given, after the last command up to it.
    """
    state = MotorState(Drive.STOP, 0.0)
    log = [state]
    for cmd in commands:
        for nxt in expand(state, cmd, dwell_s, tick_s):
            if nxt.value is not state.value:
                log.append(nxt)
            state = nxt
        state = MotorState(state.value, state.since_s, cmd.at_s)
    if until_s is not None:
        stopped = timeout(state, until_s, dwell_s)
        if stopped is not None:
            log.append(stopped)
    return log


def save_log_csv(log, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("time_s", "state"))
        for s in log:
            w.writerow([repr(float(s.since_s)), s.value.value])
