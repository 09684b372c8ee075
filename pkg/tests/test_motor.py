import random

import pytest

from eogchair.errors import ValidationError
from eogchair.motor import Drive, MotorCommand, MotorState, expand, run_sequence, step

S, LT, RT = Drive.STOP, Drive.LEFT, Drive.RIGHT
TICK = 0.004


def test_stop_to_right():
    assert step(MotorState(S, 0.0), MotorCommand(RT, 0.5)).value is RT


def test_reversal_inserts_stop():
    states = expand(MotorState(LT, 0.0), MotorCommand(RT, 0.5), dwell_s=2.0, tick_s=TICK)
    assert [s.value for s in states] == [S, RT]
    assert states[0].since_s == 0.5
    assert states[1].since_s == pytest.approx(0.5 + TICK)
    assert step(MotorState(LT, 0.0), MotorCommand(RT, 0.5), 2.0).value is RT


def test_timeout_stops_after_dwell():
    states = expand(MotorState(RT, 2.0), MotorCommand(S, 5.0), dwell_s=1.0)
    assert states[0] == MotorState(S, 3.0, float("-inf"))


def test_same_direction_refreshes_since():
    s = step(MotorState(RT, 0.0), MotorCommand(RT, 0.8), dwell_s=1.0)
    assert s.value is RT and s.since_s == 0.8
    # refreshed, so no timeout at 1.5
    assert step(s, MotorCommand(RT, 1.5), dwell_s=1.0).since_s == 1.5


def test_stop_command():
    assert step(MotorState(LT, 0.0), MotorCommand(S, 0.2)).value is S
    assert step(MotorState(S, 0.0), MotorCommand(S, 0.2)).value is S


def test_out_of_order_rejected():
    s = step(MotorState(S, 0.0), MotorCommand(RT, 1.0))
    with pytest.raises(ValidationError, match="out-of-order"):
        step(s, MotorCommand(LT, 0.5))


def test_empty_stream():
    assert run_sequence([]) == [MotorState(S, 0.0)]


def test_documented_reversal_log():
    log = run_sequence([MotorCommand(RT, 0.0), MotorCommand(LT, 0.5)], dwell_s=2.0, tick_s=TICK)
    assert [(s.value, s.since_s) for s in log] == [
        (S, 0.0), (RT, 0.0), (S, 0.5), (LT, pytest.approx(0.5 + TICK))]


def test_trailing_timeout_when_horizon_given():
    log = run_sequence([MotorCommand(RT, 0.0)], dwell_s=1.0, until_s=5.0)
    assert [(s.value, s.since_s) for s in log] == [(S, 0.0), (RT, 0.0), (S, 1.0)]


def test_commands_at_same_instant_as_reversal():
    log = run_sequence([MotorCommand(RT, 0.0), MotorCommand(LT, 0.5), MotorCommand(RT, 0.5)],
                       dwell_s=2.0, tick_s=TICK)
    values = [s.value for s in log]
    assert values == [S, RT, S, LT, S, RT]
    times = [s.since_s for s in log]
    assert times == sorted(times)


def random_stream(rng, n):
    t, out = 0.0, []
    for _ in range(n):
        t += rng.choice([0.0, rng.uniform(0, 0.3), rng.uniform(0.5, 3.0)])
        out.append(MotorCommand(rng.choice([LT, RT, RT, LT, S]), t))
    return out


def check_log(log, commands, dwell):
    for a, b in zip(log, log[1:]):
        assert {a.value, b.value} != {LT, RT}, (a, b)
        assert b.since_s >= a.since_s
    # inside every driving interval, no command-free stretch exceeds dwell_s
    cmd_times = [c.at_s for c in commands]
    for s, nxt in zip(log, log[1:] + [None]):
        if s.value is S:
            continue
        end = nxt.since_s if nxt else float("inf")
        points = [s.since_s] + [t for t in cmd_times if s.since_s < t < end] + [end]
        gaps = [b - a for a, b in zip(points, points[1:])]
        assert max(gaps) <= dwell + 1e-9, (s, nxt)


def test_thousand_random_commands_never_reverse_directly():
    rng = random.Random(1)
    cmds = random_stream(rng, 1000)
    log = run_sequence(cmds, dwell_s=1.0, until_s=cmds[-1].at_s + 2.0)
    check_log(log, cmds, 1.0)
    assert log[-1].value is S
