"""Command-line entry point: ``eogchair <subcommand> ...``.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace

from . import __version__
from .decision import classify, save_commands_csv
from .errors import ValidationError
from .frontend import diff_amplify
from .harness import REPORT_FORMATS, evaluate, render_report
from .motor import Drive, MotorCommand, run_sequence, save_log_csv
from .sallen_key import (
    SallenKeyParams, apply_filter, discretize, response_table, save_coeffs_csv,
)
from .settings import load_config
from .signal_model import (
    DEFAULT_FS_HZ, NoiseConfig, add_noise, load_script, load_trace_csv, save_trace_csv,
    synth_trace,
)

log = logging.getLogger("eogchair")

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


def _cmd_synth(args) -> None:
    script = load_script(args.script)
    trace = synth_trace(script, args.total_s, args.fs)
    noise = NoiseConfig(white_sigma_uV=args.white_sigma, hum_amp_uV=args.hum_amp,
                        drift_amp_uV=args.drift_amp, seed=args.seed)
    trace = add_noise(trace, noise)
    save_trace_csv(trace, args.out)
    log.info("wrote %d samples to %s", trace.length, args.out)


def _cmd_filter(args) -> None:
    cfg = load_config(args.config)
    trace = load_trace_csv(args.trace)
    coeffs = discretize(cfg.pipeline.filter, trace.sample_rate_hz)
    if args.dump_coeffs:
        save_coeffs_csv(coeffs, args.dump_coeffs)
    out = apply_filter(diff_amplify(trace, cfg.pipeline.frontend), coeffs)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("time_s", "v_out_V", "clipped"))
        for t, v, c in zip(out.time_s, out.v_out_V, out.clipped):
            w.writerow([repr(float(t)), repr(float(v)), int(c)])


def _cmd_classify(args) -> None:
    cfg = load_config(args.config)
    trace = load_trace_csv(args.trace)
    pipeline = cfg.pipeline
    if trace.sample_rate_hz != pipeline.sample_rate_hz:
        pipeline = replace(pipeline, adc=replace(pipeline.adc, fs_hz=trace.sample_rate_hz))
    commands = classify(trace, pipeline)
    save_commands_csv(commands, args.out)
    if args.motor_log:
        stream = [MotorCommand(Drive.parse(c.direction), c.time_s) for c in commands]
        end = (trace.length - 1) / trace.sample_rate_hz
        save_log_csv(run_sequence(stream, cfg.motor.dwell_s, cfg.motor.tick_s, until_s=end),
                     args.motor_log)
    log.info("%d command(s)", len(commands))


def _cmd_evaluate(args) -> None:
    cfg = load_config(args.config)
    if not cfg.subjects:
        raise ValidationError("config defines no subjects to evaluate")
    trials = args.trials if args.trials is not None else cfg.n_trials
    seed = args.seed if args.seed is not None else cfg.master_seed
    report = evaluate(cfg.subjects, trials, cfg.pipeline, seed, cfg.trial, workers=args.workers)
    text = render_report(report, args.format)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_respond(args) -> None:
    coeffs = discretize(SallenKeyParams(args.fc, args.q, args.k), args.fs)
    table = response_table(coeffs, args.points)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("f_hz", "magnitude", "phase_rad"))
        for f, mag, ph in table:
            w.writerow([f"{f:.6f}", f"{mag:.9f}", f"{ph:.9f}"])
    finally:
        if out is not sys.stdout:
            out.close()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eogchair", description="EOG wheelchair control chain simulator")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="render a gaze script to a trace CSV")
    s.add_argument("script", help="lines of direction,onset_s,duration_s,amplitude_uV")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--total-s", type=float, required=True)
    s.add_argument("--fs", type=float, default=DEFAULT_FS_HZ)
    s.add_argument("--white-sigma", type=float, default=0.0, help="uV")
    s.add_argument("--hum-amp", type=float, default=0.0, help="uV at 50 Hz")
    s.add_argument("--drift-amp", type=float, default=0.0, help="uV at 0.2 Hz")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_synth)

    s = sub.add_parser("filter", help="amplify and low-pass a trace CSV")
    s.add_argument("trace")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--config")
    s.add_argument("--dump-coeffs", metavar="PATH", help="write b0,b1,b2,a1,a2,fs_hz")
    s.set_defaults(func=_cmd_filter)

    s = sub.add_parser("classify", help="detect Left/Right commands in a trace CSV")
    s.add_argument("trace")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--config")
    s.add_argument("--motor-log", metavar="PATH", help="also write the motor transition log")
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("evaluate", help="Monte-Carlo accuracy per subject")
    s.add_argument("--config")
    s.add_argument("--format", choices=REPORT_FORMATS, default="plain")
    s.add_argument("--seed", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("-o", "--out")
    s.set_defaults(func=_cmd_evaluate)

    s = sub.add_parser("respond", help="frequency response of a filter design")
    s.add_argument("--fc", type=float, default=50.0)
    s.add_argument("--q", type=float, default=SallenKeyParams().q)
    s.add_argument("--k", type=float, default=1.0)
    s.add_argument("--fs", type=float, default=DEFAULT_FS_HZ)
    s.add_argument("--points", type=int, default=1024)
    s.add_argument("-o", "--out")
    s.set_defaults(func=_cmd_respond)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
