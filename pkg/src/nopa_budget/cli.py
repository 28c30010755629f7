"""Command-line frontend.

Exit codes: 0 success, 2 input or parse error, 3 model or domain error.
All dB values are relative to the QNL.
"""

import argparse
import json
import sys

import numpy as np

from .budget_fit import FORMAT_VERSION, fit, predict, sweep_upgrade
from .config import DEFAULTS, build_model, coerce, load_config, model_params
from .detection_chain import infer_electronic_noise, subtract_electronic_noise
from .errors import CalibrationError, ConfigError, DomainError, TraceFormatError
from .gaussian_core import CorrelationVariances, db_from_linear, duan_sum, linear_from_db
from .mode_cleaner import ModeCleanerParams, filter_excess_noise
from .trace_lab import (
    format_trace,
    qnl_calibrate,
    read_excess_table,
    read_trace,
    synth_trace,
    trace_stats,
    write_excess_table,
    write_trace,
)

EXIT_OK, EXIT_INPUT, EXIT_MODEL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(payload, as_json, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    for line in _text_lines(payload):
        out.write(line + "\n")


def _text_lines(payload, prefix=""):
    for key, value in payload.items():
        if isinstance(value, dict):
            yield from _text_lines(value, prefix=f"{prefix}{key}.")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                yield from _text_lines(item, prefix=f"{prefix}{key}[{i}].")
        elif isinstance(value, float):
            yield f"{prefix}{key}: {value:.6g}"
        else:
            yield f"{prefix}{key}: {value}"


def _overrides(args):
    out = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        out[key.strip()] = coerce(key.strip(), value)
    return out


def _config(args):
    cfg = load_config(args.config)
    cfg.update(_overrides(args))
    return cfg


def cmd_budget(args):
    c, op, d, _ = build_model(_config(args))
    report = predict(c, op, d)
    _emit(report.to_dict(), args.json)


def cmd_correct(args):
    measured = linear_from_db(args.measured_db)
    elec = linear_from_db(args.elec_db)
    corrected = subtract_electronic_noise(measured, elec)
    _emit({
        "format_version": FORMAT_VERSION,
        "kind": "correct",
        "measured_db": args.measured_db,
        "elec_db": args.elec_db,
        "corrected_db": db_from_linear(corrected),
        "corrected_linear": corrected,
    }, args.json)


def cmd_infer(args):
    elec = infer_electronic_noise(linear_from_db(args.measured_db),
                                  linear_from_db(args.corrected_db))
    _emit({
        "format_version": FORMAT_VERSION,
        "kind": "infer",
        "elec_rel": elec,
        "elec_db": db_from_linear(elec) if elec > 0 else None,
    }, args.json)


def cmd_duan(args):
    v = CorrelationVariances.from_db(args.vx_db, args.vy_db)
    total, entangled = duan_sum(v)
    if args.json:
        _emit({
            "format_version": FORMAT_VERSION,
            "kind": "duan",
            "v_sum_x": v.v_sum_x,
            "v_diff_y": v.v_diff_y,
            "sum": total,
            "bound": 2.0,
            "entangled": entangled,
        }, True)
    else:
        verdict = "entangled" if entangled else "not entangled"
        print(f"sum: {total:.4f} (bound 2) {verdict}")


def cmd_synth(args):
    t = synth_trace(args.mean_db, args.rbw_hz, args.vbw_hz, args.duration_s,
                    args.sample_rate_hz, args.seed, args.center_hz, args.label)
    if args.output:
        write_trace(t, args.output)
        s = trace_stats(t)
        _emit({"format_version": FORMAT_VERSION, "kind": "synth", "path": args.output,
               "n_samples": s.n_samples, "mean_db": s.mean_db, "rel_std": s.rel_std},
              args.json)
    else:
        sys.stdout.write(format_trace(t))


def cmd_stats(args):
    t = read_trace(args.trace)
    s = trace_stats(t)
    _emit({"format_version": FORMAT_VERSION, "kind": "stats", "label": t.label,
           "mean_db": s.mean_db, "std_db": s.std_db, "rel_std": s.rel_std,
           "n_samples": s.n_samples}, args.json)


def cmd_calibrate(args):
    qnl = read_trace(args.qnl)
    sig = read_trace(args.signal)
    level = qnl_calibrate(qnl, sig, args.power_qnl_uw, args.power_signal_uw, args.tol)
    _emit({"format_version": FORMAT_VERSION, "kind": "calibrate",
           "level_db": level}, args.json)


def cmd_mcfilter(args):
    linewidth = args.linewidth_hz
    if linewidth is None:
        linewidth = _config(args)["mc_linewidth_hz"]
    mc = ModeCleanerParams(linewidth)
    header, points = read_excess_table(args.input)
    filtered = [filter_excess_noise(p, mc) for p in points]
    out_header = dict(header)
    out_header["mc_linewidth_hz"] = repr(float(linewidth))
    if args.output:
        write_excess_table(filtered, args.output, out_header)
    _emit({
        "format_version": FORMAT_VERSION,
        "kind": "mcfilter",
        "mc_linewidth_hz": float(linewidth),
        "points": [{"freq_hz": p.freq_hz, "excess_in_db": p.excess_db,
                    "excess_out_db": q.excess_db} for p, q in zip(points, filtered)],
    }, args.json)


def _parse_measure(item):
    quantity, sep, value = item.partition("=")
    if not sep:
        raise ConfigError(f"--measure expects quantity=dB, got {item!r}")
    try:
        return quantity.strip(), float(value)
    except ValueError:
        raise ConfigError(f"--measure value is not a number: {item!r}") from None


def _parse_free(item):
    name, sep, rng = item.partition("=")
    lo, sep2, hi = rng.partition(":")
    if not (sep and sep2):
        raise ConfigError(f"--free expects name=lo:hi, got {item!r}")
    name = name.strip()
    if name not in DEFAULTS and name not in ("sigma", "elec_rel"):
        raise ConfigError(f"unknown free parameter {name!r}", key=name)
    try:
        return name, (float(lo), float(hi))
    except ValueError:
        raise ConfigError(f"--free bounds are not numbers: {item!r}") from None


def cmd_fit(args):
    cfg = _config(args)
    measured = [_parse_measure(m) for m in args.measure or []]
    free = dict(_parse_free(f) for f in args.free or [])
    result = fit(measured, free, model_params(cfg), args.grid_points)
    _emit(result.to_dict(), args.json)


def cmd_sweep(args):
    c, _, d, _ = build_model(_config(args))
    sigmas = np.linspace(args.sigma_min, args.sigma_max, args.sigma_n)
    f_hz = args.analysis_hz or _config(args)["analysis_hz"]
    result = sweep_upgrade(c, d, sigmas, f_hz)
    payload = result.to_dict()
    if args.json:
        _emit(payload, True)
    else:
        cap = " (capped)" if result.capped else ""
        print(f"best: {result.best_corrected_db:.2f} dB at sigma {result.best_sigma:.3f}{cap}")
        _emit({k: v for k, v in payload.items() if k not in ("best_sigma", "best_corrected_db")},
              False)


def _add_config_args(p):
    p.add_argument("config", nargs="?", help="key=value config file (default: built-in paper values)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override one config entry (repeatable)")


def build_parser():
    parser = _Parser(prog="nopa-budget", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--text", dest="json", action="store_false", help="plain text (default)")
        return p

    p = add("budget", cmd_budget, "full-chain noise budget")
    _add_config_args(p)

    p = add("correct", cmd_correct, "remove the electronic floor from a measured level")
    p.add_argument("--measured-db", type=float, required=True)
    p.add_argument("--elec-db", type=float, required=True)

    p = add("infer", cmd_infer, "electronic floor implied by a measured/corrected pair")
    p.add_argument("--measured-db", type=float, required=True)
    p.add_argument("--corrected-db", type=float, required=True)

    p = add("duan", cmd_duan, "Duan sum of two QNL-relative levels")
    p.add_argument("--vx-db", type=float, required=True, help="amplitude-sum level (dB)")
    p.add_argument("--vy-db", type=float, required=True, help="phase-difference level (dB)")

    p = add("synth", cmd_synth, "synthesize a zero-span trace CSV")
    p.add_argument("--mean-db", type=float, required=True)
    p.add_argument("--rbw-hz", type=float, default=30e3)
    p.add_argument("--vbw-hz", type=float, default=100.0)
    p.add_argument("--duration-s", type=float, default=1.0)
    p.add_argument("--sample-rate-hz", type=float, default=None)
    p.add_argument("--center-hz", type=float, default=2e6)
    p.add_argument("--label", default="")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")

    p = add("stats", cmd_stats, "linear-power mean and spread of a trace")
    p.add_argument("trace")

    p = add("calibrate", cmd_calibrate, "signal level relative to a power-matched QNL trace")
    p.add_argument("qnl")
    p.add_argument("signal")
    p.add_argument("--power-qnl-uw", type=float, required=True)
    p.add_argument("--power-signal-uw", type=float, required=True)
    p.add_argument("--tol", type=float, default=0.05)

    p = add("mcfilter", cmd_mcfilter, "pass tabulated pump excess noise through a mode cleaner")
    p.add_argument("input", help="freq_hz,excess_db table")
    p.add_argument("-o", "--output")
    p.add_argument("--linewidth-hz", type=float, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")

    p = add("fit", cmd_fit, "grid-search fit of free parameters to measured levels")
    _add_config_args(p)
    p.add_argument("--measure", action="append", metavar="QUANTITY=DB",
                   help="measured, corrected, jitter, efficiency or ideal level (repeatable)")
    p.add_argument("--free", action="append", metavar="NAME=LO:HI",
                   help="free parameter with bounds (repeatable, at most 3)")
    p.add_argument("--grid-points", type=int, default=None)

    p = add("sweep", cmd_sweep, "best pump ratio for an upgraded cavity/detector")
    _add_config_args(p)
    p.add_argument("--sigma-min", type=float, default=0.0)
    p.add_argument("--sigma-max", type=float, default=0.99)
    p.add_argument("--sigma-n", type=int, default=100)
    p.add_argument("--analysis-hz", type=float, default=None)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        args.func(args)
    except (ConfigError, TraceFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
