"""Command line entry point: ``qwalk <mode> [--config PATH] [overrides]``.

Modes
-----
sweep             power-law sweep, fitted exponents vs 1 - alpha
evolve            long runs with log-fit / localization verdicts
snapshot          distributions after a fixed number of steps
analytic-compare  discrete sigma against the Bessel prediction
identities        Bessel product-sum identity suite

Exit codes: 0 success, 1 invalid configuration, 2 numerical check failed,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import experiments
from ._core import BACKEND
from .config import MODES, ExperimentConfig
from .errors import ConfigError, MemoryLimitError, ScheduleExhausted

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


def _alpha_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Quantum walk with a time-dependent coin: simulations and checks.",
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", help="JSON experiment configuration")
    parser.add_argument("--alpha", type=_alpha_list, action="append",
                        help="power-law exponent(s), comma separated; repeatable")
    parser.add_argument("--steps", type=int,
                        help="final step n_max (snapshot: number of applied steps)")
    parser.add_argument("--n0", type=int, help="reference step of the analytic model")
    parser.add_argument("--record-every", type=int, dest="record_every")
    parser.add_argument("--schedule", help='schedule JSON, e.g. \'{"kind":"linear","gamma":0.01}\'')
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--print-config", action="store_true",
                        help="print the resolved configuration and exit")
    return parser


def make_config(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.load(args.config)
        cfg = replace(cfg, mode=args.mode)
    else:
        cfg = ExperimentConfig(mode=args.mode)
    overrides = {}
    if args.alpha:
        overrides["alphas"] = [a for group in args.alpha for a in group]
    if args.steps is not None:
        overrides["n_max"] = args.steps
    if args.n0 is not None:
        overrides["n0"] = args.n0
    if args.record_every is not None:
        overrides["record_every"] = args.record_every
    if args.out is not None:
        overrides["out"] = args.out
    if args.schedule is not None:
        try:
            overrides["schedule"] = json.loads(args.schedule)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--schedule: {exc.msg} at column {exc.colno}") from None
    cfg = replace(cfg, **overrides)
    cfg.validate("command line" if overrides else (args.config or "defaults"))
    return cfg.resolved()


def _report_sweep(rows):
    for r in rows:
        fit = r["fit"]
        flag = "ok " if r["ok"] else "OFF"
        print(f"[{flag}] alpha={r['alpha']:<4g} {r['regime']:<14} exponent={fit.exponent:.4f} "
              f"expected={r['predicted']:.2f} R2={fit.r_squared:.5f}")
    return EXIT_OK


def _report_evolve(rows):
    for r in rows:
        loc = r["is_localized"]
        print(f"{r['schedule']:<22} {r['regime']:<14} law={r['law']:<7} slope={r['slope']:.4f} "
              f"R2={r['r_squared']:.5f} localized={loc}")
    return EXIT_OK


def _report_snapshot(rows):
    for r in rows:
        print(f"{r['schedule']:<22} steps={r['n_steps']} edge={r['support_edge']} "
              f"sigma={r['sigma']:.3f} outer_peak={r['peak_site']}")
    return EXIT_OK


def _report_compare(results):
    code = EXIT_OK
    for r in results:
        a, b, c = r["coefficients"]
        print(f"{r['schedule']:<22} n0={r['n0']} A={a:.6g} B={b:.6g} C={c:.6g}")
        if r["fit_discrete"] is not None:
            print(f"    exponent discrete={r['fit_discrete'].exponent:.4f} "
                  f"analytic={r['fit_analytic'].exponent:.4f} "
                  f"difference={r['exponent_difference']:+.4f}")
        if r.get("note"):
            print(f"    {r['note']}")
        if r["ok"] is False:
            print(f"    FAIL: exponent difference exceeds {experiments.COMPARE_TOLERANCE}")
            code = EXIT_NUMERIC
    return code


def _report_identities(report):
    for p, err in report["max_error"].items():
        where = report["worst_case"].get(p)
        extra = f" (nu={where[0]}, t={where[1]:g})" if where else ""
        print(f"p={p}: max |sum - closed form| = {err:.3e}{extra}")
    print("all identities hold" if report["ok"]
          else f"FAIL: error above {report['tolerance']:g}")
    return EXIT_OK if report["ok"] else EXIT_NUMERIC


def run(cfg: ExperimentConfig) -> int:
    if cfg.mode == "sweep":
        return _report_sweep(experiments.run_sweep(cfg))
    if cfg.mode == "evolve":
        return _report_evolve(experiments.run_evolve(cfg))
    if cfg.mode == "snapshot":
        return _report_snapshot(experiments.run_snapshot(cfg))
    if cfg.mode == "analytic-compare":
        return _report_compare(experiments.run_analytic_compare(cfg))
    return _report_identities(experiments.run_identities())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
    except ConfigError as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"qwalk: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.print_config:
        sys.stdout.write(cfg.to_json())
        return EXIT_OK
    print(f"qwalk {cfg.mode} (kernels: {BACKEND})")
    try:
        return run(cfg)
    except (MemoryLimitError, ScheduleExhausted) as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"qwalk: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
