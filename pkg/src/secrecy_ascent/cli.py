"""Command-line front end: run experiments, validate configs, check gradients.

Outputs of ``run``:
  trace.csv      per accepted iteration of every trial's main ascent
                 (columns: trial, cycle, iteration, c_s, c_l, c_e, delta, p_s_db)
  aggregate.csv  mean curves over trials, benchmark columns included
  report.json    aggregate report plus a manifest (config snapshot, seed,
                 version, duration, output paths)
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelParams, draw_channel_set
from .config import SCHEMA, ConfigError, build_system_config, flat_items, resolve_config_file
from .experiment import (
    ExperimentKind,
    TrialError,
    run_fixed_power_experiment,
    run_variable_power_experiment,
)
from .gradients import capacity_difference, fd_gradient, gradient_bundle, gradient_check_error
from .metrics import PowerConfig
from .optimizer import warm_start

TRACE_HEADER = ["trial", "cycle", "iteration", "c_s", "c_l", "c_e", "delta", "p_s_db"]
GRADCHECK_TOL = 1e-5


@dataclass
class RunManifest:
    """What produced a run's outputs and where they went."""

    config: dict[str, str]
    seed: int
    version: str
    duration_s: float
    outputs: dict[str, str] = field(default_factory=dict)


def _p_s_db(p_s: float) -> float:
    return 10.0 * math.log10(p_s)


def _trace_rows(trial: int, records) -> list[list]:
    return [
        [trial, r.cycle, r.iteration, r.c_s, r.c_l, r.c_e, r.delta, _p_s_db(r.p_s)]
        for r in records
    ]


def cmd_run(config_path: str, overrides: dict[str, str], output_dir: str, threads: int) -> int:
    started = time.perf_counter()
    resolved = resolve_config_file(config_path, overrides)
    cfg = build_system_config(resolved)

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / "trace.csv"
    aggregate_path = out / "aggregate.csv"
    report_path = out / "report.json"

    with open(trace_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        if cfg.experiment is ExperimentKind.FIXED_POWER:
            report = run_fixed_power_experiment(
                cfg,
                threads=threads,
                on_trial=lambda i, res, _opt, _b: writer.writerows(
                    _trace_rows(i, res.trace.records)
                ),
            )
        else:
            report = run_variable_power_experiment(
                cfg,
                threads=threads,
                on_trial=lambda i, res: writer.writerows(_trace_rows(i, res.trace.records)),
            )

    with open(aggregate_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if cfg.experiment is ExperimentKind.FIXED_POWER:
            writer.writerow(["iteration", "c_s_mean", "c_s_we_opt_mean", "svd_bound_mean"])
            main_curve = report.c_s_mean_curve
            opt_curve = report.c_s_we_opt_mean_curve
            for t in range(max(len(main_curve), len(opt_curve))):
                c_s = main_curve[min(t, len(main_curve) - 1)]
                opt = opt_curve[min(t, len(opt_curve) - 1)]
                writer.writerow([t, c_s, opt, report.svd_bound_mean])
        else:
            writer.writerow(["cycle", "c_s_mean", "p_s_db_mean"])
            for k, (c_s, p_db) in enumerate(
                zip(report.c_s_mean_curve, report.p_s_db_mean_curve), start=1
            ):
                writer.writerow([k, c_s, p_db])

    manifest = RunManifest(
        config=dict(flat_items(resolved)),
        seed=cfg.seed,
        version=__version__,
        duration_s=round(time.perf_counter() - started, 3),
        outputs={
            "trace_csv": str(trace_path),
            "aggregate_csv": str(aggregate_path),
            "report_json": str(report_path),
        },
    )
    with open(report_path, "w") as fh:
        json.dump({"manifest": asdict(manifest), "report": asdict(report)}, fh, indent=2)
        fh.write("\n")

    print(f"wrote {trace_path}, {aggregate_path}, {report_path}")
    print(
        f"{report.experiment}: n_trials={report.n_trials} "
        f"converged c_s mean={report.converged_c_s_mean:.4f} bps/Hz"
    )
    if cfg.experiment is ExperimentKind.FIXED_POWER and report.svd_violations:
        print(
            f"note: converged c_s exceeded the SVD diagnostic in "
            f"{report.svd_violations}/{report.n_trials} trials"
        )
    return 0


def cmd_validate(config_path: str, overrides: dict[str, str]) -> int:
    resolved = resolve_config_file(config_path, overrides)
    build_system_config(resolved)
    for key, value in flat_items(resolved):
        print(f"{key} = {value}")
    return 0


def cmd_gradcheck(n_rx: int, n_tx: int, seed: int, instances: int, corrupt: bool) -> int:
    params = ChannelParams(n_clusters=3, n_rays=4, n_rx=n_rx, n_tx=n_tx, angular_spread_deg=10.0)
    pw = PowerConfig(p_s=10.0, p_j=10.0)
    rng = np.random.default_rng(seed)
    worst = {"w_l": 0.0, "f_j": 0.0, "f_s": 0.0, "w_e": 0.0}
    for _ in range(instances):
        ch = draw_channel_set(params, rng)
        bf = warm_start(params, rng)
        bundle = gradient_bundle(ch, bf, pw, include_we=True)
        analytic = {"w_l": bundle.g_wl, "f_j": bundle.g_fj, "f_s": bundle.g_fs, "w_e": bundle.g_we}
        if corrupt:
            analytic["w_l"] = analytic["w_l"] + 1e-3
        for name, grad in analytic.items():
            def objective(v, _name=name):
                probe = replace_vector(bf, _name, v)
                return capacity_difference(ch, probe, pw)

            ref = fd_gradient(objective, getattr(bf, name))
            worst[name] = max(worst[name], gradient_check_error(grad, ref))
    ok = all(err < GRADCHECK_TOL for err in worst.values())
    for name, err in worst.items():
        status = "ok" if err < GRADCHECK_TOL else "FAIL"
        print(f"grad {name}: max relative error {err:.3e}  [{status}]")
    return 0 if ok else 1


def replace_vector(bf, name: str, v: np.ndarray):
    probe = bf.copy()
    setattr(probe, name, v)
    return probe


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    for key in SCHEMA:
        parser.add_argument(f"--{key.replace('_', '-')}", dest=f"cfg_{key}", metavar="V")
    parser.add_argument("--trials", dest="cfg_n_trials", metavar="V",
                        help="alias for --n-trials")


def _collect_overrides(args: argparse.Namespace) -> dict[str, str]:
    return {
        name[len("cfg_"):]: value
        for name, value in vars(args).items()
        if name.startswith("cfg_") and value is not None
    }


def _default_threads() -> int:
    env = os.environ.get("SECRECY_ASCENT_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecy-ascent",
        description="Secrecy-capacity maximization over analog beamformers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the configured experiment and write outputs")
    p_run.add_argument("--config", required=True,
                       help="config file path or bundled preset (mmwave, sub6)")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: SECRECY_ASCENT_THREADS or 1)")
    _add_override_flags(p_run)

    p_val = sub.add_parser("validate", help="parse and validate a config, print it resolved")
    p_val.add_argument("--config", required=True)
    _add_override_flags(p_val)

    p_grad = sub.add_parser("gradcheck",
                            help="compare analytic gradients against finite differences")
    p_grad.add_argument("--n-rx", type=int, default=4)
    p_grad.add_argument("--n-tx", type=int, default=16)
    p_grad.add_argument("--seed", type=int, default=0)
    p_grad.add_argument("--instances", type=int, default=5)
    p_grad.add_argument("--corrupt", action="store_true",
                        help="corrupt one gradient to confirm the check trips")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            threads = args.threads if args.threads is not None else _default_threads()
            return cmd_run(args.config, _collect_overrides(args), args.out, threads)
        if args.command == "validate":
            return cmd_validate(args.config, _collect_overrides(args))
        return cmd_gradcheck(args.n_rx, args.n_tx, args.seed, args.instances, args.corrupt)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TrialError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
