"""Command-line front end.

Subcommands:
  spectrum  -- pseudospectrum CSV (angle_deg,power_db), peak 0 dB
  estimate  -- print estimated angles and RMSE against configured truth
  sweep     -- Monte-Carlo mean-RMSE-vs-SNR CSV

Exit codes: 0 success, 2 config/IO problem, 3 numeric estimator failure.
Output files are written to a temp file and renamed, so a failed run
never leaves a partial file behind.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import af, music
from .config import RunConfig, load_config
from .covariance import sample_covariance, whiten
from .errors import ConfigError, EstimationError
from .evaluate import match_estimates, monte_carlo, rmse, run_method
from .synth import NoiseModel, synth_snapshots

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".afdoa-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _compute_spectrum(run: RunConfig) -> music.Pseudospectrum:
    if run.method.name not in ("music", "extended-music"):
        raise ConfigError("spectrum requires a MUSIC method (music or extended-music)")
    x = synth_snapshots(run.array, run.scenario)
    alpha = 0.0
    if run.method.name == "extended-music":
        alpha = run.scenario.alpha if run.method.alpha is None else run.method.alpha
    noise = NoiseModel.for_config(run.array, alpha) if alpha > 0 else None
    r_prime = whiten(sample_covariance(x), noise)
    n = run.method.assumed_sources or run.scenario.n_sources
    decomp = music.decompose(r_prime, n, noise)
    return music.pseudospectrum(run.array, decomp, run.method.resolution_deg)


def cmd_spectrum(args) -> int:
    run = load_config(args.config, args.seed)
    spectrum = _compute_spectrum(run)
    lines = ["angle_deg,power_db"]
    for angle, p_db in zip(spectrum.angles_deg, spectrum.power_db()):
        lines.append(f"{angle:.4f},{p_db:.6f}")
    _atomic_write(args.out, "\n".join(lines) + "\n")
    if args.af_out:
        x = synth_snapshots(run.array, run.scenario)
        solution = af.af_estimate(x, run.array, beta=run.method.beta)
        af_lines = ["angle_deg,residual"]
        for root, residual in zip(solution.roots, solution.residuals):
            if residual <= run.method.beta:
                try:
                    angle = af.root_to_angle(run.array, root)
                except EstimationError:
                    continue
                af_lines.append(f"{angle:.4f},{residual:.6e}")
        _atomic_write(args.af_out, "\n".join(af_lines) + "\n")
    return 0


def cmd_estimate(args) -> int:
    run = load_config(args.config, args.seed)
    x = synth_snapshots(run.array, run.scenario)
    estimates = run_method(x, run.array, run.scenario, run.method)
    report = match_estimates(run.scenario.angles_deg, estimates)
    error = rmse(report) if report.matched_pairs else float("nan")
    if args.json:
        payload = {
            "method": run.method.name,
            "angles_deg": [round(float(a), 4) for a in estimates],
            "rmse_deg": round(error, 6),
            "miss_count": report.miss_count,
            "false_count": report.false_count,
        }
        print(json.dumps(payload))
    else:
        print(f"method: {run.method.name}")
        print("angles_deg: " + ", ".join(f"{a:.4f}" for a in estimates))
        print(f"rmse_deg: {error:.4f}")
        if report.miss_count or report.false_count:
            print(f"missed: {report.miss_count}  false: {report.false_count}")
    return 0


def cmd_sweep(args) -> int:
    run = load_config(args.config, args.seed)
    if run.sweep is None:
        raise ConfigError("missing required section [sweep]")
    result = monte_carlo(
        run.array,
        run.scenario,
        run.sweep.snr_db,
        run.sweep.methods,
        run.sweep.trials,
        run.scenario.seed,
    )
    rows = sorted(result.rows, key=lambda r: (r.snr_db, r.method))
    lines = ["snr_db,method,mean_rmse_deg,trials"]
    for row in rows:
        lines.append(f"{row.snr_db:.1f},{row.method},{row.mean_rmse_deg:.6f},{row.trials}")
    _atomic_write(args.out, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afdoa", description="DOA estimation on uniform linear arrays"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML run configuration")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")

    p = sub.add_parser("spectrum", parents=[common], help="write a pseudospectrum CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--af-out", default=None, help="also write validated AF roots to this CSV")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("estimate", parents=[common], help="print estimated angles and RMSE")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", parents=[common], help="write a Monte-Carlo sweep CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"afdoa: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"afdoa: io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EstimationError as exc:
        print(f"afdoa: estimation error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
