"""Command-line front end.

Three subcommands:

  simulate   run one experiment described by a JSON config file
  reproduce  rerun a named preset end to end (data + SVG)
  fit        extract power-law exponents from an existing series CSV

Exit codes: 0 success, 2 invalid config or arguments, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

import numpy as np

from ._version import __version__
from .analysis import fit_power_law, windowed_alpha
from .config import describe_ensemble, load_config, to_ensemble_config
from .ensemble import run_ensemble
from .errors import ConfigError
from .figures import FIGURES, reproduce_figure
from .output import (
    build_manifest,
    canonical_json,
    write_csv,
    write_json,
    write_manifest,
    write_text,
)
from .svgplot import heatmap, line_plot


def _fit_dict(fit):
    return {
        "alpha": fit.alpha,
        "amplitude": fit.amplitude,
        "t_min": fit.t_min,
        "t_max": fit.t_max,
        "n_points": fit.n_points,
        "residual_rms": fit.residual_rms,
    }


def _emit(cfg, stem, columns, rows, series, manifest, files):
    if cfg.output_format == "csv":
        path = os.path.join(cfg.out_dir, stem + ".csv")
        write_csv(path, columns, rows, manifest)
    else:
        path = os.path.join(cfg.out_dir, stem + ".json")
        write_json(path, manifest, series)
    files.append(path)


def _write_simulate_outputs(cfg, ens_cfg, series):
    files = []
    desc = describe_ensemble(ens_cfg, cfg.experiment, fit=cfg.fit)
    extras = {}
    fit = None
    alpha = None
    if cfg.experiment == "fit":
        fit = fit_power_law(series.qfi_mean, cfg.fit["t_min"], cfg.fit["t_max"])
        extras["fit_result"] = _fit_dict(fit)
        if "window" in cfg.fit:
            alpha = windowed_alpha(series.qfi_mean, window=cfg.fit["window"])
    manifest = build_manifest(desc, **extras)

    if cfg.experiment in ("qfi", "two-particle", "fit"):
        rows = [
            (int(t), m, s)
            for t, m, s in zip(series.steps, series.qfi_mean, series.qfi_stderr)
        ]
        _emit(cfg, "qfi", ("t", "qfi_mean", "qfi_stderr"), rows, {
            "t": series.steps.tolist(),
            "qfi_mean": series.qfi_mean.tolist(),
            "qfi_stderr": series.qfi_stderr.tolist(),
        }, manifest, files)
        if alpha is not None:
            rows = [(int(t), a) for t, a in zip(alpha.centers, alpha.alphas)]
            _emit(cfg, "alpha", ("t_center", "alpha"), rows, {
                "t_center": alpha.centers.tolist(),
                "alpha": alpha.alphas.tolist(),
            }, manifest, files)
        if cfg.plot:
            path = os.path.join(cfg.out_dir, "qfi.svg")
            write_text(path, line_plot(
                [(series.steps[2:], series.qfi_mean[2:], "QFI")],
                title=f"QFI ({cfg.disorder_kind}, p={cfg.p:g})",
                xlabel="step t", ylabel="QFI", log_x=True, log_y=True,
            ))
            files.append(path)
    elif cfg.experiment == "variance":
        rows = [(int(t), v) for t, v in zip(series.steps, series.variance)]
        _emit(cfg, "variance", ("t", "variance"), rows, {
            "t": series.steps.tolist(),
            "variance": series.variance.tolist(),
        }, manifest, files)
        if series.variance_per_map is not None:
            rows = [
                (int(t), v)
                for t, v in zip(series.steps, series.variance_per_map)
            ]
            _emit(cfg, "variance_per_map", ("t", "variance"), rows, {
                "t": series.steps.tolist(),
                "variance": series.variance_per_map.tolist(),
            }, manifest, files)
        if cfg.plot:
            path = os.path.join(cfg.out_dir, "variance.svg")
            write_text(path, line_plot(
                [(series.steps[1:], series.variance[1:], "Var(x)")],
                title=f"variance ({cfg.disorder_kind}, p={cfg.p:g})",
                xlabel="step t", ylabel="Var(x)", log_x=True, log_y=True,
            ))
            files.append(path)
    else:
        rows = []
        t_col, x_col, p_col = [], [], []
        for t in range(cfg.n_steps + 1):
            for i, x in enumerate(series.positions):
                prob = series.distribution[t, i]
                rows.append((int(t), int(x), prob))
                t_col.append(int(t))
                x_col.append(int(x))
                p_col.append(prob)
        _emit(cfg, "distribution", ("t", "x", "probability"), rows, {
            "t": t_col, "x": x_col, "probability": p_col,
        }, manifest, files)
        if cfg.plot:
            path = os.path.join(cfg.out_dir, "distribution.svg")
            write_text(path, heatmap(
                series.distribution, series.positions, series.steps,
                title=f"walker density ({cfg.disorder_kind}, p={cfg.p:g})",
                xlabel="position x", ylabel="step t",
            ))
            files.append(path)

    manifest_path = os.path.join(cfg.out_dir, "run_manifest.json")
    write_manifest(manifest_path, manifest)
    files.append(manifest_path)
    return files, fit


def _check_runtime_args(args):
    workers = getattr(args, "workers", None)
    if workers is not None and workers < 1:
        raise ConfigError("--workers must be >= 1")
    maps = getattr(args, "maps", None)
    if maps is not None and maps < 1:
        raise ConfigError("--maps must be >= 1")


def _resolve_workers(args):
    if args.workers is not None:
        return args.workers
    return os.cpu_count() or 1


def _cmd_simulate(args):
    _check_runtime_args(args)
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.format is not None:
        overrides["output_format"] = args.format
    if args.plot:
        overrides["plot"] = True
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    ens_cfg = to_ensemble_config(cfg)
    series = run_ensemble(ens_cfg, workers=_resolve_workers(args))
    files, fit = _write_simulate_outputs(cfg, ens_cfg, series)
    if fit is not None:
        print(
            f"alpha = {fit.alpha:.6g} over t in [{fit.t_min}, {fit.t_max}] "
            f"({fit.n_points} points, residual rms {fit.residual_rms:.3g})"
        )
    for path in files:
        print(f"wrote {path}")
    return 0


def _cmd_reproduce(args):
    _check_runtime_args(args)
    if args.seed < 0:
        raise ConfigError("--seed must be nonnegative")
    result = reproduce_figure(
        args.figure, args.out, paper_scale=args.paper_scale, maps=args.maps,
        seed=args.seed, fmt=args.format, workers=_resolve_workers(args),
    )
    for label, fit in result.fits.items():
        print(f"{args.figure} {label}: alpha = {fit.alpha:.4f} "
              f"over t in [{fit.t_min}, {fit.t_max}]")
    for path in result.files:
        print(f"wrote {path}")
    return 0


def _read_series_csv(path):
    """Steps and values from a two-or-more-column CSV written by this tool."""
    steps, values = [], []
    try:
        with open(path, encoding="utf-8") as fh:
            header = None
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if header is None:
                    header = line.split(",")
                    if len(header) < 2:
                        raise ConfigError(
                            f"{path}: need at least two columns, got {header}"
                        )
                    continue
                parts = line.split(",")
                steps.append(int(float(parts[0])))
                values.append(float(parts[1]))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"{path}: malformed series CSV: {exc}") from exc
    if not steps:
        raise ConfigError(f"{path}: no data rows")
    return steps, values


def _cmd_fit(args):
    steps, values = _read_series_csv(args.input)
    with open(args.input, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    steps = np.asarray(steps)
    values = np.asarray(values)
    fit = fit_power_law(values, args.t_min, args.t_max, steps=steps)
    manifest = {
        "tool": {"name": "dqwalk", "version": __version__},
        "input": args.input,
        "input_sha256": digest,
        "fit": _fit_dict(fit),
    }
    alpha = None
    if args.window is not None:
        alpha = windowed_alpha(values, window=args.window, steps=steps)
        rows = [(int(t), float(a)) for t, a in zip(alpha.centers, alpha.alphas)]
        if args.out:
            write_csv(args.out, ("t_center", "alpha"), rows, manifest)
            # status goes to stderr so stdout stays machine-readable
            print(f"wrote {args.out}", file=sys.stderr)
    if args.format == "json":
        if alpha is not None:
            manifest["alpha_series"] = {
                "t_center": alpha.centers.tolist(),
                "alpha": alpha.alphas.tolist(),
            }
        print(canonical_json(manifest))
        return 0
    if alpha is not None and not args.out:
        # windowed series streamed as CSV; the manifest comment carries the fit
        print(f"# manifest: {canonical_json(manifest)}")
        print("t_center,alpha")
        for t, a in rows:
            print(f"{t},{a!r}")
        return 0
    print(
        f"alpha = {fit.alpha:.6g} over t in [{fit.t_min}, {fit.t_max}] "
        f"({fit.n_points} points, residual rms {fit.residual_rms:.3g})"
    )
    return 0


CSV_SCHEMAS = """\
CSV schemas (first line is a `# manifest: {...}` provenance comment):
  qfi          t,qfi_mean,qfi_stderr
  variance     t,variance
  distribution t,x,probability
  alpha        t_center,alpha
"""


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="dqwalk",
        description="Disordered quantum-walk simulation and Fisher-information analysis",
        epilog=CSV_SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"dqwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run an experiment from a JSON config")
    sim.add_argument("--config", required=True, help="path to the JSON config file")
    sim.add_argument("--seed", type=int, default=None, help="override the master seed")
    sim.add_argument("--workers", type=int, default=None,
                     help="worker processes (default: all available cores)")
    sim.add_argument("--out", default=None, help="override the output directory")
    sim.add_argument("--format", choices=("csv", "json"), default=None,
                     help="override the output format")
    sim.add_argument("--plot", action="store_true", help="also write SVG plots")
    sim.set_defaults(handler=_cmd_simulate)

    rep = sub.add_parser("reproduce", help="rerun a named preset")
    rep.add_argument("figure", choices=sorted(FIGURES), help="preset name")
    rep.add_argument("--paper-scale", action="store_true",
                     help="use the full 10000-map ensembles")
    rep.add_argument("--maps", type=int, default=None,
                     help="override the ensemble size for disordered runs")
    rep.add_argument("--seed", type=int, default=0, help="master seed")
    rep.add_argument("--out", default=".", help="output directory")
    rep.add_argument("--format", choices=("csv", "json"), default="csv")
    rep.add_argument("--workers", type=int, default=None,
                     help="worker processes (default: all available cores)")
    rep.set_defaults(handler=_cmd_reproduce)

    fit = sub.add_parser("fit", help="fit a power law to a series CSV")
    fit.add_argument("--input", required=True, help="CSV with (t, value) columns")
    fit.add_argument("--t-min", type=int, required=True)
    fit.add_argument("--t-max", type=int, required=True)
    fit.add_argument("--window", type=int, default=None,
                     help="also compute a sliding-window exponent series")
    fit.add_argument("--out", default=None,
                     help="write the windowed series to this CSV")
    fit.add_argument("--format", choices=("text", "json"), default="text")
    fit.set_defaults(handler=_cmd_fit)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary: report and set exit code
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
