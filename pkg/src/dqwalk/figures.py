"""Named experiment presets bundling config, outputs and plots.

Each preset runs one reference panel end to end: build the ensemble, write
the data files (with embedded manifests), fit the scaling exponents that the
panel is about, and render an SVG.  Disordered presets default to 1000 maps,
which reproduces every exponent well inside its stated tolerance on a laptop;
--paper-scale raises that to the full 10000-map ensembles.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from .analysis import fit_power_law, windowed_alpha
from .config import describe_ensemble
from .ensemble import EnsembleConfig, InitialStateSpec, run_ensemble
from .output import build_manifest, write_csv, write_json, write_manifest, write_text
from .svgplot import heatmap, line_plot
from .twoparticle import TwoParticleExperiment, run_two_particle, separable_reference

DESK_MAPS = 1000
PAPER_MAPS = 10000

_BALANCED = (complex(1 / math.sqrt(2.0)), complex(1 / math.sqrt(2.0)))


@dataclass
class FigureResult:
    name: str
    files: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)


class _Job:
    """Shared knobs for one reproduce invocation."""

    def __init__(self, name, out_dir, paper_scale=False, maps=None, seed=0,
                 fmt="csv", workers=None):
        self.name = name
        self.out_dir = out_dir
        self.scale = PAPER_MAPS if paper_scale else DESK_MAPS
        self.maps_override = maps
        self.seed = seed
        self.fmt = fmt
        self.workers = workers
        self.result = FigureResult(name)

    def n_maps(self, p):
        if p == 0:
            return 1
        return self.maps_override if self.maps_override else self.scale

    def path(self, suffix):
        return os.path.join(self.out_dir, f"{self.name}_{suffix}")

    def emit_series(self, stem, columns, rows, series_dict, manifest):
        if self.fmt == "csv":
            path = self.path(stem + ".csv")
            write_csv(path, columns, rows, manifest)
        else:
            path = self.path(stem + ".json")
            write_json(path, manifest, series_dict)
        self.result.files.append(path)

    def emit_svg(self, stem, svg):
        path = self.path(stem + ".svg")
        write_text(path, svg)
        self.result.files.append(path)

    def emit_manifest(self, manifests):
        path = self.path("manifest.json")
        write_manifest(path, {"figure": self.name, "runs": manifests})
        self.result.files.append(path)


def _fit_dict(fit):
    return {
        "alpha": fit.alpha,
        "amplitude": fit.amplitude,
        "t_min": fit.t_min,
        "t_max": fit.t_max,
        "n_points": fit.n_points,
        "residual_rms": fit.residual_rms,
    }


def _qfi_rows(series):
    return [
        (int(t), m, s)
        for t, m, s in zip(series.steps, series.qfi_mean, series.qfi_stderr)
    ]


def _qfi_series_dict(series):
    return {
        "t": series.steps.tolist(),
        "qfi_mean": series.qfi_mean.tolist(),
        "qfi_stderr": series.qfi_stderr.tolist(),
    }


def _single_qfi_panel(job, kind, p, n_steps, fit_range):
    cfg = EnsembleConfig(
        kind=kind, p=p, n_steps=n_steps, n_maps=job.n_maps(p),
        master_seed=job.seed,
    )
    series = run_ensemble(cfg, workers=job.workers)
    fit = fit_power_law(series.qfi_mean, *fit_range)
    job.result.fits["qfi"] = fit
    desc = describe_ensemble(cfg, "qfi", fit={"t_min": fit_range[0], "t_max": fit_range[1]})
    manifest = build_manifest(desc, figure=job.name, fit=_fit_dict(fit))
    job.emit_series("qfi", ("t", "qfi_mean", "qfi_stderr"), _qfi_rows(series),
                    _qfi_series_dict(series), manifest)
    label = f"{kind} p={p:g}" if p > 0 else "ordered"
    svg = line_plot(
        [(series.steps[2:], series.qfi_mean[2:], label)],
        title=f"{job.name}: QFI, alpha[{fit.t_min},{fit.t_max}] = {fit.alpha:.3f}",
        xlabel="step t", ylabel="QFI", log_x=True, log_y=True,
    )
    job.emit_svg("qfi", svg)
    return [manifest]


def _alpha_panel(job, kind, p, n_steps, window=20):
    cfg = EnsembleConfig(
        kind=kind, p=p, n_steps=n_steps, n_maps=job.n_maps(p),
        master_seed=job.seed,
    )
    series = run_ensemble(cfg, workers=job.workers)
    alpha = windowed_alpha(series.qfi_mean, window=window)
    desc = describe_ensemble(cfg, "qfi")
    manifest = build_manifest(desc, figure=job.name, window=window)
    job.emit_series("qfi", ("t", "qfi_mean", "qfi_stderr"), _qfi_rows(series),
                    _qfi_series_dict(series), manifest)
    rows = [(int(t), a) for t, a in zip(alpha.centers, alpha.alphas)]
    job.emit_series(
        "alpha", ("t_center", "alpha"), rows,
        {"t_center": alpha.centers.tolist(), "alpha": alpha.alphas.tolist()},
        manifest,
    )
    job.emit_svg("qfi", line_plot(
        [(series.steps[2:], series.qfi_mean[2:], f"{kind} p={p:g}")],
        title=f"{job.name}: QFI", xlabel="step t", ylabel="QFI",
        log_x=True, log_y=True,
    ))
    job.emit_svg("alpha", line_plot(
        [(alpha.centers, alpha.alphas, f"window {window}")],
        title=f"{job.name}: local exponent", xlabel="window center t",
        ylabel="alpha(t)",
    ))
    return [manifest]


def _two_particle_panel(job, kind, p, n_steps=50):
    manifests = []
    curves = []
    n_maps = job.n_maps(p)
    for statistics in ("separable", "boson", "fermion"):
        exp = TwoParticleExperiment(
            statistics, kind, p, n_steps, n_maps, master_seed=job.seed,
        )
        series = run_two_particle(exp, workers=job.workers)
        desc = describe_ensemble(series.config, "two-particle")
        manifest = build_manifest(desc, figure=job.name, statistics=statistics)
        job.emit_series(f"qfi_{statistics}", ("t", "qfi_mean", "qfi_stderr"),
                        _qfi_rows(series), _qfi_series_dict(series), manifest)
        curves.append((series.steps[2:], series.qfi_mean[2:], statistics))
        manifests.append(manifest)
        if statistics == "separable":
            reference = separable_reference(exp, workers=job.workers)
            curves.append(
                (series.steps[2:], reference[2:], "single-walker sum")
            )
    label = f"{kind} p={p:g}" if p > 0 else "ordered"
    job.emit_svg("qfi", line_plot(
        curves,
        title=f"{job.name}: joint QFI ({label})",
        xlabel="step t", ylabel="QFI", log_x=True, log_y=True,
    ))
    return manifests


def _distribution_panels(job, n_steps=50):
    manifests = []
    panels = [
        ("none", 0.0), ("static", 0.1), ("static", 1.0),
        ("dynamic", 0.1), ("dynamic", 1.0),
    ]
    for kind, p in panels:
        cfg = EnsembleConfig(
            kind=kind, p=p, n_steps=n_steps, n_maps=job.n_maps(p),
            master_seed=job.seed,
            initial=InitialStateSpec(coin=_BALANCED),
            collect_qfi=False, collect_distribution=True,
        )
        series = run_ensemble(cfg, workers=job.workers)
        desc = describe_ensemble(cfg, "distribution")
        manifest = build_manifest(desc, figure=job.name)
        slug = "ordered" if kind == "none" else f"{kind}_p{p:g}"
        rows = []
        txt_t, txt_x, txt_p = [], [], []
        for t in range(n_steps + 1):
            for i, x in enumerate(series.positions):
                rows.append((int(t), int(x), series.distribution[t, i]))
                txt_t.append(int(t))
                txt_x.append(int(x))
                txt_p.append(series.distribution[t, i])
        job.emit_series(
            f"distribution_{slug}", ("t", "x", "probability"), rows,
            {"t": txt_t, "x": txt_x, "probability": txt_p}, manifest,
        )
        job.emit_svg(f"distribution_{slug}", heatmap(
            series.distribution, series.positions, series.steps,
            title=f"{job.name}: walker density ({slug})",
            xlabel="position x", ylabel="step t",
        ))
        manifests.append(manifest)
    return manifests


def _variance_panels(job, n_steps=100):
    manifests = []
    curves = {"static": [], "dynamic": []}
    panels = [
        ("none", 0.0), ("static", 0.1), ("static", 1.0),
        ("dynamic", 0.1), ("dynamic", 1.0),
    ]
    for kind, p in panels:
        cfg = EnsembleConfig(
            kind=kind, p=p, n_steps=n_steps, n_maps=job.n_maps(p),
            master_seed=job.seed,
            initial=InitialStateSpec(coin=_BALANCED),
            collect_qfi=False, collect_variance=True,
        )
        series = run_ensemble(cfg, workers=job.workers)
        fit = fit_power_law(series.variance, 10, n_steps)
        desc = describe_ensemble(cfg, "variance")
        manifest = build_manifest(desc, figure=job.name, fit=_fit_dict(fit))
        slug = "ordered" if kind == "none" else f"{kind}_p{p:g}"
        job.result.fits[slug] = fit
        rows = [(int(t), v) for t, v in zip(series.steps, series.variance)]
        job.emit_series(
            f"variance_{slug}", ("t", "variance"), rows,
            {"t": series.steps.tolist(), "variance": series.variance.tolist()},
            manifest,
        )
        label = "ordered" if kind == "none" else f"p = {p:g}"
        curve = (series.steps[1:], series.variance[1:], label)
        if kind == "none":
            curves["static"].append(curve)
            curves["dynamic"].append(curve)
        else:
            curves[kind].append(curve)
        manifests.append(manifest)
    for kind in ("static", "dynamic"):
        job.emit_svg(f"variance_{kind}", line_plot(
            curves[kind],
            title=f"{job.name}: spreading variance ({kind} disorder)",
            xlabel="step t", ylabel="Var(x)", log_x=True, log_y=True,
        ))
    return manifests


def _fig2a(job):
    return _single_qfi_panel(job, "none", 0.0, 100, (10, 100))


def _fig2b(job):
    return _single_qfi_panel(job, "dynamic", 0.1, 50, (10, 50))


def _fig2c_static(job):
    return _single_qfi_panel(job, "static", 1.0, 50, (10, 50))


def _fig2c_dynamic(job):
    return _single_qfi_panel(job, "dynamic", 1.0, 50, (10, 50))


def _fig3(job):
    return _alpha_panel(job, "static", 1.0, 100, window=20)


def _fig4a(job):
    return _two_particle_panel(job, "none", 0.0)


def _fig4b(job):
    return _two_particle_panel(job, "static", 1.0)


def _fig4c(job):
    return _two_particle_panel(job, "dynamic", 1.0)


FIGURES = {
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig2c-static": _fig2c_static,
    "fig2c-dynamic": _fig2c_dynamic,
    "fig3": _fig3,
    "fig4a": _fig4a,
    "fig4b": _fig4b,
    "fig4c": _fig4c,
    "fig5": _distribution_panels,
    "fig6": _variance_panels,
}


def reproduce_figure(name, out_dir, paper_scale=False, maps=None, seed=0,
                     fmt="csv", workers=None):
    """Run one named preset; returns the FigureResult with the written paths."""
    if name not in FIGURES:
        known = ", ".join(sorted(FIGURES))
        raise ValueError(f"unknown figure {name!r}; available: {known}")
    job = _Job(name, out_dir, paper_scale=paper_scale, maps=maps, seed=seed,
               fmt=fmt, workers=workers)
    manifests = FIGURES[name](job)
    job.emit_manifest(manifests)
    return job.result
