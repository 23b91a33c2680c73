"""Run configuration: JSON in, validated experiment description out.

A config file is one JSON object.  Unknown fields are rejected by name rather
than ignored, so a typo like "semantcs" cannot silently fall back to a
default and change the science.  Example:

    {
      "experiment": "qfi",
      "disorder": {"kind": "dynamic", "p": 1.0},
      "steps": 50,
      "maps": 1000,
      "seed": 7
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .disorder import KINDS, SEMANTICS, validate_disorder
from .ensemble import EnsembleConfig, InitialStateSpec
from .errors import ConfigError
from .operators import OPERATOR_ORDERS, PHASE_FIRST
from .states import TWO_PARTICLE_KINDS
from .twoparticle import DEFAULT_INDISTINGUISHABLE

EXPERIMENTS = ("qfi", "variance", "distribution", "two-particle", "fit")
FORMATS = ("csv", "json")

_TOP_KEYS = {
    "experiment", "disorder", "steps", "maps", "phi", "initial", "seed",
    "out", "format", "plot", "fit", "per_map_variance", "operator_order",
}
_DISORDER_KEYS = {"kind", "p", "semantics"}
_INITIAL_KEYS = {"kind", "position", "coin"}
_FIT_KEYS = {"t_min", "t_max", "window"}


@dataclass
class RunConfig:
    """A fully resolved simulate/fit run."""

    experiment: str
    disorder_kind: str
    p: float
    semantics: str
    n_steps: int
    n_maps: int
    phi: float
    initial: InitialStateSpec
    seed: int
    out_dir: str = "."
    output_format: str = "csv"
    plot: bool = False
    fit: dict = None
    per_map_variance: bool = False
    operator_order: str = PHASE_FIRST

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


def _require(condition, message):
    if not condition:
        raise ConfigError(message)


def _check_keys(obj, allowed, where):
    unknown = sorted(set(obj) - allowed)
    _require(not unknown, f"unknown {where} field(s): {', '.join(unknown)}")


def _coin_amp(value, name):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"'{name}' must be a number or a [re, im] pair")


def _parse_initial(obj, experiment):
    if obj is None:
        kind = DEFAULT_INDISTINGUISHABLE if experiment == "two-particle" else "single"
        return InitialStateSpec(kind=kind)
    _require(isinstance(obj, dict), "'initial' must be an object")
    _check_keys(obj, _INITIAL_KEYS, "'initial'")
    kind = obj.get("kind", "single")
    _require(
        kind in ("single",) + TWO_PARTICLE_KINDS,
        f"'initial.kind' must be one of single/{'/'.join(TWO_PARTICLE_KINDS)}",
    )
    position = obj.get("position", 0)
    _require(
        isinstance(position, int) and not isinstance(position, bool),
        "'initial.position' must be an integer",
    )
    if "coin" in obj:
        _require(
            kind == "single",
            "'initial.coin' only applies to single-walker states",
        )
        coin_raw = obj["coin"]
        _require(
            isinstance(coin_raw, list) and len(coin_raw) == 2,
            "'initial.coin' must be a two-entry list [up, down]",
        )
        coin = (
            _coin_amp(coin_raw[0], "initial.coin[0]"),
            _coin_amp(coin_raw[1], "initial.coin[1]"),
        )
        n2 = abs(coin[0]) ** 2 + abs(coin[1]) ** 2
        _require(abs(n2 - 1.0) <= 1e-9, "'initial.coin' must be normalized")
    else:
        coin = (1.0 + 0.0j, 0.0j)
    try:
        return InitialStateSpec(kind=kind, position=position, coin=coin)
    except ValueError as exc:
        raise ConfigError(f"'initial': {exc}") from exc


def _parse_fit(obj, n_steps):
    _require(isinstance(obj, dict), "'fit' must be an object")
    _check_keys(obj, _FIT_KEYS, "'fit'")
    _require("t_min" in obj and "t_max" in obj, "'fit' needs 't_min' and 't_max'")
    t_min, t_max = obj["t_min"], obj["t_max"]
    for name, v in (("t_min", t_min), ("t_max", t_max)):
        _require(
            isinstance(v, int) and not isinstance(v, bool) and v >= 1,
            f"'fit.{name}' must be a positive integer",
        )
    _require(t_min < t_max, "'fit.t_min' must be below 'fit.t_max'")
    _require(t_max <= n_steps, "'fit.t_max' exceeds the number of steps")
    out = {"t_min": t_min, "t_max": t_max}
    if "window" in obj:
        w = obj["window"]
        _require(
            isinstance(w, int) and not isinstance(w, bool) and w >= 5,
            "'fit.window' must be an integer >= 5",
        )
        out["window"] = w
    return out


def parse_config(raw):
    """Validate a decoded JSON object into a RunConfig."""
    _require(isinstance(raw, dict), "config must be a JSON object")
    _check_keys(raw, _TOP_KEYS, "config")

    experiment = raw.get("experiment")
    _require(
        experiment in EXPERIMENTS,
        f"'experiment' must be one of {'/'.join(EXPERIMENTS)}",
    )

    n_steps = raw.get("steps")
    _require(
        isinstance(n_steps, int) and not isinstance(n_steps, bool) and n_steps >= 1,
        "'steps' must be an integer >= 1",
    )

    disorder = raw.get("disorder", {"kind": "none"})
    _require(isinstance(disorder, dict), "'disorder' must be an object")
    _check_keys(disorder, _DISORDER_KEYS, "'disorder'")
    kind = disorder.get("kind")
    _require(kind in KINDS, f"'disorder.kind' must be one of {'/'.join(KINDS)}")
    p = disorder.get("p", 0.0)
    _require(
        isinstance(p, (int, float)) and not isinstance(p, bool),
        "'disorder.p' must be a number",
    )
    semantics = disorder.get("semantics", "bernoulli-uniform")
    _require(
        semantics in SEMANTICS,
        f"'disorder.semantics' must be one of {'/'.join(SEMANTICS)}",
    )
    try:
        validate_disorder(kind, n_steps, float(p), semantics)
    except ValueError as exc:
        raise ConfigError(f"'disorder': {exc}") from exc

    # Unspecified ensembles default to the full publication-grade size;
    # desk-scale runs should say "maps" explicitly.
    n_maps = raw.get("maps", 10000)
    _require(
        isinstance(n_maps, int) and not isinstance(n_maps, bool) and n_maps >= 1,
        "'maps' must be an integer >= 1",
    )

    phi = raw.get("phi", 0.0)
    _require(
        isinstance(phi, (int, float))
        and not isinstance(phi, bool)
        and math.isfinite(phi),
        "'phi' must be a finite number",
    )

    seed = raw.get("seed", 0)
    _require(
        isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0,
        "'seed' must be a nonnegative integer",
    )

    out_dir = raw.get("out", ".")
    _require(isinstance(out_dir, str) and out_dir, "'out' must be a directory path")

    output_format = raw.get("format", "csv")
    _require(
        output_format in FORMATS, f"'format' must be one of {'/'.join(FORMATS)}"
    )

    plot = raw.get("plot", False)
    _require(isinstance(plot, bool), "'plot' must be true or false")

    per_map_variance = raw.get("per_map_variance", False)
    _require(
        isinstance(per_map_variance, bool), "'per_map_variance' must be true or false"
    )

    operator_order = raw.get("operator_order", PHASE_FIRST)
    _require(
        operator_order in OPERATOR_ORDERS,
        f"'operator_order' must be one of {'/'.join(OPERATOR_ORDERS)}",
    )

    initial = _parse_initial(raw.get("initial"), experiment)
    if experiment == "two-particle":
        _require(
            initial.kind in TWO_PARTICLE_KINDS,
            "'two-particle' experiments need a two-particle 'initial.kind'",
        )

    fit = None
    if "fit" in raw:
        fit = _parse_fit(raw["fit"], n_steps)
    _require(
        experiment != "fit" or fit is not None,
        "'fit' experiments need a 'fit' object with 't_min' and 't_max'",
    )

    return RunConfig(
        experiment=experiment,
        disorder_kind=kind,
        p=float(p),
        semantics=semantics,
        n_steps=n_steps,
        n_maps=n_maps,
        phi=float(phi),
        initial=initial,
        seed=seed,
        out_dir=out_dir,
        output_format=output_format,
        plot=plot,
        fit=fit,
        per_map_variance=per_map_variance,
        operator_order=operator_order,
    )


def load_config(path):
    """Read and validate a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)


def to_ensemble_config(cfg):
    """EnsembleConfig for a RunConfig, with collect flags set by experiment."""
    return EnsembleConfig(
        kind=cfg.disorder_kind,
        p=cfg.p,
        n_steps=cfg.n_steps,
        n_maps=cfg.n_maps,
        master_seed=cfg.seed,
        phi=cfg.phi,
        semantics=cfg.semantics,
        initial=cfg.initial,
        collect_qfi=cfg.experiment in ("qfi", "two-particle", "fit"),
        collect_distribution=cfg.experiment == "distribution",
        collect_variance=cfg.experiment == "variance",
        per_map_variance=cfg.experiment == "variance" and cfg.per_map_variance,
        operator_order=cfg.operator_order,
    )


def describe_ensemble(config, experiment, fit=None):
    """Canonical dict of the science-relevant parameters of a run.

    This is what gets hashed into output manifests: everything that can
    change the numbers, and nothing that cannot (output paths, worker
    counts, plot toggles).
    """
    initial = {
        "kind": config.initial.kind,
        "position": config.initial.position,
        "coin": [
            [config.initial.coin[0].real, config.initial.coin[0].imag],
            [config.initial.coin[1].real, config.initial.coin[1].imag],
        ],
    }
    desc = {
        "experiment": experiment,
        "disorder": {
            "kind": config.kind,
            "p": config.p,
            "semantics": config.semantics,
        },
        "steps": config.n_steps,
        "maps": config.n_maps,
        "phi": config.phi,
        "seed": config.master_seed,
        "initial": initial,
        "operator_order": config.operator_order,
    }
    if config.per_map_variance:
        desc["per_map_variance"] = True
    if fit is not None:
        desc["fit"] = dict(fit)
    return desc
