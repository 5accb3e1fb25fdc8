"""TOML run configuration: parsing and strict validation.

Schema (all sections flat key-value; unknown keys are rejected):

[array]     sensors (int, required); spacing_wavelengths (float) OR the
            triple spacing_m + wave_speed + omega
[scenario]  angles_deg (list, required); snapshots (int, required);
            seed (int, required); snr_db (float, required unless
            noiseless = true); alpha (float, default 0); coherent (bool,
            default false); noiseless (bool, default false)
[method]    name (music | extended-music | af | af-single, required);
            grid_resolution_deg (default 1.0); beta (default 0.02);
            assumed_sources (int, default = number of true angles);
            alpha (whitening override for extended-music)
[sweep]     snr_db (list, required); trials (int, required);
            methods (list of names, required)  -- section optional
"""
from __future__ import annotations

import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .arrays import ArrayConfig
from .errors import ConfigError
from .evaluate import MethodSpec
from .synth import Scenario

_SECTIONS = {"array", "scenario", "method", "sweep"}
_ARRAY_KEYS = {"sensors", "spacing_wavelengths", "spacing_m", "wave_speed", "omega"}
_SCENARIO_KEYS = {"angles_deg", "snapshots", "snr_db", "alpha", "coherent", "seed", "noiseless"}
_METHOD_KEYS = {"name", "grid_resolution_deg", "beta", "assumed_sources", "alpha"}
_SWEEP_KEYS = {"snr_db", "trials", "methods"}


@dataclass(frozen=True)
class SweepSpec:
    snr_db: tuple[float, ...]
    trials: int
    methods: tuple[MethodSpec, ...]


@dataclass(frozen=True)
class RunConfig:
    array: ArrayConfig
    scenario: Scenario
    method: MethodSpec
    sweep: SweepSpec | None = None


def _reject_unknown(section: str, data: dict, allowed: set) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def _require(section: str, data: dict, key: str):
    if key not in data:
        raise ConfigError(f"missing required key '{key}' in [{section}]")
    return data[key]


def _parse_array(data: dict) -> ArrayConfig:
    _reject_unknown("array", data, _ARRAY_KEYS)
    sensors = int(_require("array", data, "sensors"))
    if "spacing_wavelengths" in data:
        if {"spacing_m", "wave_speed", "omega"} & set(data):
            raise ConfigError("[array] spacing_wavelengths excludes spacing_m/wave_speed/omega")
        return ArrayConfig.from_wavelength_fraction(sensors, float(data["spacing_wavelengths"]))
    return ArrayConfig(
        sensors,
        float(_require("array", data, "spacing_m")),
        float(_require("array", data, "wave_speed")),
        float(_require("array", data, "omega")),
    )


def _parse_scenario(data: dict) -> Scenario:
    _reject_unknown("scenario", data, _SCENARIO_KEYS)
    angles = _require("scenario", data, "angles_deg")
    if not isinstance(angles, list):
        raise ConfigError("[scenario] angles_deg must be a list")
    noiseless = bool(data.get("noiseless", False))
    snr = data.get("snr_db")
    if snr is None and not noiseless:
        raise ConfigError("missing required key 'snr_db' in [scenario] (or set noiseless = true)")
    return Scenario(
        angles_deg=tuple(float(a) for a in angles),
        snapshots=int(_require("scenario", data, "snapshots")),
        snr_db=None if snr is None else float(snr),
        alpha=float(data.get("alpha", 0.0)),
        seed=int(_require("scenario", data, "seed")),
        coherent=bool(data.get("coherent", False)),
        noiseless=noiseless,
    )


def _parse_method(data: dict, scenario: Scenario) -> MethodSpec:
    _reject_unknown("method", data, _METHOD_KEYS)
    return MethodSpec(
        name=str(_require("method", data, "name")),
        assumed_sources=int(data["assumed_sources"]) if "assumed_sources" in data else None,
        resolution_deg=float(data.get("grid_resolution_deg", 1.0)),
        beta=float(data.get("beta", 0.02)),
        alpha=float(data["alpha"]) if "alpha" in data else None,
    )


def _parse_sweep(data: dict, method: MethodSpec) -> SweepSpec:
    _reject_unknown("sweep", data, _SWEEP_KEYS)
    snrs = _require("sweep", data, "snr_db")
    names = _require("sweep", data, "methods")
    if not isinstance(snrs, list) or not snrs:
        raise ConfigError("[sweep] snr_db must be a non-empty list")
    if not isinstance(names, list) or not names:
        raise ConfigError("[sweep] methods must be a non-empty list")
    methods = tuple(
        MethodSpec(
            name=str(n),
            assumed_sources=method.assumed_sources,
            resolution_deg=method.resolution_deg,
            beta=method.beta,
            alpha=method.alpha,
        )
        for n in names
    )
    return SweepSpec(
        snr_db=tuple(float(s) for s in snrs),
        trials=int(_require("sweep", data, "trials")),
        methods=methods,
    )


def load_config(path: str, seed_override: int | None = None) -> RunConfig:
    """Parse and fully validate a run config; raises ConfigError on any defect."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from exc
    unknown = set(raw) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for name in ("array", "scenario", "method"):
        if name not in raw:
            raise ConfigError(f"missing required section [{name}]")
    array = _parse_array(raw["array"])
    scenario = _parse_scenario(raw["scenario"])
    if seed_override is not None:
        from dataclasses import replace

        scenario = replace(scenario, seed=int(seed_override))
    method = _parse_method(raw["method"], scenario)
    sweep = _parse_sweep(raw["sweep"], method) if "sweep" in raw else None
    return RunConfig(array, scenario, method, sweep)
