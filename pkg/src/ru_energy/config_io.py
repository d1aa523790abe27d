"""Sectioned YAML configuration for the CLI and serialization helpers.

One file holds up to four sections (``profile``, ``scenario``, ``sweep``,
``output``); every key matches the corresponding dataclass field name.
Profiles serialize flat: the loss fractions and the mmWave breakdown are
inlined under their own field names. Unknown keys are rejected by name so
typos fail loudly instead of silently falling back to defaults.
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from ru_energy.power_model import (
    CellClass,
    LossFactors,
    MmWaveBreakdown,
    RuHardwareProfile,
    builtin_profile,
    reference_profile,
)
from ru_energy.scenario import ScenarioConfig, SleepWindow
from ru_energy.sweep import SweepSpec


class ConfigError(ValueError):
    """Malformed configuration content (unknown key, bad structure)."""


SECTION_NAMES = ("profile", "scenario", "sweep", "output")

PROFILE_SCALAR_KEYS = (
    "cell_class",
    "n_trx",
    "eta_pa",
    "delta_dc",
    "delta_ms",
    "delta_cool",
    "delta_af",
    "p_rf_w",
    "p_bb_w",
    "p_mmwave_w",
    "p_sleep_w",
    "v_dc",
)
BREAKDOWN_KEYS = ("p_precoding", "p_routing", "p_calib")

SCENARIO_KEYS = (
    "sim_time_s",
    "enb_count",
    "ue_count",
    "ue_speed_mps",
    "handover_interval_s",
    "enb_spacing_m",
    "traffic_peak_bps",
    "traffic_duty_cycle",
    "traffic_period_s",
    "handover_gap_s",
    "initial_energy_j",
    "sleep_schedule",
)

SWEEP_KEYS = ("p_tx_start_dbm", "p_tx_end_dbm", "step_db")

OUTPUT_KEYS = ("format", "path")


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: str | None = None  # None means stdout

    def __post_init__(self) -> None:
        if self.format not in ("csv", "doc"):
            raise ConfigError(
                f"unknown output format {self.format!r}; supported formats: csv, doc"
            )


def _require_mapping(value, where: str) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a key-value mapping, got {type(value).__name__}")
    return value


def _reject_unknown(mapping: dict, allowed, where: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown {where} key: {key!r}")


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return int(value)
    return value


def _as_float(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def parse_cell_class(name) -> CellClass:
    try:
        return CellClass(name)
    except ValueError:
        valid = ", ".join(c.value for c in CellClass)
        raise ConfigError(f"unknown cell class {name!r}; valid classes: {valid}") from None


def load_config(path: str) -> dict:
    """Read a sectioned YAML config file; returns {section: mapping}."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    data = _require_mapping(data, path)
    _reject_unknown(data, SECTION_NAMES, "config section")
    return {name: _require_mapping(data.get(name), f"section {name!r}") for name in data}


# --------------------------------------------------------------------------
# Profile
# --------------------------------------------------------------------------

def profile_to_mapping(profile: RuHardwareProfile) -> dict:
    """Flat key-value form of a profile, breakdown keys included when set."""
    doc = {
        "cell_class": profile.cell_class.value,
        "n_trx": profile.n_trx,
        "eta_pa": profile.eta_pa,
        "delta_dc": profile.losses.delta_dc,
        "delta_ms": profile.losses.delta_ms,
        "delta_cool": profile.losses.delta_cool,
        "delta_af": profile.losses.delta_af,
        "p_rf_w": profile.p_rf_w,
        "p_bb_w": profile.p_bb_w,
        "p_mmwave_w": profile.p_mmwave_w,
        "p_sleep_w": profile.p_sleep_w,
        "v_dc": profile.v_dc,
    }
    if profile.mmwave_breakdown is not None:
        doc["p_precoding"] = profile.mmwave_breakdown.p_precoding
        doc["p_routing"] = profile.mmwave_breakdown.p_routing
        doc["p_calib"] = profile.mmwave_breakdown.p_calib
    return doc


def profile_from_mapping(mapping: dict) -> RuHardwareProfile:
    """Build a profile from its flat key-value form.

    All scalar keys are required; the three breakdown keys are optional but
    must appear together. Unknown keys are rejected by name.
    """
    allowed = PROFILE_SCALAR_KEYS + BREAKDOWN_KEYS
    _reject_unknown(mapping, allowed, "profile")
    missing = [key for key in PROFILE_SCALAR_KEYS if key not in mapping]
    if missing:
        raise ConfigError(f"missing profile keys: {', '.join(missing)}")
    present_breakdown = [key for key in BREAKDOWN_KEYS if key in mapping]
    if present_breakdown and len(present_breakdown) != len(BREAKDOWN_KEYS):
        raise ConfigError(
            f"breakdown keys must appear together ({', '.join(BREAKDOWN_KEYS)}); "
            f"got only {', '.join(present_breakdown)}"
        )
    breakdown = None
    if present_breakdown:
        breakdown = MmWaveBreakdown(
            p_precoding=_as_float(mapping["p_precoding"], "p_precoding"),
            p_routing=_as_float(mapping["p_routing"], "p_routing"),
            p_calib=_as_float(mapping["p_calib"], "p_calib"),
        )
    return RuHardwareProfile(
        cell_class=parse_cell_class(mapping["cell_class"]),
        n_trx=_as_int(mapping["n_trx"], "n_trx"),
        eta_pa=_as_float(mapping["eta_pa"], "eta_pa"),
        losses=LossFactors(
            delta_dc=_as_float(mapping["delta_dc"], "delta_dc"),
            delta_ms=_as_float(mapping["delta_ms"], "delta_ms"),
            delta_cool=_as_float(mapping["delta_cool"], "delta_cool"),
            delta_af=_as_float(mapping["delta_af"], "delta_af"),
        ),
        p_rf_w=_as_float(mapping["p_rf_w"], "p_rf_w"),
        p_bb_w=_as_float(mapping["p_bb_w"], "p_bb_w"),
        p_mmwave_w=_as_float(mapping["p_mmwave_w"], "p_mmwave_w"),
        p_sleep_w=_as_float(mapping["p_sleep_w"], "p_sleep_w"),
        v_dc=_as_float(mapping["v_dc"], "v_dc"),
        mmwave_breakdown=breakdown,
    )


def resolve_profile(section: dict | None) -> RuHardwareProfile:
    """Profile from a config section.

    Three forms: empty (the 64-chain reference profile), ``builtin:`` with
    a class name and optional ``feeder_loss_db``, or the full explicit flat
    field set. Builtin and explicit fields are mutually exclusive.
    """
    if not section:
        return reference_profile()
    if "builtin" in section or "feeder_loss_db" in section:
        _reject_unknown(section, ("builtin", "feeder_loss_db"), "profile")
        feeder = _as_float(section.get("feeder_loss_db", 0.0), "feeder_loss_db")
        if "builtin" not in section:
            return reference_profile(feeder_loss_db=feeder)
        return builtin_profile(parse_cell_class(section["builtin"]), feeder_loss_db=feeder)
    return profile_from_mapping(section)


# --------------------------------------------------------------------------
# Scenario / sweep / output
# --------------------------------------------------------------------------

def _parse_sleep_schedule(value) -> tuple[SleepWindow, ...]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError("sleep_schedule must be a list of [ru_index, start_s, end_s]")
    windows = []
    for entry in value:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ConfigError(
                f"sleep_schedule entries must be [ru_index, start_s, end_s], got {entry!r}"
            )
        windows.append(
            SleepWindow(
                ru_index=_as_int(entry[0], "sleep_schedule ru_index"),
                start_s=_as_float(entry[1], "sleep_schedule start_s"),
                end_s=_as_float(entry[2], "sleep_schedule end_s"),
            )
        )
    return tuple(windows)


def resolve_scenario(section: dict | None) -> ScenarioConfig:
    """Scenario from a config section; missing keys keep their defaults."""
    section = section or {}
    _reject_unknown(section, SCENARIO_KEYS, "scenario")
    kwargs: dict = {}
    for key in ("enb_count", "ue_count"):
        if key in section:
            kwargs[key] = _as_int(section[key], key)
    for key in (
        "sim_time_s",
        "ue_speed_mps",
        "handover_interval_s",
        "enb_spacing_m",
        "traffic_peak_bps",
        "traffic_duty_cycle",
        "traffic_period_s",
        "handover_gap_s",
        "initial_energy_j",
    ):
        if key in section:
            kwargs[key] = _as_float(section[key], key)
    if "sleep_schedule" in section:
        kwargs["sleep_schedule"] = _parse_sleep_schedule(section["sleep_schedule"])
    return ScenarioConfig(**kwargs)


def resolve_sweep(
    section: dict | None, scenario: ScenarioConfig, profile: RuHardwareProfile
) -> SweepSpec:
    section = section or {}
    _reject_unknown(section, SWEEP_KEYS, "sweep")
    kwargs = {key: _as_float(section[key], key) for key in SWEEP_KEYS if key in section}
    return SweepSpec(scenario=scenario, profile=profile, **kwargs)


def resolve_output(section: dict | None) -> OutputConfig:
    section = section or {}
    _reject_unknown(section, OUTPUT_KEYS, "output")
    path = section.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError(f"output path must be a string, got {path!r}")
    if path in ("stdout", "-"):
        path = None
    fmt = section.get("format", "csv")
    if not isinstance(fmt, str):
        raise ConfigError(f"output format must be a string, got {fmt!r}")
    return OutputConfig(format=fmt, path=path)
