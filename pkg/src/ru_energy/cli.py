"""Command-line front end.

Four subcommands: ``power`` (single-point power/current report), ``profiles``
(builtin presets with range annotations), ``simulate`` (one scenario run),
and ``sweep`` (the Tx-power sweep). Configuration comes from an optional
sectioned YAML file; command-line flags override file values, which
override defaults.

Exit codes are a stable scripting contract: 0 success, 1 domain or
validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import yaml

from ru_energy import __version__
from ru_energy.config_io import (
    ConfigError,
    OutputConfig,
    load_config,
    parse_cell_class,
    profile_to_mapping,
    resolve_output,
    resolve_profile,
    resolve_scenario,
    resolve_sweep,
)
from ru_energy.power_model import (
    Active,
    CellClass,
    Standby,
    builtin_profile,
    class_ranges,
    dbm_to_watts,
    fixed_overhead_p0,
    pa_power,
    reference_profile,
    ru_current,
    total_power,
    validate_profile_against_class,
)
from ru_energy.scenario import run_scenario
from ru_energy.sweep import emit_tables, run_sweep

WORKERS_ENV_VAR = "RU_ENERGY_WORKERS"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are validation errors under the exit-code contract.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _CliError(message)


class _CliError(ValueError):
    pass


def _load_sections(path: str | None) -> dict:
    return load_config(path) if path else {}


def _resolve_workers() -> int | None:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        return os.cpu_count()
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV_VAR} must be >= 1, got {workers}")
    return workers


def _write_output(text: str, output: OutputConfig) -> None:
    if output.path is None:
        sys.stdout.write(text)
    else:
        with open(output.path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _merge_output(args, sections) -> OutputConfig:
    output = resolve_output(sections.get("output"))
    fmt = args.format or output.format
    path = args.output if args.output is not None else output.path
    if path in ("stdout", "-"):
        path = None
    return OutputConfig(format=fmt, path=path)


def _profile_from_args(args, sections):
    if args.builtin is not None:
        feeder = args.feeder_loss_db if args.feeder_loss_db is not None else 0.0
        return builtin_profile(parse_cell_class(args.builtin), feeder_loss_db=feeder)
    if "profile" in sections:
        profile = resolve_profile(sections.get("profile"))
        if args.feeder_loss_db is not None:
            raise _CliError("--feeder-loss-db requires --builtin or the default profile")
        return profile
    return reference_profile(
        feeder_loss_db=args.feeder_loss_db if args.feeder_loss_db is not None else 0.0
    )


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_power(args) -> int:
    sections = _load_sections(args.config)
    profile = _profile_from_args(args, sections)

    lines = [
        f"cell_class: {profile.cell_class.value}",
        f"n_trx: {profile.n_trx}",
        f"state: {args.state}",
    ]
    if args.state == "standby":
        state = Standby()
        lines.append(f"p_sleep_w: {profile.p_sleep_w!r}")
    else:
        if args.tx_dbm is None:
            raise _CliError("--tx-dbm is required for the active state")
        state = Active(args.tx_dbm)
        p_tx_w = dbm_to_watts(args.tx_dbm)
        lines += [
            f"p_tx_dbm: {args.tx_dbm!r}",
            f"p_tx_w: {p_tx_w!r}",
            f"pa_power_w: {pa_power(p_tx_w, profile.eta_pa, profile.losses.delta_af)!r}",
            f"fixed_overhead_w: {fixed_overhead_p0(profile)!r}",
            f"loss_divisor: {profile.losses.supply_divisor!r}",
        ]
    lines += [
        f"total_power_w: {total_power(profile, state)!r}",
        f"current_a: {ru_current(profile, state)!r}",
        f"v_dc: {profile.v_dc!r}",
    ]
    print("\n".join(lines))
    return EXIT_OK


_RANGE_ANNOTATED = {
    "n_trx": "n_trx",
    "eta_pa": "eta_pa",
    "p_rf_w": "p_rf_w",
    "p_bb_w": "p_bb_w",
    "p_mmwave_w": "p_mmwave_w",
}


def cmd_profiles(args) -> int:
    classes = [parse_cell_class(args.cls)] if args.cls else list(CellClass)
    for cell_class in classes:
        profile = builtin_profile(cell_class)
        ranges = class_ranges(cell_class)
        print(f"[{cell_class.value}]")
        for key, value in profile_to_mapping(profile).items():
            if key in _RANGE_ANNOTATED:
                lo, hi = getattr(ranges, _RANGE_ANNOTATED[key])
                print(f"  {key}: {value!r} (class range {lo!r}..{hi!r})")
            elif key in ("p_sleep_w", "v_dc"):
                print(f"  {key}: {value!r} (unchecked)")
            else:
                print(f"  {key}: {value!r}")
        if args.validate:
            report = validate_profile_against_class(profile, ranges)
            verdict = "PASS" if report.ok else "FAIL"
            counts = {}
            for check in report.checks:
                counts[check.status] = counts.get(check.status, 0) + 1
            summary = ", ".join(f"{n} {status}" for status, n in sorted(counts.items()))
            print(f"  validation: {verdict} ({summary})")
            for check in report.checks:
                if check.status == "fail":
                    print(
                        f"    fail: {check.field}={check.value!r} outside {check.bounds!r}"
                    )
                elif check.status == "warning":
                    print(f"    warning: {check.field}: {check.note}")
        print()
    return EXIT_OK


def cmd_simulate(args) -> int:
    sections = _load_sections(args.config)
    profile = resolve_profile(sections.get("profile"))
    scenario = resolve_scenario(sections.get("scenario"))
    output = _merge_output(args, sections)

    result = run_scenario(scenario, profile, args.tx_dbm)
    if output.format == "csv":
        _write_output(result.events_csv(), output)
    else:
        _write_output(yaml.safe_dump(result.to_doc(), sort_keys=False), output)
    print(
        f"simulated {scenario.sim_time_s!r} s at {args.tx_dbm!r} dBm: "
        f"consumed_j={result.total_consumed_j!r} total_bits={result.total_bits!r}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    sections = _load_sections(args.config)
    profile = resolve_profile(sections.get("profile"))
    scenario = resolve_scenario(sections.get("scenario"))
    spec = resolve_sweep(sections.get("sweep"), scenario, profile)
    overrides = {}
    if args.start is not None:
        overrides["p_tx_start_dbm"] = args.start
    if args.end is not None:
        overrides["p_tx_end_dbm"] = args.end
    if args.step is not None:
        overrides["step_db"] = args.step
    if overrides:
        from dataclasses import replace

        spec = replace(spec, **overrides)
    output = _merge_output(args, sections)

    result = run_sweep(spec, workers=_resolve_workers())
    _write_output(emit_tables(result, output.format), output)
    peak_p, peak_eta = result.peak_efficiency_point
    print(f"peak: {peak_p!r} dBm, {peak_eta!r} kbit/J", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ru-energy", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    power = sub.add_parser("power", help="single-point power and current report")
    power.add_argument("--config", help="sectioned YAML config file")
    power.add_argument("--builtin", metavar="CLASS", help="builtin profile class")
    power.add_argument("--feeder-loss-db", type=float, default=None,
                       help="antenna feeder loss in dB for builtin/default profiles")
    power.add_argument("--state", choices=("active", "standby"), default="active")
    power.add_argument("--tx-dbm", type=float, default=None,
                       help="per-chain transmit power (active state)")
    power.set_defaults(func=cmd_power)

    profiles = sub.add_parser("profiles", help="list builtin profiles")
    profiles.add_argument("--class", dest="cls", default=None, help="single class to show")
    profiles.add_argument("--validate", action="store_true",
                          help="check each preset against its class ranges")
    profiles.set_defaults(func=cmd_profiles)

    simulate = sub.add_parser("simulate", help="run the two-cell scenario once")
    simulate.add_argument("--config", help="sectioned YAML config file")
    simulate.add_argument("--tx-dbm", type=float, default=40.0,
                          help="per-chain transmit power (default 40)")
    simulate.add_argument("--output", default=None, help="output file (default stdout)")
    simulate.add_argument("--format", choices=("csv", "doc"), default=None,
                          help="csv event log or structured doc")
    simulate.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", help="run the Tx-power sweep")
    sweep.add_argument("--config", help="sectioned YAML config file")
    sweep.add_argument("--start", type=float, default=None, help="grid start, dBm")
    sweep.add_argument("--end", type=float, default=None, help="grid end, dBm")
    sweep.add_argument("--step", type=float, default=None, help="grid step, dB")
    sweep.add_argument("--output", default=None, help="output file (default stdout)")
    sweep.add_argument("--format", choices=("csv", "doc"), default=None)
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # Covers ConfigError, ScenarioError, _CliError, and model invariants.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
