"""Command-line front end.

    pulsekick run --config sim.toml [--scenario NAME] [--set key=value ...]
                  [--jobs N] [--neglect-dxb] [--fidelity MODE] [--out DIR]
                  [--emit-plot-script]
    pulsekick validate CONFIG

Exit codes: 0 full success, 1 any per-run failure, 2 spec errors (bad
flags, unreadable or invalid config).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .config import config_from_dict
from .sweeps import (SCENARIOS, SweepAxis, SweepSpec, apply_override,
                     parse_set_value, run_scenario)
from .types import ConfigError, FIDELITY_MODES, iter_notes_text, regime_notes


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pulsekick",
        description="Momentum exchange between a plane-wave light pulse and a two-level atom.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a simulation or parameter sweep")
    run_p.add_argument("--config", required=True, help="TOML config file")
    run_p.add_argument("--scenario", default="pulse-passage", choices=SCENARIOS)
    run_p.add_argument("--set", action="append", default=[], metavar="key=value",
                       help="override a config entry (dotted path); repeatable")
    run_p.add_argument("--axis", action="append", default=[], metavar="key=v1,v2,...",
                       help="sweep axis overriding the scenario default; repeatable")
    run_p.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="concurrent runs (default 1)")
    run_p.add_argument("--neglect-dxb", action="store_true",
                       help="drop the d(d x B)/dt force term")
    run_p.add_argument("--fidelity", choices=FIDELITY_MODES,
                       help="override the config fidelity mode")
    run_p.add_argument("--out", default="out", metavar="DIR",
                       help="output directory (default ./out)")
    run_p.add_argument("--emit-plot-script", action="store_true",
                       help="write a self-contained matplotlib script next to the CSVs")

    val_p = sub.add_parser("validate", help="check a config and print regime diagnostics")
    val_p.add_argument("config", help="TOML config file")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_run(args)
    except (ConfigError, OSError, tomllib.TOMLDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _load_doc(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _cmd_validate(args) -> int:
    doc = _load_doc(args.config)
    config = config_from_dict(doc)   # raises ConfigError with field paths
    notes = regime_notes(config)
    det = config.detuning
    gamma = config.atom.gamma
    print("OK")
    print(f"  delta/gamma        = {det.delta / gamma:.6g}")
    print(f"  Omega0/gamma       = {det.rabi_peak / gamma:.6g}")
    print(f"  gamma*tau          = {gamma * config.pulse_duration_tau:.6g}")
    print(f"  gamma*rise_time    = {gamma * config.field.group_velocity_factor * config.field.envelope.rise_time:.6g}")
    print(f"  omega/gamma        = {config.field.omega / gamma:.6g}")
    print(f"  fidelity           = {config.fidelity}")
    print(f"  neglect_dxb        = {config.neglect_dxb}")
    if notes:
        print("regime warnings:")
        for line in iter_notes_text(notes):
            print(f"  {line}")
    else:
        print("regime warnings: none")
    return 0


def _cmd_run(args) -> int:
    doc = _load_doc(args.config)

    overrides = list(args.set)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        apply_override(doc, key.strip(), parse_set_value(raw.strip()))
    if args.neglect_dxb:
        apply_override(doc, "numerics.neglect_dxb", True)
    if args.fidelity:
        apply_override(doc, "numerics.fidelity", args.fidelity)

    axes = []
    for item in args.axis:
        if "=" not in item:
            raise ConfigError(f"--axis expects key=v1,v2,..., got {item!r}")
        key, _, raw = item.partition("=")
        values = tuple(parse_set_value(v.strip()) for v in raw.split(",") if v.strip())
        axes.append(SweepAxis(key.strip(), values))

    config_from_dict(doc)  # fail fast with field paths before any run starts

    spec = SweepSpec(scenario=args.scenario, out_dir=args.out, axes=tuple(axes),
                     jobs=args.jobs, emit_plot_script=args.emit_plot_script)
    rows, failed = run_scenario(spec, doc)

    for row in rows:
        tag = row["run_id"] or "-"
        if row["status"] == "ok":
            print(f"run {tag}: ok")
        else:
            print(f"run {tag}: FAILED ({row['error']})")
    print(f"{len(rows) - failed}/{len(rows)} runs succeeded; "
          f"summary in {Path(args.out) / 'summary.csv'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
