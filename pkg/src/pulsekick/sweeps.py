"""Named scenarios and the parameter-sweep runner.

A sweep is a Cartesian product of axis values applied as overrides to a
base config document, one independent run per point.  Runs execute
concurrently up to the requested number of jobs; per-run failures are
recorded in the summary without aborting the sweep.

Override paths are dotted TOML paths ("field.group_velocity_factor",
"numerics.neglect_dxb", "scaled.delta_over_gamma").  Two virtual paths
work on any config, scaled or SI: "delta_over_gamma" and
"rabi0_over_gamma".
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import config_from_dict, config_to_dict
from .constants import C_LIGHT, HBAR
from .dynamics import integrate_motion, measure_displacements, run_id_for
from .io import photon_report_to_dict, write_json, write_run_artifacts, _fmt
from .ledger import photon_momentum_report
from .types import ConfigError

SCENARIOS = ("pulse-passage", "detuning-sweep", "saturation-sweep",
             "abraham-vs-minkowski", "slow-light")

SUMMARY_OBSERVABLES = (
    "net_dispersive_impulse", "final_kinetic", "final_scattered",
    "dx_dispersion", "dx_absorption", "measured_shift", "abraham_shift",
    "minkowski_shift", "discrimination", "max_beta", "n_warnings",
)


@dataclass(frozen=True)
class SweepAxis:
    path: str
    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ConfigError(f"sweep axis {self.path!r}: empty value range")


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    out_dir: str
    axes: tuple[SweepAxis, ...] = ()
    jobs: int = 1
    emit_plot_script: bool = False

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


def default_axes(scenario: str) -> tuple[SweepAxis, ...]:
    """Axes a scenario sweeps when the caller supplies none."""
    if scenario == "detuning-sweep":
        return (SweepAxis("delta_over_gamma", tuple(np.linspace(-10.0, 10.0, 21))),)
    if scenario == "saturation-sweep":
        return (SweepAxis("rabi0_over_gamma", (0.03, 0.1, 0.3, 1.0, 3.0)),)
    if scenario == "abraham-vs-minkowski":
        return (SweepAxis("numerics.neglect_dxb", (False, True)),)
    if scenario == "slow-light":
        return (SweepAxis("field.group_velocity_factor", (1.0, 10.0)),)
    return ()


def apply_override(doc: dict, path: str, value) -> None:
    """Set one override in a config document tree, in place."""
    if path == "delta_over_gamma":
        if "scaled" in doc:
            doc["scaled"]["delta_over_gamma"] = value
        else:
            gamma = doc["atom"]["gamma"]
            doc["atom"]["omega_at"] = doc["field"]["omega"] - value * gamma
        return
    if path == "rabi0_over_gamma":
        if "scaled" in doc:
            doc["scaled"]["rabi0_over_gamma"] = value
        else:
            gamma = doc["atom"]["gamma"]
            doc["field"]["peak_E0"] = HBAR * abs(value) * gamma / abs(doc["atom"]["dipole"])
        return
    parts = path.split(".")
    node = doc
    for part in parts[:-1]:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    node[parts[-1]] = value


def parse_set_value(text: str):
    """Interpret a --set value: bool, number, or bare string."""
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def run_scenario(spec: SweepSpec, base_doc: dict) -> tuple[list[dict], int]:
    """Execute a sweep; returns (summary rows, number of failed runs)."""
    axes = spec.axes if spec.axes else default_axes(spec.scenario)
    points = list(itertools.product(*(ax.values for ax in axes))) if axes else [()]
    out_root = Path(spec.out_dir)
    out_root.mkdir(parents=True, exist_ok=True)

    tasks = []
    for point in points:
        doc = _deep_copy(base_doc)
        for ax, value in zip(axes, point):
            apply_override(doc, ax.path, value)
        tasks.append((doc, spec.scenario, str(out_root),
                      {ax.path: v for ax, v in zip(axes, point)}))

    if spec.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            rows = list(pool.map(_run_one, tasks))
    else:
        rows = [_run_one(task) for task in tasks]

    failed = sum(1 for r in rows if r["status"] != "ok")
    axis_paths = [ax.path for ax in axes]
    _write_summary(out_root, rows, axis_paths, spec.scenario)
    if spec.emit_plot_script:
        (out_root / "plot_results.py").write_text(_PLOT_SCRIPT, newline="\n")
    return rows, failed


def _run_one(task) -> dict:
    doc, scenario, out_root, axis_values = task
    row = {"status": "ok", "error": "", "axes": axis_values, "config": None}
    try:
        config = config_from_dict(doc)
        row["config"] = config_to_dict(config)
        row["run_id"] = run_id_for(config)
        record = integrate_motion(config)
        run_dir = Path(out_root) / f"run_{record.run_id}"
        write_run_artifacts(record, run_dir)

        mid = record.plateau_center_index()
        report = photon_momentum_report(record)
        write_json(photon_report_to_dict(report), run_dir / "photon_report.json")
        dx_disp, dx_abs = measure_displacements(record)

        sep = report.branch_separation
        if sep > 0.0:
            wrong = report.distance_to_abraham() if config.neglect_dxb \
                else report.distance_to_minkowski()
            discrimination = wrong / sep
        else:
            discrimination = 0.0

        row.update({
            "net_dispersive_impulse": float(record.dispersive_momentum[mid]),
            "final_kinetic": float(record.kinetic[-1]),
            "final_scattered": float(record.imp_scatt[-1]),
            "dx_dispersion": dx_disp,
            "dx_absorption": dx_abs,
            "measured_shift": report.measured_shift,
            "abraham_shift": report.abraham_shift,
            "minkowski_shift": report.minkowski_shift,
            "discrimination": discrimination,
            "max_beta": float(np.max(np.abs(record.vz))) / C_LIGHT,
            "n_warnings": len(record.notes),
        })
    except Exception as exc:  # per-run failures must not abort the sweep
        row["status"] = "failed"
        row["error"] = f"{type(exc).__name__}: {exc}"
        row.setdefault("run_id", "")
        for key in SUMMARY_OBSERVABLES:
            row.setdefault(key, float("nan"))
    return row


def _write_summary(out_root: Path, rows: list[dict], axis_paths: list[str],
                   scenario: str) -> None:
    header = ["run_id", "status", "error"] + axis_paths + list(SUMMARY_OBSERVABLES)
    lines = [",".join(header)]
    for row in rows:
        cells = [row.get("run_id", ""), row["status"], _csv_quote(row["error"])]
        cells += [_cell(row["axes"].get(p)) for p in axis_paths]
        cells += [_cell(row.get(k)) for k in SUMMARY_OBSERVABLES]
        lines.append(",".join(cells))
    (out_root / "summary.csv").write_text("\n".join(lines) + "\n", newline="\n")
    write_json({"scenario": scenario, "axes": axis_paths, "runs": rows},
               out_root / "summary.json")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _csv_quote(text: str) -> str:
    if any(c in text for c in ",\"\n"):
        return '"' + text.replace('"', '""') + '"'
    return text


def _deep_copy(doc):
    if isinstance(doc, dict):
        return {k: _deep_copy(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [_deep_copy(v) for v in doc]
    return doc


_PLOT_SCRIPT = '''\
#!/usr/bin/env python3
"""Plot the runs in this directory (written by pulsekick --emit-plot-script)."""
import csv
import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
for run_dir in sorted(root.glob("run_*")):
    rec = run_dir / "record.csv"
    if not rec.exists():
        continue
    with open(rec) as fh:
        rows = list(csv.DictReader(fh))
    t = [float(r["t"]) for r in rows]
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7, 8))
    axes[0].plot(t, [float(r["p_kinetic"]) for r in rows], label="kinetic")
    axes[0].plot(t, [float(r["p_canonical"]) for r in rows], label="canonical", ls="--")
    axes[0].set_ylabel("momentum (kg m/s)")
    axes[0].legend()
    axes[1].plot(t, [float(r["F_disp"]) for r in rows], label="dispersive")
    axes[1].plot(t, [float(r["F_scatt"]) for r in rows], label="scattering")
    axes[1].set_ylabel("force (N)")
    axes[1].legend()
    axes[2].plot(t, [float(r["z"]) for r in rows])
    axes[2].set_ylabel("z (m)")
    axes[2].set_xlabel("t (s)")
    fig.tight_layout()
    fig.savefig(run_dir / "run.png", dpi=150)
    plt.close(fig)
    print(f"wrote {run_dir / 'run.png'}")
'''
