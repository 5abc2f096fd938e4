"""CSV and JSON exports with fixed column orders.

CSV dialect: comma separator, ``.`` decimal point, one header row, LF line
endings.  Floats are written with shortest round-trip formatting, so
identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .config import config_to_dict

TRAJECTORY_COLUMNS = ("t", "z", "v", "p_kinetic", "p_canonical",
                      "F_total", "F_scatt", "F_disp")
FORCES_COLUMNS = ("t", "F_total", "F_grad", "F_scatt", "F_dxb_rate", "form_tag")
BLOCH_COLUMNS = ("t", "u", "v", "w", "Omega")


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_trajectory_csv(record, path) -> None:
    """Center-of-mass trajectory and momentum columns of one run."""
    f_disp = record.f_grad + record.f_dxb_rate
    rows = (
        (_fmt(record.times[i]), _fmt(record.z[i]), _fmt(record.vz[i]),
         _fmt(record.kinetic[i]), _fmt(record.canonical[i]),
         _fmt(record.f_total[i]), _fmt(record.f_scatt[i]), _fmt(f_disp[i]))
        for i in range(len(record.times))
    )
    _write_csv(path, TRAJECTORY_COLUMNS, rows)


def write_forces_csv(record, path) -> None:
    """Force decomposition trace; oracle columns when the run carried them."""
    if record.oracle_total is not None:
        tag = "oscillatory"
        total, grad, rate = record.oracle_total, record.oracle_f1, record.oracle_f2
        scatt = [0.0] * len(record.times)
    else:
        tag = record.form
        total, grad, rate, scatt = (record.f_total, record.f_grad,
                                    record.f_dxb_rate, record.f_scatt)
    rows = (
        (_fmt(record.times[i]), _fmt(total[i]), _fmt(grad[i]),
         _fmt(scatt[i]), _fmt(rate[i]), tag)
        for i in range(len(record.times))
    )
    _write_csv(path, FORCES_COLUMNS, rows)


def write_bloch_csv(traj, path) -> None:
    """Internal-state trajectory: t, u, v, w, Omega."""
    rows = (
        (_fmt(traj.times[i]), _fmt(traj.u[i]), _fmt(traj.v[i]),
         _fmt(traj.w[i]), _fmt(traj.instantaneous_rabi[i]))
        for i in range(len(traj.times))
    )
    _write_csv(path, BLOCH_COLUMNS, rows)


def bloch_to_dict(traj) -> dict:
    return {
        "columns": list(BLOCH_COLUMNS),
        "t": list(map(float, traj.times)),
        "u": list(map(float, traj.u)),
        "v": list(map(float, traj.v)),
        "w": list(map(float, traj.w)),
        "Omega": list(map(float, traj.instantaneous_rabi)),
    }


def ledger_to_dict(record) -> dict:
    """Momentum-ledger time series plus run metadata."""
    from .fields import svea_quality
    t_rise_mid = record.window[0] + 0.5 * record.config.field.group_velocity_factor \
        * record.config.field.envelope.rise_time
    cycle_avg, env_change = svea_quality(record.config.field, t_rise_mid, 0.0)
    return {
        "run_id": record.run_id,
        "neglect_dxb": record.config.neglect_dxb,
        "fidelity": record.config.fidelity,
        "p0_field": record.p0_field,
        "warnings": [str(n) for n in record.notes],
        "window": list(record.window),
        "svea_cycle_average": cycle_avg,
        "svea_envelope_change_per_cycle": env_change,
        "t": list(map(float, record.times)),
        "kinetic_atom": list(map(float, record.kinetic)),
        "dxb": list(map(float, record.dxb)),
        "canonical_atom": list(map(float, record.canonical)),
        "field_abraham_depletion": list(map(float, record.field_abraham_depletion)),
        "field_minkowski_depletion": list(map(float, record.field_minkowski_depletion)),
        "scattered_momentum": list(map(float, record.imp_scatt)),
        "dispersive_momentum": list(map(float, record.dispersive_momentum)),
    }


def photon_report_to_dict(report) -> dict:
    return {
        "photon_count_N": report.photon_count_N,
        "p0": report.p0,
        "chi_prime": report.chi_prime,
        "n": report.n,
        "p_abraham_per_photon": report.p_abraham_per_photon,
        "p_minkowski_per_photon": report.p_minkowski_per_photon,
        "measured_p_per_photon": report.measured_p_per_photon,
        "measured_shift": report.measured_shift,
        "abraham_shift": report.abraham_shift,
        "minkowski_shift": report.minkowski_shift,
        "branch_separation": report.branch_separation,
        "dispersive_impulse": report.dispersive_impulse,
        "neglect_dxb": report.neglect_dxb,
        "warnings": list(report.warnings),
    }


def write_json(obj, path) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_run_artifacts(record, out_dir) -> Path:
    """Write the standard per-run artifact set; returns the directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    from .config import serialize_config
    (out / "config.toml").write_text(serialize_config(record.config), newline="\n")
    write_json(config_to_dict(record.config), out / "config.json")
    write_trajectory_csv(record, out / "record.csv")
    write_forces_csv(record, out / "forces.csv")
    write_json(ledger_to_dict(record), out / "ledger.json")
    return out
