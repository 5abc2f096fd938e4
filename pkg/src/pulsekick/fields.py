"""Field evaluation at a point: carrier, envelope, gradients.

The electric field is E = Env(phi) * cos(phi) * e_hat with retarded phase
phi = omega*t - k*z, and B = (z_hat x E)/c.  The envelope depends on space
and time only through phi (stretched by the group-velocity factor), so its
space and time derivatives always satisfy d/dz = -(k/omega) * d/dt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .types import PulseField, SLOW_ATOM_BETA_MAX, Z_HAT


@dataclass(frozen=True)
class FieldSample:
    """Full field data at one spacetime point."""

    E_vec: np.ndarray                 # electric field (V/m), 3-vector
    B_vec: np.ndarray                 # magnetic flux density (T), 3-vector
    envelope_value: float             # Env (V/m)
    envelope_space_gradient: float    # dEnv/dz (V/m^2)
    envelope_time_derivative: float   # dEnv/dt at fixed z (V/(m s))
    phase: float                      # omega*t - k*z (rad)


def envelope_local(field: PulseField, t, z):
    """Envelope value and partial derivatives at (t, z); array-friendly.

    Returns (value, dval_dt, dval_dz, phase).  The group-velocity stretch g
    enters through the envelope argument xi = (t - z/c)/g; the carrier
    phase is unaffected.
    """
    g = field.group_velocity_factor
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    xi = (t - z / C_LIGHT) / g
    value = field.peak_E0 * field.envelope.unit_value(xi)
    slope = field.peak_E0 * field.envelope.unit_slope(xi)   # d/d xi
    dval_dt = slope / g
    dval_dz = -slope / (g * C_LIGHT)
    phase = field.omega * t - field.k * z
    return value, dval_dt, dval_dz, phase


def sample_field(field: PulseField, t: float, z: float) -> FieldSample:
    """Sample E, B, envelope and envelope derivatives at (t, z)."""
    value, dval_dt, dval_dz, phase = envelope_local(field, t, z)
    e_vec = value * np.cos(phase) * field.pol
    b_vec = np.cross(Z_HAT, e_vec) / C_LIGHT
    return FieldSample(
        E_vec=e_vec,
        B_vec=b_vec,
        envelope_value=float(value),
        envelope_space_gradient=float(dval_dz),
        envelope_time_derivative=float(dval_dt),
        phase=float(phase),
    )


def envelope_at_atom(field: PulseField, trajectory_z, t, trajectory_vz=None):
    """Envelope and its total time derivative on the atom's worldline.

    Parameters
    ----------
    trajectory_z : callable t -> z (m)
    t : float or array of times (s)
    trajectory_vz : optional callable t -> dz/dt (m/s); estimated by a
        central difference of ``trajectory_z`` when omitted.

    Returns (value, d(value)/dt along the worldline).  Rejects superluminal
    trajectories; velocities above SLOW_ATOM_BETA_MAX * c are outside the
    slow-atom treatment and raise a warning-level note via the caller's
    regime checks (this function only enforces v < c).
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(trajectory_z(t), dtype=float)
    if trajectory_vz is not None:
        vz = np.asarray(trajectory_vz(t), dtype=float)
    else:
        h = _derivative_step(field, t)
        vz = (np.asarray(trajectory_z(t + h)) - np.asarray(trajectory_z(t - h))) / (2.0 * h)
    if np.any(np.abs(vz) >= C_LIGHT):
        raise ValueError("superluminal trajectory: |dz/dt| >= c")
    value, dval_dt, dval_dz, _ = envelope_local(field, t, z)
    return value, dval_dt + vz * dval_dz


def atom_velocity_regime_ok(vz) -> bool:
    """True when |v|/c stays within the slow-atom validity bound."""
    return bool(np.max(np.abs(vz)) / C_LIGHT < SLOW_ATOM_BETA_MAX)


def svea_quality(field: PulseField, t: float, z: float,
                 n_samples: int = 256) -> tuple[float, float]:
    """Slowly-varying-envelope quality at a point.

    Returns (|carrier-cycle average of E.e|, envelope change over one
    cycle).  A clean separation of carrier and envelope means the first is
    bounded by the second; their ratio approaching 1 signals that cycle
    averaging is breaking down.
    """
    period = 2.0 * np.pi / field.omega
    ts = t + (np.arange(n_samples) / n_samples - 0.5) * period
    value, _, _, phase = envelope_local(field, ts, np.full(n_samples, z))
    cycle_avg = abs(float(np.mean(value * np.cos(phase))))
    env_a, _, _, _ = envelope_local(field, t - 0.5 * period, z)
    env_b, _, _, _ = envelope_local(field, t + 0.5 * period, z)
    return cycle_avg, abs(float(env_b) - float(env_a))


def _derivative_step(field: PulseField, t) -> float:
    scale = max(field.transit_duration, float(np.max(np.abs(t))) if np.size(t) else 0.0, 1.0 / field.omega)
    return 1e-7 * scale
