"""Coupled integration of the atom's internal state and center-of-mass motion.

One state vector carries everything with shared adaptive stepping: the
Bloch components (full-obe), position and velocity, and running impulse
integrals for each force part (so the momentum ledger is built at solver
accuracy rather than by post-hoc quadrature).  The atom's position feeds
the envelope, the internal state feeds the force, and the force feeds the
motion.

Fidelity modes
--------------
adiabatic
    (u, v, w) are the steady-state response to the instantaneous Rabi
    frequency; their time derivatives come from the chain rule.
full-obe
    (u, v, w) are integrated from the optical Bloch equations.
oscillatory-oracle
    A full-obe run, plus carrier-resolved Lorentz-force columns sampled on
    the dense solution and cycle-averaged numerically.  The motion columns
    are those of the averaged-force integration; the oracle exists to
    validate them, and its back-reaction on the trajectory is far below
    any tolerance used here.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import solve_ivp

from .bloch import obe_rhs, steady_state_uvw_and_rabi_derivatives
from .config import serialize_config
from .constants import C_LIGHT, EPSILON_0, HBAR
from .fields import envelope_local
from .forces import (dipole_expectation, dipole_expectation_rate,
                     photon_momentum, scattering_rate)
from .types import RegimeNote, SimConfig, SLOW_ATOM_BETA_MAX, regime_notes

ORACLE_SAMPLES = 64

# record-grid points per envelope segment
_GRID = {"pre": 17, "rise": 401, "plateau": 801, "fall": 401, "post": 65}


def _oracle_quadrature(omega: float) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature offsets and weights for the carrier cycle average.

    Gauss-Legendre nodes over two one-period windows centered at -T/8 and
    +T/8.  Gauss quadrature integrates the analytic integrand (carrier
    harmonics times slowly drifting coefficients) to spectral accuracy;
    pairing the windows a quarter of the 2*phase oscillation apart cancels
    that harmonic's first drift moment, whose coefficient has a large time
    derivative on the pulse edges and would otherwise bias the average at
    the same order as the dispersive edge force.
    """
    period = 2.0 * np.pi / omega
    nodes, wts = np.polynomial.legendre.leggauss(ORACLE_SAMPLES)
    base = 0.5 * period * nodes
    offsets = np.concatenate([base - period / 8.0, base + period / 8.0])
    weights = np.concatenate([wts, wts])
    return offsets, weights / weights.sum()


class IntegrationError(RuntimeError):
    """The adaptive integrator failed to meet tolerance."""

    def __init__(self, message: str, t_fail: float):
        super().__init__(f"{message} (at t = {t_fail:.6g} s)")
        self.t_fail = t_fail


class RegimeWarning(UserWarning):
    """A run left the validated parameter regime."""


@dataclass(frozen=True)
class TrajectoryRecord:
    """Complete time series of one run: state, forces, momentum ledger."""

    config: SimConfig
    run_id: str
    times: np.ndarray
    z: np.ndarray
    vz: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    rabi: np.ndarray              # Omega(t) at the atom (rad/s)
    envelope: np.ndarray          # Env at the atom (V/m)
    f_grad: np.ndarray            # D*u*dEnv/dz (N)
    f_scatt: np.ndarray           # -D*v*k*Env (N)
    f_dxb_rate: np.ndarray        # d/dt of the cycle-averaged d x B (N)
    f_total: np.ndarray
    imp_grad: np.ndarray          # cumulative impulse integrals (kg m/s)
    imp_dxb: np.ndarray
    imp_scatt: np.ndarray
    p0_field: float               # initial pulse momentum (kg m/s)
    kinetic: np.ndarray           # M * vz
    dxb: np.ndarray               # cycle-averaged d x B at the atom
    canonical: np.ndarray         # kinetic - dxb
    # field momenta are stored as depletions relative to p0_field: the
    # absolute pulse momentum exceeds every transfer by ~chi' ~ 1e-24, so
    # only the change is representable in double precision
    field_abraham_depletion: np.ndarray
    field_minkowski_depletion: np.ndarray
    window: tuple[float, float]   # envelope support at the atom (s)
    notes: tuple[RegimeNote, ...]
    form: str                     # force split used for propagation
    oracle_total: np.ndarray | None = None
    oracle_f1: np.ndarray | None = None
    oracle_f2: np.ndarray | None = None
    _dense: object = dc_field(default=None, repr=False, compare=False)

    @property
    def scattered_momentum(self) -> np.ndarray:
        """Cumulative momentum removed from the beam by scattering."""
        return self.imp_scatt

    @property
    def field_abraham(self) -> np.ndarray:
        """Absolute Abraham field momentum (flat at p0 to double rounding)."""
        return self.p0_field + self.field_abraham_depletion

    @property
    def field_minkowski(self) -> np.ndarray:
        return self.p0_field + self.field_minkowski_depletion

    @property
    def dispersive_momentum(self) -> np.ndarray:
        """Momentum held by the atom from the dispersive (gradient + d x B) force."""
        return self.imp_grad + self.imp_dxb

    def index_at(self, t: float) -> int:
        return int(np.argmin(np.abs(self.times - t)))

    def plateau_center_index(self) -> int:
        return self.index_at(0.5 * (self.window[0] + self.window[1]))


class _DenseSolution:
    """Stitched dense output of the piecewise integration."""

    def __init__(self, sols, boundaries):
        self._sols = sols
        self._bounds = np.asarray(boundaries)  # inner boundaries, len = len(sols)-1
        self.t_min = sols[0].t_min
        self.t_max = sols[-1].t_max

    def __call__(self, t):
        t = np.clip(np.asarray(t, dtype=float), self.t_min, self.t_max)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        idx = np.searchsorted(self._bounds, t, side="right")
        out = np.empty((self._sols[0](self.t_min).shape[0], len(t)))
        for i, sol in enumerate(self._sols):
            mask = idx == i
            if mask.any():
                out[:, mask] = sol(t[mask])
        return out[:, 0] if scalar else out


def integrate_motion(config: SimConfig) -> TrajectoryRecord:
    """Run one coupled simulation and return the full record."""
    config.validate()
    notes = list(regime_notes(config))
    atom, fld = config.atom, config.field
    delta = fld.omega - atom.omega_at
    k = fld.k
    dip = atom.dipole
    use_obe = config.fidelity in ("full-obe", "oscillatory-oracle")

    p_scale = _momentum_scale(config)
    atol = _atol_vector(config, p_scale, use_obe)

    def force_parts(t, z, vz, u, v, du_dt):
        env, denv_dt, denv_dz, _ = _env_scalar(fld, t, z)
        env_rate = denv_dt + vz * denv_dz
        f_grad = dip * u * denv_dz
        f_scatt = -dip * v * k * env
        if config.neglect_dxb:
            f_dxb = 0.0
        else:
            f_dxb = dip * (du_dt * env + u * env_rate) / C_LIGHT
        return f_grad, f_scatt, f_dxb, env, env_rate

    if use_obe:
        def rhs(t, y):
            u, v, w, z, vz = y[0], y[1], y[2], y[3], y[4]
            env, denv_dt, denv_dz, _ = _env_scalar(fld, t, z)
            omega_r = -dip * env / HBAR
            du, dv, dw = obe_rhs(u, v, w, delta, atom.gamma, omega_r)
            f_grad = dip * u * denv_dz
            f_scatt = -dip * v * k * env
            f_dxb = 0.0 if config.neglect_dxb else \
                dip * (du * env + u * (denv_dt + vz * denv_dz)) / C_LIGHT
            f_total = f_grad + f_scatt + f_dxb
            return (du, dv, dw, vz, f_total / atom.mass, f_grad, f_dxb, f_scatt)
        y0 = np.array([0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    else:
        def rhs(t, y):
            z, vz = y[0], y[1]
            env, denv_dt, denv_dz, _ = _env_scalar(fld, t, z)
            omega_r = -dip * env / HBAR
            u, v, _w, du_dO, _dv_dO, _dw_dO = \
                steady_state_uvw_and_rabi_derivatives(delta, atom.gamma, omega_r)
            env_rate = denv_dt + vz * denv_dz
            du = du_dO * (-dip * env_rate / HBAR)
            f_grad = dip * u * denv_dz
            f_scatt = -dip * v * k * env
            f_dxb = 0.0 if config.neglect_dxb else \
                dip * (du * env + u * env_rate) / C_LIGHT
            f_total = f_grad + f_scatt + f_dxb
            return (vz, f_total / atom.mass, f_grad, f_dxb, f_scatt)
        y0 = np.zeros(5)

    segments, labels = _segments(config)
    sols = []
    y = y0
    for (t0, t1), label in zip(segments, labels):
        max_step = (t1 - t0) / 8.0
        sol = solve_ivp(rhs, (t0, t1), y, method="DOP853",
                        rtol=config.rtol, atol=atol,
                        dense_output=True, max_step=max_step)
        if not sol.success:
            raise IntegrationError(f"integrator failed in {label} segment: {sol.message}",
                                   float(sol.t[-1]))
        sols.append(sol.sol)
        y = sol.y[:, -1]

    dense = _DenseSolution(sols, [seg[1] for seg in segments[:-1]])
    times = _record_times(segments, labels)
    Y = dense(times)

    if use_obe:
        u_arr, v_arr, w_arr = Y[0], Y[1], Y[2]
        z_arr, vz_arr = Y[3], Y[4]
        ig, ix, isc = Y[5], Y[6], Y[7]
    else:
        z_arr, vz_arr = Y[0], Y[1]
        ig, ix, isc = Y[2], Y[3], Y[4]

    env_arr, denv_dt_arr, denv_dz_arr, _ = envelope_local(fld, times, z_arr)
    rabi_arr = -dip * env_arr / HBAR
    if not use_obe:
        u_arr, v_arr, w_arr, du_dO, _dv, _dw = \
            steady_state_uvw_and_rabi_derivatives(delta, atom.gamma, rabi_arr)
        env_rate_arr = denv_dt_arr + vz_arr * denv_dz_arr
        du_arr = du_dO * (-dip * env_rate_arr / HBAR)
    else:
        du_arr, _dv2, _dw2 = obe_rhs(u_arr, v_arr, w_arr, delta, atom.gamma, rabi_arr)
        env_rate_arr = denv_dt_arr + vz_arr * denv_dz_arr

    f_grad_arr = dip * u_arr * denv_dz_arr
    f_scatt_arr = -dip * v_arr * k * env_arr
    if config.neglect_dxb:
        f_dxb_arr = np.zeros_like(f_grad_arr)
    else:
        f_dxb_arr = dip * (du_arr * env_arr + u_arr * env_rate_arr) / C_LIGHT
    f_total_arr = f_grad_arr + f_scatt_arr + f_dxb_arr

    beta = float(np.max(np.abs(vz_arr))) / C_LIGHT
    if beta >= SLOW_ATOM_BETA_MAX:
        notes.append(RegimeNote(
            "slow-atom",
            f"max |v|/c = {beta:.3g} exceeds {SLOW_ATOM_BETA_MAX:g}; the slow-atom force "
            "expressions are first-order in v/c"))
        warnings.warn(notes[-1].message, RegimeWarning, stacklevel=2)

    p0_field = 0.5 * EPSILON_0 * fld.peak_E0 ** 2 * fld.resolved_mode_volume() / C_LIGHT
    kinetic = atom.mass * vz_arr
    dxb_arr = dip * u_arr * env_arr / C_LIGHT
    abr_depletion = -(ig + ix) - isc
    record = TrajectoryRecord(
        config=config,
        run_id=run_id_for(config),
        times=times, z=z_arr, vz=vz_arr,
        u=u_arr, v=v_arr, w=w_arr,
        rabi=rabi_arr, envelope=env_arr,
        f_grad=f_grad_arr, f_scatt=f_scatt_arr, f_dxb_rate=f_dxb_arr,
        f_total=f_total_arr,
        imp_grad=ig, imp_dxb=ix, imp_scatt=isc,
        p0_field=p0_field,
        kinetic=kinetic, dxb=dxb_arr, canonical=kinetic - dxb_arr,
        field_abraham_depletion=abr_depletion,
        field_minkowski_depletion=abr_depletion + dxb_arr,
        window=(0.0, fld.transit_duration),
        notes=tuple(notes),
        form="gordon",
        _dense=dense,
    )
    if config.fidelity == "oscillatory-oracle":
        tot, f1, f2 = oracle_force_trace(record, times)
        record = TrajectoryRecord(**{**record.__dict__, "oracle_total": tot,
                                     "oracle_f1": f1, "oracle_f2": f2})
    return record


def oracle_force_trace(record: TrajectoryRecord, times):
    """Carrier-resolved Lorentz force, cycle-averaged at the given times.

    Returns (total, f1, f2) where f1 is the average of the instantaneous
    d.(dE/dz) term and f2 of the d/dt(d x B) term; total = f1 + f2.  Works
    on any record produced with an OBE-resolved internal state.
    """
    if record._dense is None or record.config.fidelity == "adiabatic":
        raise ValueError("oracle trace needs the dense solution of an OBE-mode run")
    config = record.config
    atom, fld = config.atom, config.field
    delta = fld.omega - atom.omega_at
    dip, k = atom.dipole, fld.k

    times = np.atleast_1d(np.asarray(times, dtype=float))
    offsets, weights = _oracle_quadrature(fld.omega)
    tt = (times[:, None] + offsets[None, :]).ravel()

    Y = record._dense(tt)
    u, v, w, z, vz = Y[0], Y[1], Y[2], Y[3], Y[4]
    env, denv_dt, denv_dz, phase = envelope_local(fld, tt, z)
    omega_r = -dip * env / HBAR
    du, dv, _dw = obe_rhs(u, v, w, delta, atom.gamma, omega_r)
    phase_rate = fld.omega - k * vz

    d_val = dipole_expectation(u, v, phase, dip)
    d_rate = dipole_expectation_rate(u, v, du, dv, phase, phase_rate, dip)
    carrier = np.cos(phase)
    f_inst = d_rate * env * carrier / C_LIGHT
    f1_inst = d_val * (denv_dz * carrier + k * env * np.sin(phase))

    shape = (len(times), 2 * ORACLE_SAMPLES)
    total = f_inst.reshape(shape) @ weights
    f1 = f1_inst.reshape(shape) @ weights
    return total, f1, total - f1


def oracle_dxb_average(record: TrajectoryRecord, t: float) -> float:
    """Cycle-averaged (d x B)_z at the atom from the carrier-resolved dipole."""
    if record._dense is None:
        raise ValueError("record lacks a dense solution")
    config = record.config
    fld, dip = config.field, config.atom.dipole
    offsets, weights = _oracle_quadrature(fld.omega)
    tt = t + offsets
    Y = record._dense(tt)
    u, v, z = Y[0], Y[1], Y[3]
    env, _, _, phase = envelope_local(fld, tt, z)
    d_val = dipole_expectation(u, v, phase, dip)
    return float((d_val * env * np.cos(phase)) @ weights / C_LIGHT)


def measure_displacements(record: TrajectoryRecord) -> tuple[float, float]:
    """Split the in-pulse displacement into dispersive and absorptive parts.

    dx_dispersion integrates the held dispersive momentum (cumulative
    gradient + d x B impulse) over the envelope transit window and divides
    by the mass; dx_absorption does the same with the cumulative scattered
    momentum.  For an atom starting at rest the two parts sum to the exact
    displacement across the window.
    """
    t0, t1 = record.window
    if record.times[0] > t0 or record.times[-1] < t1:
        raise ValueError("record does not cover a complete pulse passage")
    mask = (record.times >= t0) & (record.times <= t1)
    ts = record.times[mask]
    m = record.config.atom.mass
    dx_disp = float(np.trapezoid(record.dispersive_momentum[mask], ts)) / m
    dx_abs = float(np.trapezoid(record.imp_scatt[mask], ts)) / m
    return dx_disp, dx_abs


def displacement_ratio(delta: float, omega: float, gamma: float, tau: float) -> float:
    """Predicted dispersion-to-absorption displacement ratio (delta/omega)/(gamma*tau).

    Valid for pulses long compared with the atomic response; gamma*tau < 1
    is rejected, gamma*tau < 10 warned about.
    """
    gt = gamma * tau
    if gt < 1.0:
        raise ValueError(f"gamma*tau = {gt:.3g} < 1: outside the slow-pulse treatment")
    if gt < 10.0:
        warnings.warn(f"gamma*tau = {gt:.3g} < 10: displacement ratio formula is marginal",
                      RegimeWarning, stacklevel=2)
    return (delta / omega) / gt


def measured_displacement_ratio(record: TrajectoryRecord) -> float:
    dx_disp, dx_abs = measure_displacements(record)
    return dx_disp / dx_abs


def run_id_for(config: SimConfig) -> str:
    """Stable short identifier of a resolved configuration."""
    return hashlib.sha256(serialize_config(config).encode()).hexdigest()[:12]


# -- internals ----------------------------------------------------------------

def _env_scalar(fld, t, z):
    """Scalar fast path of fields.envelope_local for the ODE right-hand side."""
    g = fld.group_velocity_factor
    xi = (t - z / C_LIGHT) / g
    val, slope = _unit_scalar(fld.envelope, xi)
    e0 = fld.peak_E0
    return e0 * val, e0 * slope / g, -e0 * slope / (g * C_LIGHT), fld.omega * t - fld.k * z


def _unit_scalar(env, xi):
    """(value, d/dxi) of the unit envelope at scalar xi, pure-python math."""
    r = env.rise_time
    t2 = r + env.plateau_time
    t3 = t2 + env.fall_time
    if xi <= 0.0 or xi >= t3:
        return 0.0, 0.0
    if xi < r:
        val, slope = _ramp_scalar(env.shape, xi / r)
        return val, slope / r
    if xi <= t2:
        return 1.0, 0.0
    val, slope = _ramp_scalar(env.shape, (t3 - xi) / env.fall_time)
    return val, -slope / env.fall_time


def _ramp_scalar(shape, s):
    if shape == "raised_cosine":
        return 0.5 * (1.0 - math.cos(math.pi * s)), 0.5 * math.pi * math.sin(math.pi * s)
    from .envelopes import TANH_STEEPNESS as a
    t0 = math.tanh(a)
    return (0.5 * (math.tanh(a * (2.0 * s - 1.0)) + t0) / t0,
            a / math.cosh(a * (2.0 * s - 1.0)) ** 2 / t0)


def _segments(config: SimConfig):
    """Piecewise integration spans aligned with the envelope corners."""
    b0, b1, b2, b3 = config.field.transit_breakpoints()
    pad = max(2.0 / config.atom.gamma, 0.02 * b3)
    spans, labels = [(-pad, b0)], ["pre"]
    for t0, t1, label in ((b0, b1, "rise"), (b1, b2, "plateau"), (b2, b3, "fall")):
        if t1 > t0:
            spans.append((t0, t1))
            labels.append(label)
    spans.append((b3, b3 + pad))
    labels.append("post")
    return spans, labels


def _record_times(segments, labels):
    parts = [np.linspace(t0, t1, _GRID[label]) for (t0, t1), label in zip(segments, labels)]
    return np.unique(np.concatenate(parts))


def _momentum_scale(config: SimConfig) -> float:
    """Characteristic impulse magnitude, for tolerance scaling."""
    atom, fld = config.atom, config.field
    det = config.detuning
    gamma = atom.gamma
    p0 = photon_momentum(fld.omega)
    x = 0.5 * det.rabi_peak ** 2 / (det.delta ** 2 + gamma ** 2)
    p_grad = abs(HBAR * det.delta / (2.0 * C_LIGHT)) * math.log1p(x)
    p_scatt = p0 * scattering_rate(det.delta, gamma, det.rabi_peak) * config.pulse_duration_tau
    return max(p_grad, p_scatt, 1e-3 * p0)


def _atol_vector(config: SimConfig, p_scale: float, use_obe: bool) -> np.ndarray:
    m = config.atom.mass
    tau = config.pulse_duration_tau
    a_imp = p_scale * config.atol
    a_vz = a_imp / m
    a_z = a_vz * tau
    kinematic = [a_z, a_vz, a_imp, a_imp, a_imp]
    if use_obe:
        return np.array([config.atol] * 3 + kinematic)
    return np.array(kinematic)
