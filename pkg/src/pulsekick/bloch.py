"""Optical Bloch dynamics of the driven two-level atom (RWA).

Convention (this is the normative contract of the module): with the
slowly varying coherence sigma = rho_eg * exp(+i*phi) written as
sigma = u - i*v and inversion w = rho_ee - rho_gg, the equations of motion
under a drive of instantaneous Rabi frequency Omega (hbar*Omega = -D*Env)
and detuning delta = omega - omega_at are

    du/dt = delta*v - gamma*u
    dv/dt = -delta*u - gamma*v - (Omega/2)*w
    dw/dt = 2*Omega*v - 2*gamma*(w + 1)

where gamma is half the upper-state population decay rate.  The unique
fixed point at constant Omega is

    (u, v) = (delta, gamma) * (Omega/2) / (delta^2 + gamma^2 + Omega^2/2)
    w      = -(delta^2 + gamma^2) / (delta^2 + gamma^2 + Omega^2/2)

and the dipole expectation value is <d.e> = 2*D*(u*cos(phi) - v*sin(phi)).
Any textbook convention differing by factors of 2 must be rescaled to this
one before use here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import BlochState, SimConfig


@dataclass(frozen=True)
class BlochTrajectory:
    """Time series of the internal state along one run."""

    times: np.ndarray               # strictly increasing (s)
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    instantaneous_rabi: np.ndarray  # Omega(t) at the atom position (rad/s)

    def __post_init__(self):
        n = len(self.times)
        if not all(len(a) == n for a in (self.u, self.v, self.w, self.instantaneous_rabi)):
            raise ValueError("trajectory arrays must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def state_at(self, index: int) -> BlochState:
        return BlochState(float(self.u[index]), float(self.v[index]), float(self.w[index]))


def steady_state_uv(delta, gamma, omega_rabi):
    """Steady-state dipole quadratures (u, v) at constant drive.

    Broadcasts over array arguments.  Requires gamma > 0 (the formula is
    total there); no other restrictions.
    """
    den = delta ** 2 + gamma ** 2 + 0.5 * omega_rabi ** 2
    half_omega = 0.5 * omega_rabi
    return delta * half_omega / den, gamma * half_omega / den


def steady_state_w(delta, gamma, omega_rabi):
    """Steady-state population inversion at constant drive."""
    den = delta ** 2 + gamma ** 2 + 0.5 * omega_rabi ** 2
    return -(delta ** 2 + gamma ** 2) / den


def steady_state_uvw_and_rabi_derivatives(delta, gamma, omega_rabi):
    """Steady state and its derivatives with respect to Omega.

    Returns (u, v, w, du/dOmega, dv/dOmega, dw/dOmega); used for the chain
    rule in adiabatic-mode forces where d(state)/dt = d(state)/dOmega * dOmega/dt.
    """
    sq = delta ** 2 + gamma ** 2
    den = sq + 0.5 * omega_rabi ** 2
    u = delta * 0.5 * omega_rabi / den
    v = gamma * 0.5 * omega_rabi / den
    w = -sq / den
    du = 0.5 * delta * (sq - 0.5 * omega_rabi ** 2) / den ** 2
    dv = 0.5 * gamma * (sq - 0.5 * omega_rabi ** 2) / den ** 2
    dw = sq * omega_rabi / den ** 2
    return u, v, w, du, dv, dw


def obe_rhs(u, v, w, delta, gamma, omega_rabi):
    """Time derivatives (du/dt, dv/dt, dw/dt); broadcasts over arrays."""
    du = delta * v - gamma * u
    dv = -delta * u - gamma * v - 0.5 * omega_rabi * w
    dw = 2.0 * omega_rabi * v - 2.0 * gamma * (w + 1.0)
    return du, dv, dw


def obe_rhs_state(state: BlochState, delta: float, gamma: float,
                  omega_rabi: float) -> BlochState:
    """obe_rhs on a BlochState, returned as a BlochState of rates."""
    du, dv, dw = obe_rhs(state.u, state.v, state.w, delta, gamma, omega_rabi)
    return BlochState(du, dv, dw)


def integrate_obe(config: SimConfig) -> BlochTrajectory:
    """Integrate the optical Bloch equations along the pulse.

    Runs the coupled atom + field integration (the instantaneous Rabi
    frequency is sampled at the atom's moving position) and projects out
    the internal-state trajectory.  Requires fidelity "full-obe".
    """
    if config.fidelity != "full-obe":
        raise ValueError(f'integrate_obe requires fidelity "full-obe", got {config.fidelity!r}')
    from . import dynamics
    record = dynamics.integrate_motion(config)
    return _project(record)


def adiabatic_states(config: SimConfig) -> BlochTrajectory:
    """Steady state evaluated at the instantaneous Rabi frequency.

    A pure pointwise map of Omega(t): no history dependence.  Requires
    fidelity "adiabatic".
    """
    if config.fidelity != "adiabatic":
        raise ValueError(f'adiabatic_states requires fidelity "adiabatic", got {config.fidelity!r}')
    from . import dynamics
    record = dynamics.integrate_motion(config)
    return _project(record)


def _project(record) -> BlochTrajectory:
    return BlochTrajectory(
        times=record.times,
        u=record.u,
        v=record.v,
        w=record.w,
        instantaneous_rabi=record.rabi,
    )
