"""Core domain types and unit conventions.

Everything is SI.  All types are frozen plain data: safe to share between
sweep workers without synchronization.

Sign conventions used throughout the package:

* detuning  delta = omega - omega_at  (drive minus transition, rad/s)
* Rabi frequency  hbar * Omega = -D * E  (so Omega carries the opposite
  sign of the product of the dipole matrix element and the field)
* the pulse propagates along +z; polarization is transverse to z.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .constants import C_LIGHT, HBAR
from .envelopes import Envelope

FIDELITY_MODES = ("adiabatic", "full-obe", "oscillatory-oracle")

Z_HAT = np.array([0.0, 0.0, 1.0])

ADIABATIC_GAMMA_TAU_R = 10.0   # gamma * rise_time below this is flagged
LINEAR_RESPONSE_FRACTION = 0.1  # Omega0^2 < 0.1*(delta^2+gamma^2) for linear response
ORACLE_OMEGA_GAMMA_MIN = 1.0e3  # carrier must beat atomic rates by this factor
SLOW_ATOM_BETA_MAX = 1.0e-3     # |v|/c bound of the slow-atom treatment


class ConfigError(ValueError):
    """Invalid configuration; message lists every violated field path."""


@dataclass(frozen=True)
class RegimeNote:
    """A non-fatal validity warning, recorded in run metadata."""

    name: str
    message: str

    def __str__(self) -> str:
        return f"[{self.name}] {self.message}"


@dataclass(frozen=True)
class AtomParams:
    """The physical two-level atom.

    gamma is HALF the spontaneous decay rate of the upper-state population:
    coherences relax at gamma, populations at 2*gamma.
    """

    omega_at: float                 # transition angular frequency (rad/s)
    gamma: float                    # half the upper-state decay rate (rad/s)
    dipole: float                   # off-diagonal dipole matrix element (C m), real, signed
    mass: float                     # atom mass (kg)
    mag_dipole: tuple[float, float, float] = (0.0, 0.0, 0.0)  # magnetic dipole (J/T)

    def validate(self, path: str = "atom") -> list[str]:
        errors = []
        if not self.gamma > 0.0:
            errors.append(f"{path}.gamma: must be > 0 (got {self.gamma!r})")
        if not self.mass > 0.0:
            errors.append(f"{path}.mass: must be > 0 (got {self.mass!r})")
        if not self.omega_at > 0.0:
            errors.append(f"{path}.omega_at: must be > 0 (got {self.omega_at!r})")
        if not np.isfinite(self.dipole):
            errors.append(f"{path}.dipole: must be a finite real number")
        return errors


@dataclass(frozen=True)
class PulseField:
    """Plane-wave pulse traveling along +z with a smooth envelope.

    The envelope is a function of the retarded phase phi = omega*t - k*z
    only; ``group_velocity_factor`` g >= 1 stretches that dependence
    (argument (t - z/c)/g), multiplying the transit time at a fixed point
    by g at fixed amplitude.  Carrier k is always omega/c.
    """

    omega: float                         # carrier angular frequency (rad/s)
    peak_E0: float                       # peak envelope amplitude (V/m), >= 0
    envelope: Envelope
    polarization: tuple[float, float, float] = (1.0, 0.0, 0.0)
    mode_volume: float | None = None     # quantization volume (m^3); None -> default
    group_velocity_factor: float = 1.0   # c / v_g >= 1
    mode_volume_defaulted: bool = field(default=False, compare=False)

    @property
    def k(self) -> float:
        """Vacuum wavevector (rad/m); always omega/c."""
        return self.omega / C_LIGHT

    @property
    def pol(self) -> np.ndarray:
        return np.array(self.polarization)

    @property
    def transit_duration(self) -> float:
        """Envelope support length at a fixed z (s), stretch included."""
        return self.group_velocity_factor * self.envelope.duration

    def transit_breakpoints(self) -> tuple[float, float, float, float]:
        """Envelope corners at z = 0 in lab time (s)."""
        g = self.group_velocity_factor
        return tuple(g * b for b in self.envelope.breakpoints())

    def resolved_mode_volume(self) -> float:
        """Mode volume, falling back to (pulse length) x (1 m^2)."""
        if self.mode_volume is not None:
            return self.mode_volume
        return C_LIGHT * self.transit_duration * 1.0

    def validate(self, path: str = "field") -> list[str]:
        errors = []
        if not self.omega > 0.0:
            errors.append(f"{path}.omega: must be > 0 (got {self.omega!r})")
        if not self.peak_E0 >= 0.0:
            errors.append(f"{path}.peak_E0: must be >= 0 (got {self.peak_E0!r})")
        pol = np.asarray(self.polarization, dtype=float)
        if abs(np.linalg.norm(pol) - 1.0) > 1e-9:
            errors.append(f"{path}.polarization: must be a unit vector (|e| = {np.linalg.norm(pol)!r})")
        if abs(pol[2]) > 1e-12:
            errors.append(f"{path}.polarization: must be transverse to z (e_z = {pol[2]!r})")
        if not self.group_velocity_factor >= 1.0:
            errors.append(f"{path}.group_velocity_factor: must be >= 1 (got {self.group_velocity_factor!r})")
        if self.mode_volume is not None and not self.mode_volume > 0.0:
            errors.append(f"{path}.mode_volume: must be > 0 (got {self.mode_volume!r})")
        return errors


@dataclass(frozen=True)
class BlochState:
    """Dipole quadratures and inversion at one instant.

    u is in phase with the driving field, v in quadrature, w the population
    inversion (w = -1 is the ground state).  In this convention the Bloch
    ball is 4*(u^2 + v^2) + w^2 <= 1, so |u|, |v| <= 1/2 and |w| <= 1.
    """

    u: float
    v: float
    w: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    def ball_radius(self) -> float:
        """4(u^2+v^2)+w^2; <= 1 for any physical state."""
        return 4.0 * (self.u ** 2 + self.v ** 2) + self.w ** 2


GROUND_STATE = BlochState(0.0, 0.0, -1.0)


@dataclass(frozen=True)
class DetuningParams:
    """Detuning and the Rabi frequency at the peak field."""

    delta: float      # omega - omega_at (rad/s), signed
    rabi_peak: float  # Omega at the envelope peak (rad/s), hbar*Omega = -D*E0

    @classmethod
    def for_config(cls, config: "SimConfig") -> "DetuningParams":
        return cls(delta=config.field.omega - config.atom.omega_at,
                   rabi_peak=rabi_frequency(config.atom.dipole, config.field.peak_E0))


def rabi_frequency(dipole: float, e_field):
    """Instantaneous Rabi frequency -D*E/hbar (rad/s).

    The sign convention hbar*Omega = -D*E is kept exactly; callers must not
    fold the minus sign away.  Broadcasts over array-valued fields.
    """
    return -dipole * e_field / HBAR


@dataclass(frozen=True)
class SimConfig:
    """One fully validated simulation setup."""

    atom: AtomParams
    field: PulseField
    rtol: float = 1e-10
    atol: float = 1e-12
    fidelity: str = "full-obe"
    neglect_dxb: bool = False          # drop the d(d x B)/dt force term
    outputs: tuple[str, ...] = ("csv", "json")

    @property
    def pulse_duration_tau(self) -> float:
        """Full envelope transit time at the atom (s)."""
        return self.field.transit_duration

    @property
    def detuning(self) -> DetuningParams:
        return DetuningParams.for_config(self)

    def with_(self, **changes) -> "SimConfig":
        return replace(self, **changes)

    def validate(self) -> None:
        """Fail fast on invariant violations; regime warnings are separate."""
        errors = self.atom.validate() + self.field.validate()
        if not self.rtol > 0.0:
            errors.append(f"numerics.rtol: must be > 0 (got {self.rtol!r})")
        if not self.atol > 0.0:
            errors.append(f"numerics.atol: must be > 0 (got {self.atol!r})")
        if self.fidelity not in FIDELITY_MODES:
            errors.append(f"numerics.fidelity: must be one of {FIDELITY_MODES} (got {self.fidelity!r})")
        if not self.pulse_duration_tau > 0.0:
            errors.append("field.envelope: pulse duration must be > 0")
        if self.fidelity == "oscillatory-oracle" and \
                self.field.omega / self.atom.gamma < ORACLE_OMEGA_GAMMA_MIN:
            errors.append(
                "numerics.fidelity: oscillatory-oracle requires omega/gamma >= "
                f"{ORACLE_OMEGA_GAMMA_MIN:g} (got {self.field.omega / self.atom.gamma:g})")
        if errors:
            raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))


def regime_notes(config: SimConfig) -> list[RegimeNote]:
    """Non-fatal validity warnings for a config (recorded in outputs)."""
    notes: list[RegimeNote] = []
    atom, fld = config.atom, config.field
    g = fld.group_velocity_factor

    gtr = atom.gamma * g * min(fld.envelope.rise_time, fld.envelope.fall_time)
    if gtr < ADIABATIC_GAMMA_TAU_R:
        notes.append(RegimeNote(
            "adiabatic",
            f"gamma*ramp_time = {gtr:.3g} < {ADIABATIC_GAMMA_TAU_R:g}; the envelope is not slow "
            "compared with the atomic relaxation, steady-state (adiabatic) results are unreliable"))

    det = config.detuning
    if det.rabi_peak ** 2 >= LINEAR_RESPONSE_FRACTION * (det.delta ** 2 + atom.gamma ** 2):
        notes.append(RegimeNote(
            "linear-response",
            f"Omega0^2 = {det.rabi_peak ** 2:.3g} is not << delta^2+gamma^2 = "
            f"{det.delta ** 2 + atom.gamma ** 2:.3g}; refractive-index (linear response) "
            "identities hold only to leading order in the saturation parameter"))

    if fld.omega / atom.gamma < ORACLE_OMEGA_GAMMA_MIN:
        notes.append(RegimeNote(
            "carrier-separation",
            f"omega/gamma = {fld.omega / atom.gamma:.3g} < {ORACLE_OMEGA_GAMMA_MIN:g}; "
            "cycle averaging and the slowly-varying-envelope treatment degrade"))

    if fld.mode_volume is None:
        notes.append(RegimeNote(
            "mode-volume-default",
            f"mode_volume not set; defaulted to pulse length x 1 m^2 = "
            f"{fld.resolved_mode_volume():.6g} m^3 (per-photon results are volume-independent "
            "in the linear regime)"))
    return notes


def iter_notes_text(notes: list[RegimeNote]) -> Iterator[str]:
    for n in notes:
        yield str(n)
