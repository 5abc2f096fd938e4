"""Momentum bookkeeping: kinetic, canonical, d x B, field momenta, photons.

Accounting model
----------------
The pulse starts with momentum P0 = (pulse energy)/c = N * hbar * k.  The
beam loses exactly what it delivers to the atom: the dispersive transfer
(gradient + d x B impulse) and the scattered transfer (radiation
pressure).  Light re-emitted by spontaneous scattering is isotropic on
average and carries zero mean momentum, so

    field_abraham(t)   = P0 - dispersive(t) - scattered(t)
    field_minkowski(t) = field_abraham(t) + dxb(t)
    kinetic(t)         = M * v(t)
    canonical(t)       = kinetic(t) - dxb(t)

where dxb(t) is the cycle-averaged d x B evaluated at the atom.  Both
conserved sums, kinetic + field_abraham and canonical + field_minkowski,
are identical by construction and constant in time; their difference
telescopes exactly through the Minkowski = Abraham + d x B identity.  The
scattered account (+int F_scatt dt, positive along the propagation axis)
is what the final atom momentum measures after a symmetric pulse.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, EPSILON_0, HBAR
from .bloch import steady_state_uv
from .forces import photon_momentum

CHI_PRIME_MAX = 0.1


@dataclass(frozen=True)
class MomentumLedger:
    """All momentum accounts at one instant of one run (kg m/s).

    Field momenta are carried as depletions from the initial pulse momentum
    p0_field: the absolute pulse momentum exceeds every transfer by a
    factor ~1/chi' (one photon already outweighs the dispersive impulse by
    many orders), so only the depletion is representable in doubles.  The
    absolute accounts are exposed as properties for display.
    """

    run_id: str
    time: float
    kinetic_atom: float
    dxb: float
    canonical_atom: float
    p0_field: float
    field_abraham_depletion: float
    field_minkowski_depletion: float
    scattered_momentum: float

    @property
    def field_abraham(self) -> float:
        return self.p0_field + self.field_abraham_depletion

    @property
    def field_minkowski(self) -> float:
        return self.p0_field + self.field_minkowski_depletion

    def kinetic_form_total(self) -> float:
        """Conserved sum, kinetic formulation, with the constant p0 omitted."""
        return self.kinetic_atom + self.field_abraham_depletion

    def canonical_form_total(self) -> float:
        """Conserved sum, canonical formulation, with the constant p0 omitted."""
        return self.canonical_atom + self.field_minkowski_depletion


@dataclass(frozen=True)
class PhotonMomentumReport:
    """Per-photon momentum comparison for one run.

    Absolute per-photon momenta differ from the free value by parts in
    1e-30 for macroscopic mode volumes, so the report also carries the
    shifts (momentum minus hbar*k), which is what the branch comparison
    must use to avoid catastrophic cancellation.
    """

    photon_count_N: float
    p0: float
    chi_prime: float
    n: float
    p_abraham_per_photon: float
    p_minkowski_per_photon: float
    measured_p_per_photon: float
    measured_shift: float          # measured - p0
    abraham_shift: float           # p0/n - p0
    minkowski_shift: float         # p0*n - p0
    dispersive_impulse: float      # momentum held by the atom mid-pulse
    neglect_dxb: bool
    warnings: tuple[str, ...]

    @property
    def branch_separation(self) -> float:
        return abs(self.minkowski_shift - self.abraham_shift)

    def distance_to_abraham(self) -> float:
        return abs(self.measured_shift - self.abraham_shift)

    def distance_to_minkowski(self) -> float:
        return abs(self.measured_shift - self.minkowski_shift)


def ledger_at(record, index: int) -> MomentumLedger:
    """Momentum ledger snapshot at a record index."""
    return MomentumLedger(
        run_id=record.run_id,
        time=float(record.times[index]),
        kinetic_atom=float(record.kinetic[index]),
        dxb=float(record.dxb[index]),
        canonical_atom=float(record.canonical[index]),
        p0_field=record.p0_field,
        field_abraham_depletion=float(record.field_abraham_depletion[index]),
        field_minkowski_depletion=float(record.field_minkowski_depletion[index]),
        scattered_momentum=float(record.imp_scatt[index]),
    )


def conservation_residual(ledger_t0: MomentumLedger,
                          ledger_t1: MomentumLedger) -> tuple[float, float]:
    """Change of both conserved sums between two snapshots of one run.

    Returns (kinetic-form residual, canonical-form residual); both must
    vanish to integrator tolerance.  The two formulations differ only
    through the d x B telescoping, so their difference is machine-level.
    """
    if ledger_t0.run_id != ledger_t1.run_id:
        raise ValueError("ledgers come from different runs "
                         f"({ledger_t0.run_id} vs {ledger_t1.run_id})")
    if ledger_t1.time < ledger_t0.time:
        raise ValueError("ledger_t1 must not precede ledger_t0")
    kin = ledger_t1.kinetic_form_total() - ledger_t0.kinetic_form_total()
    can = ledger_t1.canonical_form_total() - ledger_t0.canonical_form_total()
    return kin, can


def gradient_impulse_closed_form(delta: float, gamma: float,
                                 omega0: float) -> tuple[float, float, float]:
    """Leading-edge gradient-force impulse along z (kg m/s).

    Returns (exact, linear, gap): the exact closed form
    (hbar*delta/2c) * ln(1 + (Omega0^2/2)/(delta^2+gamma^2)), its
    linear-response approximation -D*u*Env0/(2c) expressed through the
    plateau steady state, and their relative gap.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    x = 0.5 * omega0 ** 2 / (delta ** 2 + gamma ** 2)
    exact = HBAR * delta / (2.0 * C_LIGHT) * math.log1p(x)
    u, _ = steady_state_uv(delta, gamma, omega0)
    # D*u*Env0 = -hbar*Omega0*u, so the linear form needs no field amplitude
    linear = 0.5 * HBAR * omega0 * u / C_LIGHT
    gap = abs(exact - linear) / abs(exact) if exact != 0.0 else 0.0
    return exact, linear, gap


def dxb_impulse(u: float, dipole: float, e0: float) -> float:
    """Cycle-averaged d x B momentum D*u*Env0/c once fully enveloped."""
    return dipole * u * e0 / C_LIGHT


def net_dispersive_impulse(delta: float, gamma: float, omega0: float,
                           dipole: float, e0: float) -> float:
    """Total dispersive momentum after the leading edge (kg m/s).

    Gradient plus d x B impulse; in the linear regime this equals
    +D*u*Env0/(2c), positive along propagation for red detuning (the atom
    is repelled from the light).  Parameters must be mutually consistent:
    hbar*omega0 = -dipole*e0 within rounding.
    """
    if e0 != 0.0 or omega0 != 0.0:
        mismatch = abs(HBAR * omega0 + dipole * e0)
        scale = max(abs(HBAR * omega0), abs(dipole * e0))
        if scale > 0.0 and mismatch > 1e-9 * scale:
            raise ValueError("inconsistent inputs: hbar*omega0 != -dipole*e0")
    if omega0 ** 2 >= 0.1 * (delta ** 2 + gamma ** 2):
        warnings.warn("outside the linear-response regime: "
                      "Omega0^2 is not << delta^2 + gamma^2", stacklevel=2)
    exact, _, _ = gradient_impulse_closed_form(delta, gamma, omega0)
    u, _ = steady_state_uv(delta, gamma, omega0)
    return exact + dxb_impulse(u, dipole, e0)


def photon_count(e0: float, volume: float, omega: float) -> float:
    """Number of photons in the pulse: (eps0 * E0^2 * V / 2) / (hbar*omega)."""
    return 0.5 * EPSILON_0 * e0 ** 2 * volume / (HBAR * omega)


def susceptibility_real(u: float, dipole: float, e0: float, volume: float) -> float:
    """In-phase linear susceptibility 2*D*u/(eps0*E0*V) of the one-atom medium."""
    return 2.0 * dipole * u / (EPSILON_0 * e0 * volume)


def photon_momentum_report(record, field=None, atom=None) -> PhotonMomentumReport:
    """Per-photon momentum transfer, compared against both index branches.

    The measured value divides the atom's mid-pulse dispersive momentum by
    the photon number: each photon's momentum is reduced by the atom's
    dispersive gain.  With the d x B force active the result sits on the
    p0/n branch; with it neglected, on the p0*n branch.
    """
    field = record.config.field if field is None else field
    atom = record.config.atom if atom is None else atom
    volume = field.resolved_mode_volume()
    n_photons = photon_count(field.peak_E0, volume, field.omega)
    if n_photons < 1.0:
        raise ValueError(f"photon count {n_photons:.3g} < 1: unphysical mode volume")

    mid = record.plateau_center_index()
    u_mid = float(record.u[mid])
    disp = float(record.dispersive_momentum[mid])

    notes = [str(n) for n in record.notes]
    chi = susceptibility_real(u_mid, atom.dipole, field.peak_E0, volume)
    if abs(chi) >= CHI_PRIME_MAX:
        notes.append(f"[susceptibility] |chi'| = {abs(chi):.3g} >= {CHI_PRIME_MAX}; "
                     "the weak-index expansion n = 1 + chi'/2 is unreliable")
    n_index = 1.0 + 0.5 * chi
    p0 = photon_momentum(field.omega)

    measured_shift = -disp / n_photons
    # shifts from chi directly: p0*(1/n - 1) and p0*(n - 1) cancel
    # catastrophically for the macroscopic mode volumes where chi' ~ 1e-24
    abraham_shift = -p0 * 0.5 * chi / (1.0 + 0.5 * chi)
    minkowski_shift = p0 * 0.5 * chi
    return PhotonMomentumReport(
        photon_count_N=n_photons,
        p0=p0,
        chi_prime=chi,
        n=n_index,
        p_abraham_per_photon=p0 / n_index,
        p_minkowski_per_photon=p0 * n_index,
        measured_p_per_photon=p0 + measured_shift,
        measured_shift=measured_shift,
        abraham_shift=abraham_shift,
        minkowski_shift=minkowski_shift,
        dispersive_impulse=disp,
        neglect_dxb=record.config.neglect_dxb,
        warnings=tuple(notes),
    )


def trailing_edge_cancellation(record) -> tuple[float, float, float]:
    """(leading impulse, trailing impulse, final dispersive momentum).

    Requires a symmetric envelope.  The trailing-edge dispersive impulse
    cancels the leading-edge one, leaving the final atom momentum equal to
    the cumulative scattered momentum alone.
    """
    if not record.config.field.envelope.symmetric:
        raise ValueError("trailing-edge cancellation requires a symmetric envelope")
    mid = record.plateau_center_index()
    disp = record.dispersive_momentum
    leading = float(disp[mid])
    final = float(disp[-1])
    return leading, final - leading, final


def aharonov_casher_difference(mag_dipole, e_field) -> np.ndarray:
    """Momentum difference m x E / c^2 for a magnetic dipole in a field.

    The magnetic-dipole analog of the d x B account: the same vector that
    separates the canonical from the kinetic momentum of a moving magnetic
    dipole.
    """
    return np.cross(np.asarray(mag_dipole, dtype=float),
                    np.asarray(e_field, dtype=float)) / C_LIGHT ** 2
