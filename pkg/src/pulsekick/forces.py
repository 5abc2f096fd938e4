"""Forces on the atom: oscillatory (carrier-resolved) and cycle-averaged.

Two equivalent writings of the dipole Lorentz force are carried side by
side.  With d the dipole expectation value along the polarization:

* "barnett" split: F = (d.grad)E + d_dot x B.  For a transverse plane wave
  the first term has no z-component, so the whole force is the magnetic
  term; its cycle average is D*(du/dt * Env/c - v*k*Env).
* "gordon" split: F = d.(dE/dz) + d/dt(d x B); cycle-averaged this is the
  gradient force D*u*dEnv/dz, the scattering force -D*v*k*Env, and the
  rate term d/dt(D*u*Env/c).

The two totals are identical (a Maxwell-equation identity); only the
attribution of the dispersive part differs, and that attribution is what
the momentum ledger keeps track of.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, HBAR
from .fields import FieldSample

FORM_TAGS = ("gordon", "barnett", "oscillatory")

CYCLE_AVG_SAMPLES = 64
# equally spaced samples over one carrier period; trapezoid on a periodic
# integrand converges spectrally, so 64 is far past machine precision for
# the cos^2/sin*cos harmonics involved


@dataclass(frozen=True)
class ForceSample:
    """z-force at one instant, split into the parts of one form.

    ``rate_z`` holds the form's dispersive rate term: d/dt(d x B) for
    gordon, D*(du/dt)*Env/c for barnett, the instantaneous second Lorentz
    term for oscillatory.  total_z is always the sum of the three parts.
    """

    total_z: float
    gradient_z: float
    scattering_z: float
    rate_z: float
    form: str

    def __post_init__(self):
        if self.form not in FORM_TAGS:
            raise ValueError(f"unknown force form {self.form!r}")


def dipole_expectation(u, v, phase, dipole):
    """<d.e> = 2*D*(u*cos(phase) - v*sin(phase))."""
    return 2.0 * dipole * (u * np.cos(phase) - v * np.sin(phase))


def dipole_expectation_rate(u, v, du_dt, dv_dt, phase, phase_rate, dipole):
    """Total time derivative of the dipole expectation value.

    Includes both the carrier rotation (phase_rate) and the envelope-driven
    drift of (u, v); dropping the latter loses the leading-edge physics.
    """
    cos_p, sin_p = np.cos(phase), np.sin(phase)
    return 2.0 * dipole * (du_dt * cos_p - u * phase_rate * sin_p
                           - dv_dt * sin_p - v * phase_rate * cos_p)


def oscillatory_force(dipole_value, dipole_rate, sample: FieldSample, k: float):
    """Instantaneous Lorentz force on the dipole, z-component (N).

    Evaluates F = (d.grad)E + d_dot x B.  The first term's z-component is
    identically zero for a transverse plane wave (E_z = 0); this is
    asserted rather than assumed.  Returns a ForceSample whose gradient_z /
    rate_z carry the gordon-split instantaneous parts d.(dE/dz) and
    F_total - d.(dE/dz) = d/dt(d x B) for diagnostics.
    """
    e_z = sample.E_vec[2]
    assert e_z == 0.0, "plane-wave field acquired a longitudinal component"
    coulomb_z = dipole_value * 0.0 * e_z  # (d.grad)E_z with E_z identically 0

    carrier = np.cos(sample.phase)
    e_along_pol = sample.envelope_value * carrier
    total = dipole_rate * e_along_pol / C_LIGHT + coulomb_z

    # gordon-split diagnostics: F1 = d * d(Env*cos)/dz, F2 = total - F1
    de_dz = (sample.envelope_space_gradient * carrier
             + k * sample.envelope_value * np.sin(sample.phase))
    f1 = dipole_value * de_dz
    return ForceSample(total_z=float(total), gradient_z=float(f1),
                       scattering_z=0.0, rate_z=float(total - f1),
                       form="oscillatory")


def gordon_avg_force(u, v, du_dt, sample: FieldSample, dipole: float, k: float,
                     envelope_rate_along_path: float | None = None,
                     neglect_dxb: bool = False) -> ForceSample:
    """Cycle-averaged force, gradient + scattering + d/dt(d x B) split.

    ``envelope_rate_along_path`` is the total time derivative of the
    envelope seen by the atom; defaults to the fixed-z partial derivative
    (exact for a static atom).  ``neglect_dxb`` drops the rate term, which
    reproduces the customary laser-cooling force.
    """
    env = sample.envelope_value
    env_rate = sample.envelope_time_derivative if envelope_rate_along_path is None \
        else envelope_rate_along_path
    gradient = dipole * u * sample.envelope_space_gradient
    scattering = -dipole * v * k * env
    rate = 0.0 if neglect_dxb else dipole * (du_dt * env + u * env_rate) / C_LIGHT
    return ForceSample(total_z=gradient + scattering + rate,
                       gradient_z=gradient, scattering_z=scattering,
                       rate_z=rate, form="gordon")


def barnett_avg_force(u, v, du_dt, sample: FieldSample, dipole: float,
                      k: float) -> ForceSample:
    """Cycle-averaged force, dispersive-rate + scattering split."""
    env = sample.envelope_value
    rate = dipole * du_dt * env / C_LIGHT
    scattering = -dipole * v * k * env
    return ForceSample(total_z=rate + scattering, gradient_z=0.0,
                       scattering_z=scattering, rate_z=rate, form="barnett")


def scattering_rate(delta, gamma, omega_rabi):
    """Spontaneous scattering rate (1/s): gamma times the saturation factor.

    Equals 2*gamma*rho_ee at steady state; bounded above by gamma.
    """
    half_sq = 0.5 * omega_rabi ** 2
    return gamma * half_sq / (delta ** 2 + gamma ** 2 + half_sq)


def scattering_force(delta, gamma, omega_rabi, p0):
    """Radiation-pressure force: photon momentum times scattering rate (N)."""
    return p0 * scattering_rate(delta, gamma, omega_rabi)


def photon_momentum(omega: float) -> float:
    """Free-space photon momentum hbar*k = hbar*omega/c (kg m/s)."""
    return HBAR * omega / C_LIGHT


def cycle_average(func, t_center: float, omega: float,
                  n_samples: int = CYCLE_AVG_SAMPLES):
    """Average func(t) over one carrier period centered on t_center.

    Trapezoid quadrature on equally spaced samples of a periodic integrand;
    the endpoint is excluded (it duplicates the start point one period on).
    func must accept an array of times.
    """
    period = 2.0 * np.pi / omega
    ts = t_center + (np.arange(n_samples) / n_samples - 0.5) * period
    return np.mean(func(ts), axis=-1)
