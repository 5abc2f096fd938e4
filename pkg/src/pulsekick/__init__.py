"""pulsekick: momentum exchange between a plane-wave light pulse and a single two-level atom.

A semiclassical simulator built around three force fidelities (adiabatic
steady state, full optical Bloch equations, and a carrier-resolved
oscillatory-force oracle) and a momentum ledger that tracks kinetic,
canonical, d x B, and both field-momentum accounts through a pulse
passage.
"""

from .bloch import (BlochTrajectory, adiabatic_states, integrate_obe,
                    obe_rhs, obe_rhs_state, steady_state_uv, steady_state_w)
from .config import parse_config, parse_config_file, serialize_config
from .constants import C_LIGHT, EPSILON_0, HBAR
from .dynamics import (IntegrationError, RegimeWarning, TrajectoryRecord,
                       displacement_ratio, integrate_motion,
                       measure_displacements, measured_displacement_ratio,
                       oracle_dxb_average, oracle_force_trace)
from .envelopes import Envelope, make_envelope
from .fields import FieldSample, envelope_at_atom, sample_field, svea_quality
from .forces import (ForceSample, barnett_avg_force, cycle_average,
                     dipole_expectation, gordon_avg_force, oscillatory_force,
                     photon_momentum, scattering_force, scattering_rate)
from .ledger import (MomentumLedger, PhotonMomentumReport,
                     aharonov_casher_difference, conservation_residual,
                     dxb_impulse, gradient_impulse_closed_form, ledger_at,
                     net_dispersive_impulse, photon_count,
                     photon_momentum_report, susceptibility_real,
                     trailing_edge_cancellation)
from .types import (AtomParams, BlochState, ConfigError, DetuningParams,
                    GROUND_STATE, PulseField, RegimeNote, SimConfig,
                    rabi_frequency, regime_notes)

__version__ = "0.1.0"
