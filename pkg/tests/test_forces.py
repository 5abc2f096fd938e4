"""Force forms: identities, splits, and the carrier-resolved oracle."""

import numpy as np
import pytest

from pulsekick import (barnett_avg_force, dipole_expectation, gordon_avg_force,
                       integrate_motion, oscillatory_force, photon_momentum,
                       sample_field, scattering_force, scattering_rate,
                       steady_state_uv)
from pulsekick.constants import C_LIGHT, HBAR
from pulsekick.forces import dipole_expectation_rate

from conftest import DIPOLE, GAMMA, scaled_config


class TestScatteringRate:
    def test_no_drive(self):
        assert scattering_rate(0.0, GAMMA, 0.0) == 0.0

    def test_resonant_half_gamma(self):
        # delta = 0, Omega = sqrt(2)*gamma: the saturation factor is 1/2
        rate = scattering_rate(0.0, GAMMA, np.sqrt(2.0) * GAMMA)
        assert rate == pytest.approx(0.5 * GAMMA, rel=1e-12)

    def test_bounded_by_gamma_everywhere(self):
        d = np.linspace(-10, 10, 41)[:, None] * GAMMA
        o = np.linspace(0, 100, 41)[None, :] * GAMMA
        rate = scattering_rate(d, GAMMA, o)
        assert np.all(rate < GAMMA)
        assert np.all(rate >= 0.0)

    def test_saturation_limit(self):
        rate = scattering_rate(GAMMA, GAMMA, 1e4 * GAMMA)
        assert abs(rate - GAMMA) / GAMMA < 1e-6


class TestScatteringForceIdentity:
    def test_equals_absorptive_term_pointwise(self):
        # p0 * rate must equal -D*v*k*Env via the steady state, as an
        # algebraic identity, over a detuning/drive grid
        cfg = scaled_config()
        k = cfg.field.omega / C_LIGHT
        p0 = photon_momentum(cfg.field.omega)
        for dg in (-10.0, -3.0, -0.5, 0.0, 2.0, 10.0):
            for og in (1e-3, 0.1, 1.0, 10.0):
                delta = dg * GAMMA
                e0 = HBAR * og * GAMMA / DIPOLE
                omr = -DIPOLE * e0 / HBAR
                _, v = steady_state_uv(delta, GAMMA, omr)
                lhs = -DIPOLE * v * k * e0
                rhs = scattering_force(delta, GAMMA, omr, p0)
                assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_zero_drive(self):
        assert scattering_force(GAMMA, GAMMA, 0.0, 1e-27) == 0.0


class TestAveragedForms:
    def setup_method(self):
        self.cfg = scaled_config(delta=-5.0, rabi=0.1, rise=100.0, plateau=300.0)
        self.k = self.cfg.field.k
        fld = self.cfg.field
        self.t_rise = 0.5 * fld.envelope.rise_time
        self.t_plateau = fld.envelope.rise_time + 0.5 * fld.envelope.plateau_time

    def test_total_is_sum_of_parts(self):
        s = sample_field(self.cfg.field, self.t_rise, 0.0)
        fs = gordon_avg_force(0.01, -0.004, 12.0, s, DIPOLE, self.k)
        assert fs.total_z == fs.gradient_z + fs.scattering_z + fs.rate_z
        fb = barnett_avg_force(0.01, -0.004, 12.0, s, DIPOLE, self.k)
        assert fb.total_z == fb.gradient_z + fb.scattering_z + fb.rate_z

    def test_plateau_reduces_to_scattering(self):
        s = sample_field(self.cfg.field, self.t_plateau, 0.0)
        assert s.envelope_space_gradient == 0.0
        u, v = steady_state_uv(self.cfg.detuning.delta, GAMMA, self.cfg.detuning.rabi_peak)
        g = gordon_avg_force(u, v, 0.0, s, DIPOLE, self.k)
        b = barnett_avg_force(u, v, 0.0, s, DIPOLE, self.k)
        assert g.gradient_z == 0.0 and g.rate_z == 0.0
        assert b.rate_z == 0.0
        assert g.total_z == pytest.approx(b.total_z, rel=1e-15)
        assert g.total_z == pytest.approx(g.scattering_z, rel=1e-15)

    def test_resonant_gradient_part_vanishes(self):
        cfg = scaled_config(delta=0.0)
        s = sample_field(cfg.field, self.t_rise, 0.0)
        u, v = steady_state_uv(0.0, GAMMA, cfg.detuning.rabi_peak)
        fs = gordon_avg_force(u, v, 0.0, s, DIPOLE, cfg.field.k)
        assert fs.gradient_z == 0.0

    def test_gordon_equals_barnett_for_static_atom(self):
        # on the ramp, with du/dt from the chain rule, the two totals
        # coincide exactly (the chain rule ties grad and rate terms)
        s = sample_field(self.cfg.field, self.t_rise, 0.0)
        u, v, du = 0.008, -0.003, 21.7
        g = gordon_avg_force(u, v, du, s, DIPOLE, self.k)
        b = barnett_avg_force(u, v, du, s, DIPOLE, self.k)
        assert g.total_z == pytest.approx(b.total_z, rel=1e-14)

    def test_neglect_dxb_drops_rate_term(self):
        s = sample_field(self.cfg.field, self.t_rise, 0.0)
        fs = gordon_avg_force(0.01, -0.004, 12.0, s, DIPOLE, self.k, neglect_dxb=True)
        assert fs.rate_z == 0.0
        assert fs.total_z == fs.gradient_z + fs.scattering_z


class TestOscillatory:
    def test_zero_dipole_zero_force(self):
        cfg = scaled_config()
        s = sample_field(cfg.field, 0.5 * cfg.field.envelope.rise_time, 0.0)
        fs = oscillatory_force(0.0, 0.0, s, cfg.field.k)
        assert fs.total_z == 0.0

    def test_transverse_field_geometry(self):
        # the z-component of (d.grad)E vanishes identically: the entire
        # force is the magnetic term, and E_z stays zero on every sample
        cfg = scaled_config()
        for t in np.linspace(0.0, cfg.pulse_duration_tau, 37):
            s = sample_field(cfg.field, t, 0.0)
            assert s.E_vec[2] == 0.0

    def test_cycle_average_matches_barnett_at_constant_envelope(self):
        cfg = scaled_config(delta=-5.0, rabi=0.1)
        fld = cfg.field
        delta, omr = cfg.detuning.delta, cfg.detuning.rabi_peak
        u, v = steady_state_uv(delta, GAMMA, omr)
        t_mid = fld.envelope.rise_time + 0.5 * fld.envelope.plateau_time
        period = 2 * np.pi / fld.omega
        ts = t_mid + (np.arange(4096) / 4096 - 0.5) * period
        totals = []
        for t in ts:
            s = sample_field(fld, float(t), 0.0)
            d_val = dipole_expectation(u, v, s.phase, DIPOLE)
            d_rate = dipole_expectation_rate(u, v, 0.0, 0.0, s.phase, fld.omega, DIPOLE)
            totals.append(oscillatory_force(d_val, d_rate, s, fld.k).total_z)
        avg = float(np.mean(totals))
        s_mid = sample_field(fld, t_mid, 0.0)
        expected = barnett_avg_force(u, v, 0.0, s_mid, DIPOLE, fld.k).total_z
        assert avg == pytest.approx(expected, rel=1e-6)

    def test_oracle_trace_matches_averaged_forms_in_envelope(self):
        cfg = scaled_config(delta=-5.0, rabi=0.1, rise=100.0, plateau=100.0,
                            fidelity="oscillatory-oracle")
        rec = integrate_motion(cfg)
        t0, t1 = rec.window
        inside = (rec.times > t0) & (rec.times < t1)
        scale = np.max(np.abs(rec.f_total[inside]))
        dev = np.max(np.abs(rec.oracle_total - rec.f_total)[inside])
        assert dev / scale < 1e-7
        # dispersive edge content: relative to the local dispersive force
        rise = (rec.times > t0 + 0.1 * (t1 - t0) / 3) & (rec.times < t0 + 0.9 * (t1 - t0) / 3)
        f_disp = (rec.f_grad + rec.f_dxb_rate)[rise]
        dev_rise = np.abs(rec.oracle_total - rec.f_total)[rise]
        assert np.max(dev_rise / np.abs(f_disp)) < 1e-4

    def test_sign_structure_on_leading_edge(self):
        # red detuning: gradient part pulls backward, the d x B rate term
        # pushes forward and wins
        cfg = scaled_config(delta=-5.0, rabi=0.1)
        rec = integrate_motion(cfg)
        t0, _ = rec.window
        rise = (rec.times > t0 + 0.2e-6) & (rec.times < t0 + 4e-6)
        assert np.all(rec.f_grad[rise] < 0.0)
        assert np.all(rec.f_dxb_rate[rise] > 0.0)
        assert np.all((rec.f_grad + rec.f_dxb_rate)[rise] > 0.0)
