# Copyright 2026 The eitspec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import eitspec as es


def fig2a():
    return es.ModelParams.from_khz(omega_sb=100, omega_p=100, gamma=400,
                                   gamma_phi=0, kappa=30, chi_qt=10)


def test_units_roundtrip():
    assert es.angular_to_khz(es.khz_to_angular(12.5)) == pytest.approx(12.5)
    assert es.khz_to_angular(1.0) == pytest.approx(2 * math.pi * 1e3)


def test_steady_state_is_a_density_matrix():
    s = es.steady_state(fig2a())
    m = s.matrix
    assert m.shape == (2 * s.fock_dim, 2 * s.fock_dim)
    assert abs(m.trace() - 1) < 1e-10
    assert abs(m - m.conj().T).max() < 1e-10
    assert 0 < s.excited_population < 0.5
    assert s.photon_number > 0


def test_spectrum_has_an_interior_dip():
    p = fig2a()
    t = es.compute_spectrum(p, es.default_sweep(p))
    assert len(t) == len(t.delta) == len(t.rho_ee)
    dip = es.measure_dip(t)
    assert 0 < dip.depth < dip.baseline
    assert es.classify_regime(p.gamma, p.gamma_phi, p.kappa, p.omega_sb) == es.Regime.EIT


def test_model_selection_picks_eit():
    p = fig2a()
    sel = es.select_model(es.compute_spectrum(p, es.default_sweep(p)))
    assert sel.selected == es.LineshapeModel.EIT
    assert sel.score_gap > 10


def test_lineshape_fit_reports_parameters():
    p = fig2a()
    t = es.compute_spectrum(p, es.default_sweep(p))
    f = es.fit_lineshape(t, es.LineshapeModel.LORENTZIAN)
    assert f.converged
    assert f.names == ["amplitude", "center", "fwhm"]
    assert f.value("fwhm") > 0


def test_calibration_numbers():
    pulse = es.PulseSpec()
    pulse.sigma = 15e-9
    pulse.v_peak = 0.54
    assert es.probe_conversion_factor(pulse, math.pi) / 1e6 == pytest.approx(25.81, rel=1e-3)
    mhz = 2 * math.pi * 1e6
    kq = es.estimate_kappa_q(58 * mhz, 3823 * mhz, es.khz_to_angular(446))
    assert kq.value / (2 * math.pi) == pytest.approx(104, abs=11)


def test_errors_map_to_python_exceptions():
    with pytest.raises(es.InvalidInput):
        es.ModelParams.from_khz(omega_sb=100, omega_p=100, gamma=-1)
    p = es.ModelParams.from_khz(omega_sb=1000, omega_p=2000, gamma=400, kappa=5)
    h = es.HilbertConfig()
    h.fock_dim = 2
    h.max_fock_dim = 2
    with pytest.raises(es.TruncationInsufficient):
        es.steady_state(p, h)
    assert issubclass(es.TruncationInsufficient, es.Error)
