// Copyright 2026 The eitspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eitspec/calibration.hpp"

#include <cmath>
#include <limits>

#include "eitspec/errors.hpp"

namespace eitspec {

void PulseSpec::validate() const {
  if (!(sigma > 0.0)) throw InvalidInput("pulse sigma must be > 0");
  if (!(v_peak > 0.0)) throw InvalidInput("pulse peak amplitude must be > 0");
}

double gaussian_pulse_area(double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("pulse sigma must be > 0");
  return sigma * std::sqrt(2.0 * std::numbers::pi) * std::erf(std::sqrt(2.0));
}

double rabi_phase(double omega_peak, double sigma) {
  return omega_peak * gaussian_pulse_area(sigma);
}

double peak_rabi_rate(double theta, double sigma) {
  return theta / gaussian_pulse_area(sigma);
}

double probe_conversion_factor(const PulseSpec& pulse, double theta) {
  pulse.validate();
  const double omega_peak = peak_rabi_rate(theta, pulse.sigma);
  return omega_peak / (2.0 * std::numbers::pi) / pulse.v_peak;
}

ScalingEstimate estimate_kappa_q(double g_qt, double delta_qt, double gamma) {
  if (delta_qt == 0.0) {
    throw InvalidInput("qubit-resonator detuning must be nonzero");
  }
  const double r = g_qt / delta_qt;
  ScalingEstimate out;
  out.value = gamma * r * r;
  out.ratio = g_qt == 0.0 ? std::numeric_limits<double>::infinity()
                          : std::abs(delta_qt / g_qt);
  out.within_validity = out.ratio >= 10.0;
  return out;
}

ScalingEstimate estimate_sideband_rate(double g_qt, double omega_d,
                                       double delta_qd) {
  if (delta_qd == 0.0) {
    throw InvalidInput("qubit-drive detuning must be nonzero");
  }
  const double r = omega_d / delta_qd;
  ScalingEstimate out;
  out.value = g_qt * r * r;
  out.ratio = omega_d == 0.0 ? std::numeric_limits<double>::infinity()
                             : std::abs(delta_qd / omega_d);
  out.within_validity = std::abs(delta_qd) > std::abs(omega_d);
  return out;
}

double sideband_drive_ratio(double g_qt, double omega_sb) {
  if (!(g_qt > 0.0)) throw InvalidInput("coupling must be > 0");
  if (omega_sb < 0.0) throw InvalidInput("sideband rate must be >= 0");
  return std::sqrt(omega_sb / g_qt);
}

double max_probeable_q(double kappa_q, double resonance, double margin) {
  if (!(margin > 0.0 && margin <= 1.0)) {
    throw InvalidInput("margin must lie in (0, 1]");
  }
  if (!(kappa_q > 0.0)) throw InvalidInput("kappa_q must be > 0");
  return resonance * margin / kappa_q;
}

}  // namespace eitspec
