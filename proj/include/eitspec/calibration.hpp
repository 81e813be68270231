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

#pragma once

#include <numbers>

namespace eitspec {

// Gaussian Rabi pulse integrated over [-2 sigma, 2 sigma].
struct PulseSpec {
  double sigma = 15e-9;  // s
  double v_peak = 1.0;   // instrument amplitude, arbitrary units

  void validate() const;
};

// Integral of exp(-t^2 / (2 sigma^2)) over [-2 sigma, 2 sigma]:
// sigma sqrt(2 pi) erf(sqrt 2).
double gaussian_pulse_area(double sigma);

// theta = omega_peak * gaussian_pulse_area(sigma); omega_peak in rad/s.
double rabi_phase(double omega_peak, double sigma);

// Peak Rabi rate (rad/s) that produces rotation angle theta.
double peak_rabi_rate(double theta, double sigma);

// Linear frequency per unit instrument amplitude (Hz / arb. unit) that
// yields rotation angle theta.
double probe_conversion_factor(const PulseSpec& pulse,
                               double theta = std::numbers::pi);

struct ScalingEstimate {
  double value = 0.0;     // rad/s
  double ratio = 0.0;     // |detuning| / coupling (or drive)
  bool within_validity = true;
};

// kappa_q = gamma (g / Delta_qt)^2. within_validity is false when
// |Delta_qt| / g < 10. Throws InvalidInput for Delta_qt = 0.
ScalingEstimate estimate_kappa_q(double g_qt, double delta_qt, double gamma);

// Order-of-magnitude sideband rate g (Omega_d / Delta_qd)^2 with an unknown
// O(1) prefactor. within_validity is false unless |Delta_qd| > Omega_d.
// Throws InvalidInput for Delta_qd = 0.
ScalingEstimate estimate_sideband_rate(double g_qt, double omega_d,
                                       double delta_qd);

// Drive ratio Omega_d / Delta_qd needed for a sideband rate under the same
// scaling.
double sideband_drive_ratio(double g_qt, double omega_sb);

// Largest internal Q for which kappa_q stays below `margin` of the measured
// linewidth: resonance * margin / kappa_q. margin in (0, 1].
double max_probeable_q(double kappa_q, double resonance, double margin);

}  // namespace eitspec
