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

#include <string>
#include <utility>
#include <vector>

#include "eitspec/model.hpp"

namespace eitspec {

// Qubit excited-state population sampled against probe detuning.
struct SpectrumTrace {
  std::vector<double> delta;   // rad/s, strictly increasing
  std::vector<double> rho_ee;  // populations in [0, 1]
  std::vector<double> sigma;   // optional per-point uncertainty (empty = none)
  ModelParams params;          // generating parameters; params.delta unused
  HilbertConfig hilbert;       // truncation actually used

  std::size_t size() const { return delta.size(); }
  // Throws InvalidInput if sizes disagree, deltas are not strictly
  // increasing, or there are fewer than min_samples points.
  void validate(std::size_t min_samples = 5) const;
};

struct DipMetrics {
  double width = 0.0;            // FWHM of baseline - trace, rad/s
  double depth = 0.0;            // population at the dip minimum
  double total_linewidth = 0.0;  // FWHM of the whole peak, rad/s
  double center = 0.0;           // detuning of the dip minimum, rad/s
  double baseline = 0.0;         // interpolated envelope at the minimum
};

enum class Regime { EIT, ATS, INTERMEDIATE };

std::string to_string(Regime r);

// One steady-state solve per detuning. All points share one Fock dimension:
// if any point fails the truncation check the whole sweep is repeated with
// a larger N. Errors are annotated with the offending detuning.
SpectrumTrace compute_spectrum(const ModelParams& p,
                               const std::vector<double>& deltas,
                               const HilbertConfig& h);

// One trace per sideband detuning.
std::vector<SpectrumTrace> compute_detuning_map(
    const ModelParams& p, const std::vector<double>& deltas,
    const std::vector<double>& delta_sbs, const HilbertConfig& h);

// Default probe grid: 401 points over +-2pi x 1.5 MHz merged with 101 points
// over +-3w around zero, where w is analytic_dip_width (when defined and
// nonzero).
std::vector<double> default_sweep(const ModelParams& p);

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Indices of strict interior local maxima / minima.
std::vector<std::size_t> local_maxima(const std::vector<double>& y);
std::vector<std::size_t> local_minima(const std::vector<double>& y);

// Dip metrics. The baseline is the straight line between the maxima on
// either side of the deepest interior minimum; FWHM values use linear
// interpolation between bracketing samples.
//
// Throws NotInEitRegime when no interior minimum is flanked by higher
// samples, and NeedsFinerGrid when fewer than 9 samples fall inside the dip
// FWHM or the peak half-maximum is not bracketed.
DipMetrics measure_dip(const SpectrumTrace& trace);

// w = S - sqrt(S^2 - Omega_sb^2) with S = gamma + 2 gamma_phi + kappa.
// Weak-probe, delta = 0 approximation. Throws RegimeError when S < Omega_sb.
double analytic_dip_width(double gamma, double gamma_phi, double kappa,
                          double omega_sb);

struct AtsPeaks {
  double separation = 0.0;
  double width = 0.0;
};

// separation = Omega_sb, per-peak width = (gamma + 2 gamma_phi + kappa) / 2.
AtsPeaks ats_peak_metrics(double gamma, double gamma_phi, double kappa,
                          double omega_sb);

// EIT when |g - kappa| > Omega_sb and g > kappa (g = gamma + 2 gamma_phi),
// ATS when |g - kappa| < Omega_sb, INTERMEDIATE at equality (1e-9 relative)
// and in the remaining resonator-dominated corner.
Regime classify_regime(double gamma, double gamma_phi, double kappa,
                       double omega_sb);

}  // namespace eitspec
