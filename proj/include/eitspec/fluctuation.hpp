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
#include <vector>

#include "eitspec/fitting.hpp"
#include "eitspec/spectrum.hpp"

namespace eitspec {

// How the qubit decay rate moves from (1 - eta) gamma_0 to (1 + eta) gamma_0
// while a spectrum is accumulated.
enum class FluctuationTrend { Telegraphic, Diffusive };

std::string to_string(FluctuationTrend t);
FluctuationTrend trend_from_string(const std::string& name);

struct FluctuationSpec {
  FluctuationTrend trend = FluctuationTrend::Telegraphic;
  double eta = 0.0;
  double gamma_0 = 1.0;
  int n_sweeps = 100;

  void validate() const;
};

// Decay rates averaged over for one fluctuation spec: {gamma_i, gamma_f} for
// the telegraphic jump, n evenly spaced values spanning [gamma_i, gamma_f]
// for the diffusive drift.
std::vector<double> fluctuation_rates(const FluctuationSpec& spec);

// Mean of the spectra at gamma_i and gamma_f; p.gamma is gamma_0.
SpectrumTrace telegraphic_spectrum(const ModelParams& p,
                                   const std::vector<double>& deltas,
                                   double eta, const HilbertConfig& h);

// Mean of n spectra with gamma_k = gamma_i + 2 eta gamma_0 k / (n - 1),
// k = 0 .. n-1; p.gamma is gamma_0.
SpectrumTrace diffusive_spectrum(const ModelParams& p,
                                 const std::vector<double>& deltas, double eta,
                                 int n_sweeps, const HilbertConfig& h);

SpectrumTrace distorted_spectrum(const ModelParams& p,
                                 const std::vector<double>& deltas,
                                 const FluctuationSpec& spec,
                                 const HilbertConfig& h);

struct BiasPoint {
  double eta = 0.0;
  double kappa_fit = 0.0;  // rad/s; NaN when the fit failed
  double kappa_stderr = 0.0;
  bool ok = false;
  std::string error;
};

struct BiasCurve {
  FluctuationTrend trend = FluctuationTrend::Telegraphic;
  double kappa_true = 0.0;
  std::vector<BiasPoint> points;
};

struct BiasOptions {
  int n_sweeps = 100;
  // Parameters refitted with the ideal (fluctuation-free) model.
  std::vector<std::string> free = {"kappa", "gamma", "omega_sb"};
  FitOptions fit;
};

// For each eta: build the distorted trace, refit it with the ideal master
// equation (gamma_phi = 0) starting from the generating parameters and record
// the fitted kappa. Failed fits are recorded, not thrown. etas must include 0.
BiasCurve bias_curve(const ModelParams& p, const std::vector<double>& deltas,
                     const std::vector<double>& etas, FluctuationTrend trend,
                     const HilbertConfig& h, const BiasOptions& options = {});

}  // namespace eitspec
