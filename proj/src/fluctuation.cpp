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

#include "eitspec/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eitspec/errors.hpp"

namespace eitspec {
namespace {

SpectrumTrace average_over_rates(const ModelParams& p,
                                 const std::vector<double>& deltas,
                                 const std::vector<double>& rates,
                                 const HilbertConfig& h) {
  SpectrumTrace out;
  HilbertConfig current = h;
  std::vector<double> sum(deltas.size(), 0.0);
  for (double rate : rates) {
    ModelParams q = p;
    q.gamma = rate;
    const SpectrumTrace s = compute_spectrum(q, deltas, current);
    current.fock_dim = std::max(current.fock_dim, s.hilbert.fock_dim);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += s.rho_ee[i];
  }
  for (double& v : sum) v /= static_cast<double>(rates.size());
  out.delta = deltas;
  out.rho_ee = std::move(sum);
  out.params = p;
  out.params.delta = 0.0;
  out.hilbert = current;
  return out;
}

}  // namespace

std::string to_string(FluctuationTrend t) {
  return t == FluctuationTrend::Telegraphic ? "telegraphic" : "diffusive";
}

FluctuationTrend trend_from_string(const std::string& name) {
  if (name == "telegraphic") return FluctuationTrend::Telegraphic;
  if (name == "diffusive") return FluctuationTrend::Diffusive;
  throw InvalidInput("unknown fluctuation trend: " + name);
}

void FluctuationSpec::validate() const {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw InvalidInput("eta must lie in [0, 1)");
  }
  if (!(gamma_0 > 0.0)) throw InvalidInput("gamma_0 must be > 0");
  if (trend == FluctuationTrend::Diffusive && n_sweeps < 2) {
    throw InvalidInput("diffusive fluctuation needs n_sweeps >= 2");
  }
}

std::vector<double> fluctuation_rates(const FluctuationSpec& spec) {
  spec.validate();
  const double lo = (1.0 - spec.eta) * spec.gamma_0;
  const double hi = (1.0 + spec.eta) * spec.gamma_0;
  if (spec.trend == FluctuationTrend::Telegraphic) return {lo, hi};
  std::vector<double> rates(static_cast<std::size_t>(spec.n_sweeps));
  const double step = 2.0 * spec.eta * spec.gamma_0 /
                      static_cast<double>(spec.n_sweeps - 1);
  for (int k = 0; k < spec.n_sweeps; ++k) {
    rates[static_cast<std::size_t>(k)] = lo + step * k;
  }
  return rates;
}

SpectrumTrace distorted_spectrum(const ModelParams& p,
                                 const std::vector<double>& deltas,
                                 const FluctuationSpec& spec,
                                 const HilbertConfig& h) {
  return average_over_rates(p, deltas, fluctuation_rates(spec), h);
}

SpectrumTrace telegraphic_spectrum(const ModelParams& p,
                                   const std::vector<double>& deltas,
                                   double eta, const HilbertConfig& h) {
  return distorted_spectrum(
      p, deltas, FluctuationSpec{FluctuationTrend::Telegraphic, eta, p.gamma},
      h);
}

SpectrumTrace diffusive_spectrum(const ModelParams& p,
                                 const std::vector<double>& deltas, double eta,
                                 int n_sweeps, const HilbertConfig& h) {
  return distorted_spectrum(
      p, deltas,
      FluctuationSpec{FluctuationTrend::Diffusive, eta, p.gamma, n_sweeps}, h);
}

BiasCurve bias_curve(const ModelParams& p, const std::vector<double>& deltas,
                     const std::vector<double>& etas, FluctuationTrend trend,
                     const HilbertConfig& h, const BiasOptions& options) {
  if (std::find(etas.begin(), etas.end(), 0.0) == etas.end()) {
    throw InvalidInput("bias curve eta list must include 0");
  }
  BiasCurve curve;
  curve.trend = trend;
  curve.kappa_true = p.kappa;

  ModelParams ideal = p;
  ideal.gamma_phi = 0.0;
  for (double eta : etas) {
    BiasPoint point;
    point.eta = eta;
    try {
      const SpectrumTrace trace = distorted_spectrum(
          ideal, deltas,
          FluctuationSpec{trend, eta, ideal.gamma, options.n_sweeps}, h);
      MasterFitConfig cfg;
      cfg.start = ideal;
      cfg.free = options.free;
      cfg.hilbert = trace.hilbert;
      cfg.options = options.fit;
      const FitResult fit = fit_master_equation(trace, cfg);
      point.kappa_fit = fit.value("kappa");
      point.kappa_stderr = fit.std_error("kappa");
      point.ok = fit.converged;
      if (!fit.converged) point.error = fit.message;
    } catch (const Error& e) {
      point.kappa_fit = std::numeric_limits<double>::quiet_NaN();
      point.kappa_stderr = std::numeric_limits<double>::quiet_NaN();
      point.error = e.what();
    }
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace eitspec
