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

#include "eitspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eitspec/errors.hpp"
#include "eitspec/steady_state.hpp"
#include "eitspec/units.hpp"
#include "parallel.hpp"

namespace eitspec {
namespace {

[[noreturn]] void rethrow_annotated(std::exception_ptr err, double delta) {
  std::ostringstream prefix;
  prefix << "at delta = " << units::angular_to_khz(delta) << " kHz: ";
  try {
    std::rethrow_exception(err);
  } catch (const TruncationInsufficient& e) {
    throw TruncationInsufficient(prefix.str() + e.what(), e.top_population(),
                                 e.fock_dim());
  } catch (const NoUniqueSteadyState& e) {
    throw NoUniqueSteadyState(prefix.str() + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(prefix.str() + e.what());
  } catch (const InvalidDimension& e) {
    throw InvalidDimension(prefix.str() + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix.str() + e.what());
  }
}

// x where the segment (x0, y0)-(x1, y1) crosses level.
double crossing(double x0, double y0, double x1, double y1, double level) {
  if (y1 == y0) return 0.5 * (x0 + x1);
  return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::EIT:
      return "EIT";
    case Regime::ATS:
      return "ATS";
    case Regime::INTERMEDIATE:
      return "INTERMEDIATE";
  }
  return "UNKNOWN";
}

void SpectrumTrace::validate(std::size_t min_samples) const {
  if (delta.size() != rho_ee.size()) {
    throw InvalidInput("trace columns have different lengths");
  }
  if (!sigma.empty() && sigma.size() != delta.size()) {
    throw InvalidInput("sigma column length does not match the trace");
  }
  if (delta.size() < min_samples) {
    std::ostringstream msg;
    msg << "trace has " << delta.size() << " samples, need at least "
        << min_samples;
    throw InvalidInput(msg.str());
  }
  for (std::size_t i = 1; i < delta.size(); ++i) {
    if (!(delta[i] > delta[i - 1])) {
      throw InvalidInput("trace detunings are not strictly increasing");
    }
  }
}

SpectrumTrace compute_spectrum(const ModelParams& p,
                               const std::vector<double>& deltas,
                               const HilbertConfig& h) {
  h.validate();
  if (deltas.empty()) throw InvalidInput("detuning list is empty");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] > deltas[i - 1])) {
      throw InvalidInput("detunings must be sorted and distinct");
    }
  }
  ModelParams base = p;
  base.delta = 0.0;
  base.validate();

  HilbertConfig trial = h;
  std::vector<double> pop(deltas.size());
  for (;;) {
    const auto errors = detail::parallel_for(deltas.size(), [&](std::size_t i) {
      ModelParams q = base;
      q.delta = deltas[i];
      const Liouvillian L = build_liouvillian(build_hamiltonian(q, trial), q);
      pop[i] = qubit_excited_population(
          solve_steady_state(L, trial.top_level_tolerance));
    });
    std::size_t bad = 0;
    const std::exception_ptr err = detail::first_error(errors, &bad);
    if (!err) break;
    bool grow = false;
    try {
      std::rethrow_exception(err);
    } catch (const TruncationInsufficient&) {
      grow = trial.fock_dim + trial.fock_step <= trial.max_fock_dim;
    } catch (...) {
    }
    if (!grow) rethrow_annotated(err, deltas[bad]);
    trial.fock_dim += trial.fock_step;
  }

  SpectrumTrace trace;
  trace.delta = deltas;
  trace.rho_ee = std::move(pop);
  trace.params = base;
  trace.hilbert = trial;
  return trace;
}

std::vector<SpectrumTrace> compute_detuning_map(
    const ModelParams& p, const std::vector<double>& deltas,
    const std::vector<double>& delta_sbs, const HilbertConfig& h) {
  std::vector<SpectrumTrace> out;
  out.reserve(delta_sbs.size());
  for (double d : delta_sbs) {
    ModelParams q = p;
    q.delta_sb = d;
    out.push_back(compute_spectrum(q, deltas, h));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> default_sweep(const ModelParams& p) {
  const double span = units::khz_to_angular(1500.0);
  std::vector<double> grid = linspace(-span, span, 401);
  double w = 0.0;
  try {
    w = analytic_dip_width(p.gamma, p.gamma_phi, p.kappa, p.omega_sb);
  } catch (const RegimeError&) {
    w = 0.0;
  }
  if (w > 0.0) {
    const std::vector<double> inner = linspace(-3.0 * w, 3.0 * w, 101);
    grid.insert(grid.end(), inner.begin(), inner.end());
    std::sort(grid.begin(), grid.end());
    const double min_gap = 1e-9 * span;
    std::vector<double> merged;
    for (double x : grid) {
      if (merged.empty() || x - merged.back() > min_gap) merged.push_back(x);
    }
    grid = std::move(merged);
  }
  return grid;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      std::size_t j = i;
      while (j + 1 < y.size() && y[j + 1] == y[i]) ++j;
      if (j + 1 < y.size() && y[j + 1] < y[i]) out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> local_minima(const std::vector<double>& y) {
  std::vector<double> neg(y.size());
  std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });
  return local_maxima(neg);
}

DipMetrics measure_dip(const SpectrumTrace& trace) {
  trace.validate();
  const auto& x = trace.delta;
  const auto& y = trace.rho_ee;
  const std::size_t n = y.size();

  const std::vector<std::size_t> minima = local_minima(y);
  if (minima.empty()) {
    throw NotInEitRegime("trace has no interior local minimum (no dip)");
  }

  // Pick the minimum with the largest drop below its baseline.
  std::size_t best = n;
  std::size_t best_l = 0, best_r = 0;
  double best_drop = 0.0;
  for (std::size_t c : minima) {
    const auto l = static_cast<std::size_t>(
        std::max_element(y.begin(), y.begin() + static_cast<long>(c)) -
        y.begin());
    const auto r = static_cast<std::size_t>(
        std::max_element(y.begin() + static_cast<long>(c) + 1, y.end()) -
        y.begin());
    if (!(y[l] > y[c] && y[r] > y[c])) continue;
    const double base = y[l] + (y[r] - y[l]) * (x[c] - x[l]) / (x[r] - x[l]);
    const double drop = base - y[c];
    if (drop > best_drop) {
      best_drop = drop;
      best = c;
      best_l = l;
      best_r = r;
    }
  }
  if (best == n) {
    throw NotInEitRegime("no interior minimum flanked by two maxima");
  }

  const std::size_t c = best, l = best_l, r = best_r;
  auto baseline = [&](std::size_t i) {
    return y[l] + (y[r] - y[l]) * (x[i] - x[l]) / (x[r] - x[l]);
  };
  auto dip = [&](std::size_t i) { return baseline(i) - y[i]; };
  const double half = 0.5 * dip(c);

  std::size_t i = c;
  while (i > l && dip(i) > half) --i;
  const double x_left = crossing(x[i], dip(i), x[i + 1], dip(i + 1), half);
  std::size_t j = c;
  while (j < r && dip(j) > half) ++j;
  const double x_right = crossing(x[j - 1], dip(j - 1), x[j], dip(j), half);

  const auto inside = std::count_if(x.begin(), x.end(), [&](double v) {
    return v >= x_left && v <= x_right;
  });
  if (inside < 9) {
    std::ostringstream msg;
    msg << "only " << inside << " samples inside the dip FWHM, need 9";
    throw NeedsFinerGrid(msg.str());
  }

  // Overall peak FWHM from the outermost half-maximum crossings.
  const double peak = *std::max_element(y.begin(), y.end());
  const double peak_half = 0.5 * peak;
  std::size_t a = 0;
  while (a < n && y[a] < peak_half) ++a;
  std::size_t b = n - 1;
  while (b > 0 && y[b] < peak_half) --b;
  if (a == 0 || b == n - 1) {
    throw NeedsFinerGrid("trace does not bracket the peak half-maximum");
  }
  const double h_left = crossing(x[a - 1], y[a - 1], x[a], y[a], peak_half);
  const double h_right = crossing(x[b], y[b], x[b + 1], y[b + 1], peak_half);

  DipMetrics m;
  m.width = x_right - x_left;
  m.depth = y[c];
  m.total_linewidth = h_right - h_left;
  m.center = x[c];
  m.baseline = baseline(c);
  return m;
}

double analytic_dip_width(double gamma, double gamma_phi, double kappa,
                          double omega_sb) {
  const double s = gamma + 2.0 * gamma_phi + kappa;
  const double disc = s * s - omega_sb * omega_sb;
  if (disc < 0.0) {
    throw RegimeError(
        "analytic dip width undefined: Omega_sb exceeds gamma + 2 gamma_phi "
        "+ kappa");
  }
  // S - sqrt(S^2 - W^2) written without cancellation.
  const double denom = s + std::sqrt(disc);
  return denom == 0.0 ? 0.0 : omega_sb * omega_sb / denom;
}

AtsPeaks ats_peak_metrics(double gamma, double gamma_phi, double kappa,
                          double omega_sb) {
  return {omega_sb, 0.5 * (gamma + 2.0 * gamma_phi + kappa)};
}

Regime classify_regime(double gamma, double gamma_phi, double kappa,
                       double omega_sb) {
  const double qubit = gamma + 2.0 * gamma_phi;
  const double gap = std::abs(qubit - kappa);
  if (std::abs(gap - omega_sb) <= 1e-9 * std::max(gap, omega_sb)) {
    return Regime::INTERMEDIATE;
  }
  if (gap < omega_sb) return Regime::ATS;
  if (qubit > kappa) return Regime::EIT;
  return Regime::INTERMEDIATE;
}

}  // namespace eitspec
