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

#include "eitspec/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "eitspec/errors.hpp"

namespace eitspec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Outermost half-maximum crossings of the global peak; falls back to the
// trace edges when a side is not bracketed.
std::pair<double, double> outer_half_max(const std::vector<double>& x,
                                         const std::vector<double>& y) {
  const std::size_t n = y.size();
  const double half = 0.5 * *std::max_element(y.begin(), y.end());
  std::size_t a = 0;
  while (a < n && y[a] < half) ++a;
  std::size_t b = n - 1;
  while (b > 0 && y[b] < half) --b;
  double left = x.front(), right = x.back();
  if (a > 0) {
    left = x[a - 1] + (half - y[a - 1]) * (x[a] - x[a - 1]) / (y[a] - y[a - 1]);
  }
  if (b + 1 < n) {
    right = x[b] + (half - y[b]) * (x[b + 1] - x[b]) / (y[b + 1] - y[b]);
  }
  return {left, right};
}

// Distance from the peak at index i to its half-maximum on one side
// (direction -1 or +1); falls back to the distance to the trace edge.
double side_half_width(const std::vector<double>& x,
                       const std::vector<double>& y, std::size_t i, int dir) {
  const double half = 0.5 * y[i];
  long j = static_cast<long>(i);
  const long n = static_cast<long>(y.size());
  while (j + dir >= 0 && j + dir < n && y[static_cast<std::size_t>(j)] > half) {
    j += dir;
  }
  const auto ju = static_cast<std::size_t>(j);
  if (y[ju] > half) return std::abs(x[ju] - x[i]);
  const auto prev = static_cast<std::size_t>(j - dir);
  const double xc =
      x[prev] + (half - y[prev]) * (x[ju] - x[prev]) / (y[ju] - y[prev]);
  return std::abs(xc - x[i]);
}

void require_features(const SpectrumTrace& trace) {
  trace.validate();
  const auto [lo, hi] =
      std::minmax_element(trace.rho_ee.begin(), trace.rho_ee.end());
  if (!(*hi - *lo > 1e-12 * std::max(1.0, std::abs(*hi))) || !(*hi > 0.0)) {
    throw GuessFailure("trace is featureless; cannot seed a fit");
  }
}

// Maxima indices sorted by decreasing height.
std::vector<std::size_t> maxima_by_height(const std::vector<double>& y) {
  std::vector<std::size_t> idx = local_maxima(y);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  return idx;
}

double parabolic_vertex(const std::vector<double>& x,
                        const std::vector<double>& y, std::size_t i) {
  if (i == 0 || i + 1 >= x.size()) return x[i];
  const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0) return x1;
  const double num =
      (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  return x1 - 0.5 * num / den;
}

struct FieldInfo {
  const char* name;
  double ModelParams::*field;
};

constexpr FieldInfo kMasterFields[] = {
    {"kappa", &ModelParams::kappa},
    {"gamma", &ModelParams::gamma},
    {"gamma_phi", &ModelParams::gamma_phi},
    {"omega_sb", &ModelParams::omega_sb},
    {"delta_sb", &ModelParams::delta_sb},
};

const FieldInfo* find_field(std::string_view name) {
  for (const FieldInfo& f : kMasterFields) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lineshapes.

double eit_model(double delta, std::span<const double> p) {
  const double d2 = delta * delta;
  return p[0] * p[0] / (d2 + p[2] * p[2]) - p[1] * p[1] / (d2 + p[3] * p[3]);
}

double ats_model(double delta, std::span<const double> p) {
  const double c2 = p[0] * p[0];
  const double lo = delta - p[1];
  const double hi = delta + p[1];
  return c2 / (lo * lo + p[2]) + c2 / (hi * hi + p[2]);
}

double lorentzian_model(double delta, std::span<const double> p) {
  const double u = (delta - p[1]) / (0.5 * p[2]);
  return p[0] / (1.0 + u * u);
}

double double_lorentzian_model(double delta, std::span<const double> p) {
  return lorentzian_model(delta, p.subspan(0, 3)) +
         lorentzian_model(delta, p.subspan(3, 3));
}

std::string to_string(LineshapeModel m) {
  switch (m) {
    case LineshapeModel::Lorentzian:
      return "lorentzian";
    case LineshapeModel::EIT:
      return "eit";
    case LineshapeModel::ATS:
      return "ats";
    case LineshapeModel::DoubleLorentzian:
      return "double_lorentzian";
  }
  return "unknown";
}

LineshapeModel lineshape_from_string(std::string_view name) {
  if (name == "lorentzian") return LineshapeModel::Lorentzian;
  if (name == "eit") return LineshapeModel::EIT;
  if (name == "ats") return LineshapeModel::ATS;
  if (name == "double_lorentzian") return LineshapeModel::DoubleLorentzian;
  throw InvalidInput("unknown lineshape model: " + std::string(name));
}

PointModel point_model(LineshapeModel m) {
  switch (m) {
    case LineshapeModel::Lorentzian:
      return lorentzian_model;
    case LineshapeModel::EIT:
      return eit_model;
    case LineshapeModel::ATS:
      return ats_model;
    case LineshapeModel::DoubleLorentzian:
      return double_lorentzian_model;
  }
  throw InvalidInput("unknown lineshape model");
}

std::vector<Parameter> lineshape_parameters(LineshapeModel m,
                                            const std::vector<double>& s) {
  auto positive = [](double v) { return 1e-9 * std::abs(v); };
  switch (m) {
    case LineshapeModel::Lorentzian:
      if (s.size() != 3) break;
      return {{"amplitude", "population", s[0]},
              {"center", "rad/s", s[1], -kInf, kInf, s[2]},
              {"fwhm", "rad/s", s[2], positive(s[2]), kInf}};
    case LineshapeModel::EIT:
      if (s.size() != 4) break;
      return {{"C_plus", "rad/s", s[0]},
              {"C_minus", "rad/s", s[1], -kInf, kInf, s[0]},
              {"gamma_plus", "rad/s", s[2], positive(s[2]), kInf},
              {"gamma_minus", "rad/s", s[3], positive(s[3]), kInf}};
    case LineshapeModel::ATS:
      if (s.size() != 3) break;
      return {{"C", "rad/s", s[0]},
              {"Delta_0", "rad/s", s[1], 0.0, kInf, std::sqrt(s[2])},
              {"gamma_0", "(rad/s)^2", s[2], positive(s[2]), kInf}};
    case LineshapeModel::DoubleLorentzian:
      if (s.size() != 6) break;
      return {{"amplitude_1", "population", s[0]},
              {"center_1", "rad/s", s[1], -kInf, kInf, s[2]},
              {"fwhm_1", "rad/s", s[2], positive(s[2]), kInf},
              {"amplitude_2", "population", s[3]},
              {"center_2", "rad/s", s[4], -kInf, kInf, s[5]},
              {"fwhm_2", "rad/s", s[5], positive(s[5]), kInf}};
  }
  throw InvalidInput("wrong number of seed values for " + to_string(m));
}

std::vector<double> estimate_initial_guess(const SpectrumTrace& trace,
                                           LineshapeModel m) {
  require_features(trace);
  const auto& x = trace.delta;
  const auto& y = trace.rho_ee;
  const auto top = static_cast<std::size_t>(
      std::max_element(y.begin(), y.end()) - y.begin());
  const auto [left, right] = outer_half_max(x, y);
  const double fwhm = std::max(right - left, 1e-6 * (x.back() - x.front()));

  switch (m) {
    case LineshapeModel::Lorentzian:
      return {y[top], parabolic_vertex(x, y, top), fwhm};

    case LineshapeModel::EIT: {
      const double gamma_plus = 0.5 * fwhm;
      double base = y[top];
      double depth = 0.5 * y[top];
      double gamma_minus = 0.05 * fwhm;
      try {
        const DipMetrics dip = measure_dip(trace);
        base = dip.baseline;
        depth = dip.depth;
        gamma_minus = 0.5 * dip.width;
      } catch (const Error&) {
      }
      return {gamma_plus * std::sqrt(base),
              gamma_minus * std::sqrt(std::max(base - depth, 1e-12 * base)),
              gamma_plus, gamma_minus};
    }

    case LineshapeModel::ATS: {
      const std::vector<std::size_t> peaks = maxima_by_height(y);
      if (peaks.size() >= 2) {
        const std::size_t a = std::min(peaks[0], peaks[1]);
        const std::size_t b = std::max(peaks[0], peaks[1]);
        const double xa = parabolic_vertex(x, y, a);
        const double xb = parabolic_vertex(x, y, b);
        const double hw =
            0.5 * (side_half_width(x, y, a, -1) + side_half_width(x, y, b, +1));
        const double g0 = hw * hw;
        const double height = 0.5 * (y[a] + y[b]);
        return {std::sqrt(height * g0), 0.5 * (xb - xa), g0};
      }
      const double hw = 0.5 * fwhm;
      return {std::sqrt(0.5 * y[top] * hw * hw), 0.1 * hw, hw * hw};
    }

    case LineshapeModel::DoubleLorentzian: {
      const std::vector<std::size_t> peaks = maxima_by_height(y);
      if (peaks.size() < 2) {
        throw GuessFailure("double Lorentzian needs two maxima");
      }
      const std::size_t a = std::min(peaks[0], peaks[1]);
      const std::size_t b = std::max(peaks[0], peaks[1]);
      return {y[a], parabolic_vertex(x, y, a), 2.0 * side_half_width(x, y, a, -1),
              y[b], parabolic_vertex(x, y, b), 2.0 * side_half_width(x, y, b, +1)};
    }
  }
  throw InvalidInput("unknown lineshape model");
}

FitResult fit_lineshape(const SpectrumTrace& trace, LineshapeModel m,
                        const std::vector<double>& guess,
                        const FitOptions& options) {
  trace.validate();
  const std::vector<double> seed =
      guess.empty() ? estimate_initial_guess(trace, m) : guess;
  return fit_curve(to_string(m), trace.delta, trace.rho_ee, trace.sigma,
                   point_model(m), lineshape_parameters(m, seed), options);
}

ModelSelection select_model(const SpectrumTrace& trace,
                            const FitOptions& options) {
  trace.validate(20);
  ModelSelection sel;
  std::string eit_error, ats_error;
  bool eit_ok = false, ats_ok = false;
  try {
    sel.eit = fit_lineshape(trace, LineshapeModel::EIT, {}, options);
    eit_ok = sel.eit.converged;
  } catch (const Error& e) {
    eit_error = e.what();
  }
  try {
    sel.ats = fit_lineshape(trace, LineshapeModel::ATS, {}, options);
    ats_ok = sel.ats.converged;
  } catch (const Error& e) {
    ats_error = e.what();
  }
  if (!eit_ok && !ats_ok) {
    throw SelectionFailure("neither the EIT nor the ATS fit converged" +
                           (eit_error.empty() ? "" : "; EIT: " + eit_error) +
                           (ats_error.empty() ? "" : "; ATS: " + ats_error));
  }
  sel.eit_score = eit_ok ? sel.eit.information_score() : kInf;
  sel.ats_score = ats_ok ? sel.ats.information_score() : kInf;
  sel.selected = sel.eit_score <= sel.ats_score ? LineshapeModel::EIT
                                                : LineshapeModel::ATS;
  sel.score_gap = std::abs(sel.eit_score - sel.ats_score);
  return sel;
}

TwoPeakMetrics measure_two_peaks(const SpectrumTrace& trace,
                                 const FitOptions& options) {
  trace.validate();
  const auto& x = trace.delta;
  const auto& y = trace.rho_ee;
  const std::vector<std::size_t> peaks = maxima_by_height(y);
  if (peaks.size() < 2) {
    throw RegimeError("trace has fewer than two maxima");
  }
  const std::size_t a = std::min(peaks[0], peaks[1]);
  const std::size_t b = std::max(peaks[0], peaks[1]);

  TwoPeakMetrics out;
  out.separation = parabolic_vertex(x, y, b) - parabolic_vertex(x, y, a);
  out.fit = fit_lineshape(trace, LineshapeModel::DoubleLorentzian, {}, options);
  double c1 = out.fit.values[1], w1 = out.fit.values[2];
  double c2 = out.fit.values[4], w2 = out.fit.values[5];
  if (c1 > c2) {
    std::swap(c1, c2);
    std::swap(w1, w2);
  }
  out.left_center = c1;
  out.left_width = w1;
  out.right_center = c2;
  out.right_width = w2;
  return out;
}

// ---------------------------------------------------------------------------
// Master-equation fit.

FitResult fit_master_equation(const SpectrumTrace& trace,
                              const MasterFitConfig& config) {
  trace.validate();
  config.start.validate();
  config.hilbert.validate();
  if (config.free.empty()) throw InvalidInput("no free parameters");

  std::vector<Parameter> params;
  std::vector<const FieldInfo*> fields;
  const double rate_scale = config.start.gamma;
  for (const std::string& name : config.free) {
    const FieldInfo* f = find_field(name);
    if (!f) {
      throw InvalidInput("parameter cannot be fitted: " + name +
                         " (choose from kappa, gamma, gamma_phi, omega_sb, "
                         "delta_sb)");
    }
    for (const FieldInfo* seen : fields) {
      if (seen == f) throw InvalidInput("parameter listed twice: " + name);
    }
    fields.push_back(f);
    const double v = config.start.*(f->field);
    Parameter par{name, "rad/s", v};
    if (name == "kappa" || name == "gamma") {
      par.lower = 1e-6 * v;
    } else if (name == "gamma_phi" || name == "omega_sb") {
      par.lower = 0.0;
      par.scale = std::max(std::abs(v), 1e-3 * rate_scale);
    } else {
      par.scale = std::max(std::abs(v), 1e-2 * rate_scale);
    }
    params.push_back(par);
  }

  HilbertConfig current = config.hilbert;
  bool first_call = true;
  const VectorModel model = [&](const std::vector<double>& values) {
    ModelParams q = config.start;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      q.*(fields[j]->field) = values[j];
    }
    SpectrumTrace s;
    try {
      s = compute_spectrum(q, trace.delta, current);
    } catch (const TruncationInsufficient&) {
      // A trial step into a region the truncation cannot resolve is
      // rejected by the engine; the starting point must be resolvable.
      if (first_call) throw;
      return std::vector<double>(trace.delta.size(),
                                 std::numeric_limits<double>::quiet_NaN());
    }
    first_call = false;
    // Never shrink the truncation mid-fit so successive evaluations share N.
    current.fock_dim = std::max(current.fock_dim, s.hilbert.fock_dim);
    return s.rho_ee;
  };
  FitResult out = fit_vector_model("master_equation", trace.rho_ee,
                                   trace.sigma, model, params, config.options);
  return out;
}

ModelParams apply_fit(const ModelParams& base, const FitResult& fit) {
  ModelParams out = base;
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    if (const FieldInfo* f = find_field(fit.names[i])) {
      out.*(f->field) = fit.values[i];
    }
  }
  return out;
}

ModelParams estimate_master_guess(const SpectrumTrace& trace,
                                  const ModelParams& known) {
  require_features(trace);
  const auto [left, right] = outer_half_max(trace.delta, trace.rho_ee);
  const double h = right - left;
  DipMetrics dip;
  try {
    dip = measure_dip(trace);
  } catch (const Error& e) {
    throw GuessFailure(std::string("cannot seed master-equation fit: ") +
                       e.what());
  }
  ModelParams out = known;
  // FWHM^2 = gamma^2 + 2 Omega_p^2 for a driven two-level line.
  const double g2 = h * h - 2.0 * known.omega_p * known.omega_p;
  out.gamma = std::sqrt(std::max(g2, 0.0625 * h * h));
  // Weak-probe EIT: d / baseline = 1 / (1 + X)^2 with X = Omega_sb^2 /
  // (gamma kappa), and dip FWHM ~ kappa (1 + X).
  const double ratio =
      dip.depth > 0.0 ? std::sqrt(dip.baseline / dip.depth) - 1.0 : 10.0;
  const double x = std::clamp(ratio, 1e-3, 1e3);
  out.kappa = dip.width / (1.0 + x);
  out.omega_sb = std::sqrt(x * out.gamma * out.kappa);
  out.gamma_phi = known.gamma_phi;
  // The two-photon resonance sits at Delta = delta_sb - 2 chi.
  out.delta_sb = dip.center + 2.0 * known.chi_qt;
  return out;
}

// ---------------------------------------------------------------------------
// Reflection lineshape.

void ReflectionTrace::validate(std::size_t min_samples) const {
  if (frequency.size() != magnitude.size()) {
    throw InvalidInput("reflection trace columns have different lengths");
  }
  if (!sigma.empty() && sigma.size() != frequency.size()) {
    throw InvalidInput("sigma column length does not match the trace");
  }
  if (frequency.size() < min_samples) {
    throw InvalidInput("reflection trace has too few samples");
  }
  for (std::size_t i = 1; i < frequency.size(); ++i) {
    if (!(frequency[i] > frequency[i - 1])) {
      throw InvalidInput("reflection frequencies are not strictly increasing");
    }
  }
}

double fano_reflection_model(double omega, const FanoParams& p) {
  using C = std::complex<double>;
  const double detuning = omega - p.omega_0;
  const C coupling = p.kappa_e * std::exp(C(0.0, p.phi));
  const C denom(0.5 * (p.kappa_i + p.kappa_e), detuning);
  return (p.amplitude + p.slope * detuning) * std::abs(1.0 - coupling / denom);
}

FanoParams estimate_fano_guess(const ReflectionTrace& trace) {
  trace.validate(8);
  const auto& w = trace.frequency;
  const auto& m = trace.magnitude;
  const std::size_t n = m.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 20);
  double level = 0.0;
  for (std::size_t i = 0; i < edge; ++i) level += m[i] + m[n - 1 - i];
  level /= 2.0 * static_cast<double>(edge);

  const auto lowest = static_cast<std::size_t>(
      std::min_element(m.begin(), m.end()) - m.begin());
  const double depth = 1.0 - m[lowest] / level;
  if (!(depth > 1e-9)) throw GuessFailure("reflection trace has no dip");

  std::vector<double> dip(n);
  for (std::size_t i = 0; i < n; ++i) dip[i] = level - m[i];
  const auto [left, right] = outer_half_max(w, dip);
  const double kappa = std::max(right - left, 1e-9 * (w.back() - w.front()));

  FanoParams g;
  g.omega_0 = w[lowest];
  g.kappa_e = std::clamp(0.5 * depth * kappa, 1e-6 * kappa, 0.5 * kappa);
  g.kappa_i = kappa - g.kappa_e;
  g.phi = 0.0;
  g.amplitude = level;
  g.slope = 0.0;
  return g;
}

FitResult fit_fano(const ReflectionTrace& trace, const FanoParams& guess,
                   const FitOptions& options) {
  trace.validate(6);
  // Fit the resonance offset from the middle of the sweep so that the
  // finite-difference step on omega_0 stays small compared with kappa.
  const double ref = 0.5 * (trace.frequency.front() + trace.frequency.back());
  const double kappa = guess.kappa_i + guess.kappa_e;
  const double span = trace.frequency.back() - trace.frequency.front();
  const std::vector<Parameter> params = {
      {"omega_0", "rad/s", guess.omega_0 - ref, -kInf, kInf, kappa},
      {"kappa_i", "rad/s", guess.kappa_i, 1e-9 * kappa, kInf},
      {"kappa_e", "rad/s", guess.kappa_e, 1e-9 * kappa, kInf},
      {"phi", "rad", guess.phi, -std::numbers::pi, std::numbers::pi, 1.0},
      {"amplitude", "magnitude", guess.amplitude, -kInf, kInf,
       std::max(std::abs(guess.amplitude), 1e-12)},
      {"slope", "1/(rad/s)", guess.slope, -kInf, kInf,
       std::abs(guess.amplitude) / span},
  };
  const PointModel model = [ref](double omega, std::span<const double> p) {
    return fano_reflection_model(
        omega, FanoParams{p[0] + ref, p[1], p[2], p[3], p[4], p[5]});
  };
  FitResult out = fit_curve("fano", trace.frequency, trace.magnitude,
                            trace.sigma, model, params, options);
  out.values[0] += ref;
  return out;
}

}  // namespace eitspec
