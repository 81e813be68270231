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

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eitspec/model.hpp"
#include "eitspec/spectrum.hpp"

namespace eitspec {

// A fit parameter with its starting value, box bounds and a typical
// magnitude used for finite-difference steps when the value is near zero.
struct Parameter {
  std::string name;
  std::string unit;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double scale = 0.0;  // 0 = use |value| (or 1 if the value is zero)
};

struct FitOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-8;       // relative parameter step
  double gradient_tolerance = 1e-10;  // scaled gradient (cosine) norm
  double jacobian_step = 1e-6;        // relative central-difference step
  double initial_damping = 1e-3;
};

struct FitResult {
  std::string model;
  std::vector<std::string> names;
  std::vector<std::string> units;
  std::vector<double> values;
  std::vector<double> std_errors;
  double rss = 0.0;  // weighted residual sum of squares
  bool converged = false;
  int iterations = 0;
  std::size_t n_samples = 0;
  std::string message;

  double value(std::string_view name) const;
  double std_error(std::string_view name) const;
  // Small-sample corrected Akaike score 2k + n ln(RSS/n) + 2k(k+1)/(n-k-1).
  double information_score() const;
};

double information_score(double rss, std::size_t n_samples,
                         std::size_t n_params);

// Predictions for every sample given the parameter vector.
using VectorModel =
    std::function<std::vector<double>(const std::vector<double>& params)>;
// Prediction at one abscissa.
using PointModel = std::function<double(double x, std::span<const double>)>;

// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling)
// on a central-difference Jacobian. Parameters are clamped to their bounds.
// Converges on a relative step below options.step_tolerance or a scaled
// gradient below options.gradient_tolerance; hitting max_iterations returns
// a result with converged = false. A parameter with no effect at the
// initial guess, or a rank-deficient Jacobian at a converged solution,
// throws DegenerateFit; a rank-deficient stop without convergence is noted
// in the message.
FitResult fit_vector_model(const std::string& model_id,
                           std::span<const double> y,
                           std::span<const double> sigma,
                           const VectorModel& model,
                           const std::vector<Parameter>& params,
                           const FitOptions& options = {});

FitResult fit_curve(const std::string& model_id, std::span<const double> x,
                    std::span<const double> y, std::span<const double> sigma,
                    const PointModel& model,
                    const std::vector<Parameter>& params,
                    const FitOptions& options = {});

// ---------------------------------------------------------------------------
// Lineshapes.

// C+^2 / (D^2 + g+^2) - C-^2 / (D^2 + g-^2); params {C+, C-, g+, g-}.
double eit_model(double delta, std::span<const double> params);
// C^2 / ((D - D0)^2 + g0) + C^2 / ((D + D0)^2 + g0); params {C, D0, g0}.
// g0 enters unsquared, so its unit is (rad/s)^2.
double ats_model(double delta, std::span<const double> params);
// A / (1 + ((D - c) / (G/2))^2); params {A, c, G} with G the FWHM.
double lorentzian_model(double delta, std::span<const double> params);
// Sum of two lorentzian_model terms; params {A1, c1, G1, A2, c2, G2}.
double double_lorentzian_model(double delta, std::span<const double> params);

enum class LineshapeModel { Lorentzian, EIT, ATS, DoubleLorentzian };

std::string to_string(LineshapeModel m);
LineshapeModel lineshape_from_string(std::string_view name);
PointModel point_model(LineshapeModel m);

// Parameter names, units and bounds for a lineshape, seeded from
// estimate_initial_guess.
std::vector<Parameter> lineshape_parameters(LineshapeModel m,
                                            const std::vector<double>& seed);

// Heuristic seeds from the trace shape. Throws GuessFailure for a
// featureless trace.
std::vector<double> estimate_initial_guess(const SpectrumTrace& trace,
                                           LineshapeModel m);

// Fits a lineshape to a trace, seeding from estimate_initial_guess when
// guess is empty.
FitResult fit_lineshape(const SpectrumTrace& trace, LineshapeModel m,
                        const std::vector<double>& guess = {},
                        const FitOptions& options = {});

struct ModelSelection {
  LineshapeModel selected = LineshapeModel::EIT;
  FitResult eit;
  FitResult ats;
  double eit_score = 0.0;
  double ats_score = 0.0;
  double score_gap = 0.0;  // |eit_score - ats_score|
};

// Fits the EIT and ATS lineshapes and keeps the lower information score.
// Needs at least 20 samples. Throws SelectionFailure if neither fit
// converges.
ModelSelection select_model(const SpectrumTrace& trace,
                            const FitOptions& options = {});

struct TwoPeakMetrics {
  double separation = 0.0;     // distance between the two sampled maxima
  double left_center = 0.0;    // Lorentzian decomposition centres
  double right_center = 0.0;
  double left_width = 0.0;     // Lorentzian decomposition FWHMs
  double right_width = 0.0;
  FitResult fit;
};

// Locates the two highest maxima (refined by a parabola through the
// neighbouring samples) and decomposes the trace into two Lorentzians.
// Throws RegimeError when fewer than two maxima exist.
TwoPeakMetrics measure_two_peaks(const SpectrumTrace& trace,
                                 const FitOptions& options = {});

// ---------------------------------------------------------------------------
// Master-equation fit.

struct MasterFitConfig {
  // Fixed values and starting guesses for the free parameters.
  ModelParams start;
  // Any of kappa, gamma, gamma_phi, omega_sb, delta_sb.
  std::vector<std::string> free = {"kappa", "gamma", "omega_sb", "delta_sb"};
  HilbertConfig hilbert;
  FitOptions options;
};

// Least squares where every model evaluation is a full compute_spectrum at
// the trial parameters. Omega_p and chi_qt stay at their start values.
FitResult fit_master_equation(const SpectrumTrace& trace,
                              const MasterFitConfig& config);

// Copies fitted values from a master-equation FitResult into base.
ModelParams apply_fit(const ModelParams& base, const FitResult& fit);

// Seeds (gamma, kappa, omega_sb, delta_sb) from the trace given the known
// probe amplitude and dispersive shift in `known`. gamma comes from the
// power-broadened overall linewidth; kappa and omega_sb from the dip width
// and the dip-to-baseline ratio of the weak-probe EIT line.
ModelParams estimate_master_guess(const SpectrumTrace& trace,
                                  const ModelParams& known);

// ---------------------------------------------------------------------------
// Reflection lineshape.

struct ReflectionTrace {
  std::vector<double> frequency;  // rad/s, strictly increasing
  std::vector<double> magnitude;
  std::vector<double> sigma;

  std::size_t size() const { return frequency.size(); }
  void validate(std::size_t min_samples = 1) const;
};

struct FanoParams {
  double omega_0 = 0.0;
  double kappa_i = 1.0;
  double kappa_e = 1.0;
  double phi = 0.0;
  double amplitude = 1.0;
  double slope = 0.0;  // linear baseline, 1 / (rad/s)
};

// (A + s (w - w0)) |1 - ke e^{i phi} / (i (w - w0) + (ki + ke)/2)|.
double fano_reflection_model(double omega, const FanoParams& p);

FanoParams estimate_fano_guess(const ReflectionTrace& trace);

// Fits the reflection model; parameter names omega_0, kappa_i, kappa_e, phi,
// amplitude, slope.
FitResult fit_fano(const ReflectionTrace& trace, const FanoParams& guess,
                   const FitOptions& options = {});

}  // namespace eitspec
