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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eitspec/errors.hpp"
#include "eitspec/fitting.hpp"

namespace eitspec {
namespace {

struct Problem {
  std::span<const double> y;
  Eigen::VectorXd weights;
  const VectorModel& model;

  // Weighted predictions; empty optional-like flag through finite check.
  Eigen::VectorXd predict(const std::vector<double>& p) const {
    const std::vector<double> f = model(p);
    if (f.size() != y.size()) {
      throw InvalidInput("model returned the wrong number of samples");
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) =
          f[i] * weights(static_cast<Eigen::Index>(i));
    }
    return out;
  }
};

}  // namespace

double information_score(double rss, std::size_t n_samples,
                         std::size_t n_params) {
  const double n = static_cast<double>(n_samples);
  const double k = static_cast<double>(n_params);
  const double floor_rss = std::max(rss, 1e-300);
  double score = 2.0 * k + n * std::log(floor_rss / n);
  if (n - k - 1.0 > 0.0) score += 2.0 * k * (k + 1.0) / (n - k - 1.0);
  return score;
}

double FitResult::value(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw InvalidInput("unknown fit parameter: " + std::string(name));
}

double FitResult::std_error(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return std_errors[i];
  }
  throw InvalidInput("unknown fit parameter: " + std::string(name));
}

double FitResult::information_score() const {
  return eitspec::information_score(rss, n_samples, values.size());
}

FitResult fit_vector_model(const std::string& model_id,
                           std::span<const double> y,
                           std::span<const double> sigma,
                           const VectorModel& model,
                           const std::vector<Parameter>& params,
                           const FitOptions& options) {
  const std::size_t k = params.size();
  const std::size_t n = y.size();
  if (k == 0) throw InvalidInput("fit needs at least one parameter");
  if (n < k) throw InvalidInput("fewer samples than fit parameters");
  if (!sigma.empty() && sigma.size() != n) {
    throw InvalidInput("sigma column length does not match the data");
  }

  Eigen::VectorXd weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i])) {
      throw InvalidInput("sigma values must be positive and finite");
    }
    weights(static_cast<Eigen::Index>(i)) = 1.0 / sigma[i];
  }
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    target(static_cast<Eigen::Index>(i)) =
        y[i] * weights(static_cast<Eigen::Index>(i));
  }

  std::vector<double> p(k), typical(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Parameter& par = params[j];
    if (!std::isfinite(par.value)) {
      throw InvalidInput("initial guess for " + par.name + " is not finite");
    }
    if (par.value < par.lower || par.value > par.upper) {
      throw InvalidInput("initial guess for " + par.name +
                         " is outside its bounds");
    }
    p[j] = par.value;
    typical[j] = par.scale > 0.0 ? par.scale
                                 : (par.value != 0.0 ? std::abs(par.value) : 1.0);
  }

  const Problem problem{y, weights, model};
  auto clamp = [&](std::vector<double>& q) {
    for (std::size_t j = 0; j < k; ++j) {
      q[j] = std::clamp(q[j], params[j].lower, params[j].upper);
    }
  };
  auto residual = [&](const std::vector<double>& q) -> Eigen::VectorXd {
    return target - problem.predict(q);
  };

  // Jacobian of the weighted predictions.
  auto jacobian = [&](const std::vector<double>& q) {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
      const double h =
          options.jacobian_step * std::max(std::abs(q[j]), typical[j]);
      std::vector<double> hi = q, lo = q;
      hi[j] = q[j] + h;
      lo[j] = q[j] - h;
      if (hi[j] > params[j].upper) hi[j] = q[j];
      if (lo[j] < params[j].lower) lo[j] = q[j];
      const double span = hi[j] - lo[j];
      if (span <= 0.0) {
        throw DegenerateFit("parameter " + params[j].name +
                            " is pinned between its bounds");
      }
      Eigen::VectorXd f_hi = problem.predict(hi);
      Eigen::VectorXd f_lo = problem.predict(lo);
      double width = span;
      // Fall back to a one-sided difference when one side is unavailable.
      if (!f_hi.allFinite() && hi[j] != q[j]) {
        f_hi = problem.predict(q);
        width = q[j] - lo[j];
      } else if (!f_lo.allFinite() && lo[j] != q[j]) {
        f_lo = problem.predict(q);
        width = hi[j] - q[j];
      }
      jac.col(static_cast<Eigen::Index>(j)) = (f_hi - f_lo) / width;
    }
    if (!jac.allFinite()) throw DegenerateFit("Jacobian is not finite");
    return jac;
  };

  // Smallest normalized singular value of the Jacobian; a zero column
  // (parameter without effect) throws.
  auto conditioning = [&](const Eigen::MatrixXd& jac) {
    Eigen::MatrixXd normalized = jac;
    for (Eigen::Index j = 0; j < jac.cols(); ++j) {
      const double norm = jac.col(j).norm();
      if (norm == 0.0) {
        throw DegenerateFit("singular Jacobian: parameter " +
                            params[static_cast<std::size_t>(j)].name +
                            " has no effect on the model");
      }
      normalized.col(j) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalized);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) / s(0);
  };
  constexpr double kMinConditioning = 1e-12;

  FitResult result;
  result.model = model_id;
  result.n_samples = n;
  for (const Parameter& par : params) {
    result.names.push_back(par.name);
    result.units.push_back(par.unit);
  }

  Eigen::VectorXd r = residual(p);
  if (!r.allFinite()) {
    throw InvalidInput("model is not finite at the initial guess");
  }
  double rss = r.squaredNorm();
  double damping = options.initial_damping;
  int iter = 0;
  bool converged = false;
  std::string message = "maximum iterations reached";

  while (iter < options.max_iterations) {
    ++iter;
    if (rss == 0.0) {
      converged = true;
      message = "zero residual";
      break;
    }
    const Eigen::MatrixXd jac = jacobian(p);
    if (iter == 1) conditioning(jac);
    const Eigen::VectorXd grad = jac.transpose() * r;
    const Eigen::MatrixXd normal = jac.transpose() * jac;

    double scaled_grad = 0.0;
    for (Eigen::Index j = 0; j < grad.size(); ++j) {
      scaled_grad = std::max(
          scaled_grad, std::abs(grad(j)) / (std::sqrt(normal(j, j) * rss)));
    }
    if (scaled_grad < options.gradient_tolerance) {
      converged = true;
      message = "gradient tolerance reached";
      break;
    }

    bool accepted = false;
    std::vector<double> trial;
    Eigen::VectorXd r_trial;
    double rss_trial = 0.0;
    while (damping <= 1e16) {
      Eigen::MatrixXd lhs = normal;
      const double diag_floor = 1e-12 * normal.diagonal().maxCoeff();
      for (Eigen::Index j = 0; j < lhs.rows(); ++j) {
        lhs(j, j) += damping * std::max(normal(j, j), diag_floor);
      }
      const Eigen::VectorXd step = lhs.ldlt().solve(grad);
      trial = p;
      for (std::size_t j = 0; j < k; ++j) {
        trial[j] += step(static_cast<Eigen::Index>(j));
      }
      clamp(trial);
      if (trial == p) break;
      r_trial = residual(trial);
      rss_trial = r_trial.allFinite() ? r_trial.squaredNorm()
                                      : std::numeric_limits<double>::infinity();
      if (rss_trial < rss) {
        accepted = true;
        break;
      }
      damping *= 10.0;
    }
    if (!accepted) {
      // No damped step lowers the RSS. Accept the point when the undamped
      // Gauss-Newton step is already below the step tolerance (the residual
      // is at its noise floor) or the gradient is negligible.
      const Eigen::VectorXd gn = normal.ldlt().solve(grad);
      double gn_rel = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        gn_rel = std::max(gn_rel, std::abs(gn(static_cast<Eigen::Index>(j))) /
                                      std::max(std::abs(p[j]), typical[j]));
      }
      converged = gn_rel < options.step_tolerance || scaled_grad < 1e-6;
      message = converged ? "no further decrease; at numerical minimum"
                          : "stalled: no decrease at maximal damping";
      break;
    }

    double rel_step = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      rel_step = std::max(rel_step, std::abs(trial[j] - p[j]) /
                                        std::max(std::abs(p[j]), typical[j]));
    }
    p = trial;
    r = r_trial;
    rss = rss_trial;
    damping = std::max(damping * 0.1, 1e-15);
    if (rel_step < options.step_tolerance) {
      converged = true;
      message = "step tolerance reached";
      break;
    }
  }

  result.values = p;
  result.rss = rss;
  result.converged = converged;
  result.iterations = iter;
  result.message = message;

  // Linearized covariance scaled by the residual variance.
  result.std_errors.assign(k, 0.0);
  const Eigen::MatrixXd jac = jacobian(p);
  double cond = 0.0;
  try {
    cond = conditioning(jac);
  } catch (const DegenerateFit&) {
    if (converged) throw;
  }
  if (cond < kMinConditioning) {
    if (converged) {
      throw DegenerateFit(
          "singular Jacobian: parameters are not identifiable at the solution");
    }
    result.message += "; Jacobian is singular at the final point";
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU |
                                                 Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double variance =
      n > k ? rss / static_cast<double>(n - k) : 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < s.size(); ++m) {
      if (s(m) > 1e-14 * s(0)) {
        const double v = svd.matrixV()(static_cast<Eigen::Index>(j), m);
        acc += v * v / (s(m) * s(m));
      }
    }
    result.std_errors[j] = std::sqrt(variance * acc);
  }
  return result;
}

FitResult fit_curve(const std::string& model_id, std::span<const double> x,
                    std::span<const double> y, std::span<const double> sigma,
                    const PointModel& model,
                    const std::vector<Parameter>& params,
                    const FitOptions& options) {
  if (x.size() != y.size()) {
    throw InvalidInput("x and y have different lengths");
  }
  const VectorModel vector_model = [&](const std::vector<double>& p) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = model(x[i], p);
    return out;
  };
  return fit_vector_model(model_id, y, sigma, vector_model, params, options);
}

}  // namespace eitspec
