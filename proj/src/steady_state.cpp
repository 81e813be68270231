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

#include "eitspec/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "eitspec/errors.hpp"

namespace eitspec {
namespace {

void check_compatible(const Liouvillian& L, const DensityMatrix& rho) {
  if (L.fock_dim != rho.fock_dim ||
      rho.matrix.rows() != rho.hilbert_dim() ||
      rho.matrix.cols() != rho.hilbert_dim()) {
    throw InvalidDimension("density matrix does not match the Liouvillian");
  }
}

}  // namespace

DensityMatrix DensityMatrix::basis_state(int qubit, int photons,
                                         int fock_dim) {
  if (fock_dim < 2) throw InvalidDimension("Fock dimension must be >= 2");
  if (qubit < 0 || qubit > 1 || photons < 0 || photons >= fock_dim) {
    throw InvalidInput("basis state out of range");
  }
  DensityMatrix rho;
  rho.fock_dim = fock_dim;
  rho.matrix = Eigen::MatrixXcd::Zero(2 * fock_dim, 2 * fock_dim);
  const int i = basis_index(qubit, photons, fock_dim);
  rho.matrix(i, i) = 1.0;
  return rho;
}

DensityMatrix solve_steady_state(const Liouvillian& L,
                                 double top_level_tolerance) {
  const int dim = L.hilbert_dim();
  const Eigen::Index n_vec = static_cast<Eigen::Index>(dim) * dim;
  if (dim < 4 || L.matrix.rows() != n_vec || L.matrix.cols() != n_vec) {
    throw InvalidDimension("Liouvillian has inconsistent dimensions");
  }

  // Real coordinates of a Hermitian matrix: rho(i,i) for each i, then
  // (Re rho(i,j), Im rho(i,j)) for i < j.
  struct Coord {
    int i, j;
    int part;  // 0 diagonal, 1 real, 2 imaginary
  };
  std::vector<Coord> coords;
  coords.reserve(static_cast<size_t>(n_vec));
  // first[i + dim*j] is the coordinate index of rho(min, min) / Re rho(i<j).
  std::vector<Eigen::Index> first(static_cast<size_t>(n_vec), -1);
  for (int i = 0; i < dim; ++i) {
    first[static_cast<size_t>(i) * (dim + 1)] =
        static_cast<Eigen::Index>(coords.size());
    coords.push_back({i, i, 0});
  }
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < j; ++i) {
      first[static_cast<size_t>(i) + static_cast<size_t>(dim) * j] =
          static_cast<Eigen::Index>(coords.size());
      coords.push_back({i, j, 1});
      coords.push_back({i, j, 2});
    }
  }
  const Complex im(0.0, 1.0);

  // d rho(a,b)/dt = sum_c L(r, c) rho_c. Each rho_c is a combination of at
  // most two real coordinates; each equation with a <= b gives one or two
  // real rows.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(L.matrix.nonZeros()) * 2 + dim);
  for (Eigen::Index col = 0; col < L.matrix.outerSize(); ++col) {
    const int ci = static_cast<int>(col % dim), cj = static_cast<int>(col / dim);
    Eigen::Index k_re;
    Complex c_re, c_im(0.0, 0.0);
    if (ci == cj) {
      k_re = first[static_cast<size_t>(col)];
      c_re = 1.0;
    } else if (ci < cj) {
      k_re = first[static_cast<size_t>(col)];
      c_re = 1.0;
      c_im = im;
    } else {
      k_re = first[static_cast<size_t>(cj) + static_cast<size_t>(dim) * ci];
      c_re = 1.0;
      c_im = -im;
    }
    for (SparseGenerator::InnerIterator it(L.matrix, col); it; ++it) {
      const int a = static_cast<int>(it.row() % dim);
      const int b = static_cast<int>(it.row() / dim);
      if (a > b) continue;
      const Eigen::Index row = first[static_cast<size_t>(it.row())];
      if (row == 0) continue;  // replaced by the trace condition
      const Complex v_re = it.value() * c_re;
      const Complex v_im = it.value() * c_im;
      triplets.emplace_back(row, k_re, v_re.real());
      if (ci != cj) triplets.emplace_back(row, k_re + 1, v_im.real());
      if (a != b) {
        triplets.emplace_back(row + 1, k_re, v_re.imag());
        if (ci != cj) triplets.emplace_back(row + 1, k_re + 1, v_im.imag());
      }
    }
  }
  for (int i = 0; i < dim; ++i) triplets.emplace_back(0, i, 1.0);
  Eigen::SparseMatrix<double> real_gen(n_vec, n_vec);
  real_gen.setFromTriplets(triplets.begin(), triplets.end());
  real_gen.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_vec);
  rhs(0) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(real_gen);
  if (lu.info() != Eigen::Success) {
    throw NoUniqueSteadyState("steady-state linear system is singular");
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw NoUniqueSteadyState("steady-state linear system is singular");
  }

  DensityMatrix rho;
  rho.fock_dim = L.fock_dim;
  rho.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (size_t k = 0; k < coords.size(); ++k) {
    const Coord& c = coords[k];
    const double v = x(static_cast<Eigen::Index>(k));
    switch (c.part) {
      case 0:
        rho.matrix(c.i, c.i) = v;
        break;
      case 1:
        rho.matrix(c.i, c.j) += v;
        rho.matrix(c.j, c.i) += v;
        break;
      default:
        rho.matrix(c.i, c.j) += im * v;
        rho.matrix(c.j, c.i) -= im * v;
        break;
    }
  }

  const double residual = steady_state_residual(L, rho);
  if (!(residual <= 1e-10)) {
    std::ostringstream msg;
    msg << "no unique steady state: relative residual " << residual;
    throw NoUniqueSteadyState(msg.str());
  }
  const double top = top_fock_population(rho);
  if (top >= top_level_tolerance) {
    std::ostringstream msg;
    msg << "Fock truncation N=" << L.fock_dim
        << " insufficient: top-level population " << top;
    throw TruncationInsufficient(msg.str(), top, L.fock_dim);
  }
  return rho;
}

double steady_state_residual(const Liouvillian& L, const DensityMatrix& rho) {
  check_compatible(L, rho);
  const double l_norm = L.matrix.norm();
  const double rho_norm = rho.matrix.norm();
  if (l_norm == 0.0 || rho_norm == 0.0) return 0.0;
  return L.apply(rho.matrix).norm() / (l_norm * rho_norm);
}

SteadyStateSolution solve_adaptive(const ModelParams& p,
                                   const HilbertConfig& h) {
  h.validate();
  HilbertConfig trial = h;
  for (;;) {
    const Liouvillian L = build_liouvillian(build_hamiltonian(p, trial), p);
    try {
      return {solve_steady_state(L, h.top_level_tolerance), trial.fock_dim};
    } catch (const TruncationInsufficient& e) {
      if (trial.fock_dim + h.fock_step > h.max_fock_dim) {
        std::ostringstream msg;
        msg << "Fock truncation insufficient up to N=" << trial.fock_dim
            << " (cap " << h.max_fock_dim << "): top-level population "
            << e.top_population();
        throw TruncationInsufficient(msg.str(), e.top_population(),
                                     trial.fock_dim);
      }
      trial.fock_dim += h.fock_step;
    }
  }
}

double qubit_excited_population(const DensityMatrix& rho) {
  const int n_fock = rho.fock_dim;
  double sum = 0.0;
  for (int n = 0; n < n_fock; ++n) {
    const int i = basis_index(1, n, n_fock);
    sum += rho.matrix(i, i).real();
  }
  return sum;
}

double mean_photon_number(const DensityMatrix& rho) {
  const int n_fock = rho.fock_dim;
  double sum = 0.0;
  for (int q = 0; q < 2; ++q) {
    for (int n = 0; n < n_fock; ++n) {
      const int i = basis_index(q, n, n_fock);
      sum += n * rho.matrix(i, i).real();
    }
  }
  return sum;
}

double top_fock_population(const DensityMatrix& rho) {
  const int top = rho.fock_dim - 1;
  return rho.matrix(basis_index(0, top, rho.fock_dim),
                    basis_index(0, top, rho.fock_dim)).real() +
         rho.matrix(basis_index(1, top, rho.fock_dim),
                    basis_index(1, top, rho.fock_dim)).real();
}

double min_eigenvalue(const DensityMatrix& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho.matrix + rho.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix propagate(const DensityMatrix& rho0, const Liouvillian& L,
                        double t, const PropagateOptions& opts) {
  check_compatible(L, rho0);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidInput("propagation time must be finite and >= 0");
  }
  if (t == 0.0) return rho0;

  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  const SparseGenerator& gen = L.matrix;
  const Eigen::Index n = gen.rows();
  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.matrix.data(), n);
  Eigen::VectorXcd k1 = gen * y, k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXcd y_new(n), err(n);

  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(gen.rows());
  for (Eigen::Index col = 0; col < gen.outerSize(); ++col) {
    for (SparseGenerator::InnerIterator it(gen, col); it; ++it) {
      row_sums(it.row()) += std::abs(it.value());
    }
  }
  const double gen_scale = row_sums.maxCoeff();
  double h = std::min(t, 0.1 / std::max(gen_scale, 1e-300));
  double now = 0.0;
  long steps = 0;
  while (now < t) {
    if (++steps > opts.max_steps) {
      throw IntegrationFailure("propagation exceeded the step budget");
    }
    if (now + h > t) h = t - now;
    k2 = gen * (y + h * a21 * k1);
    k3 = gen * (y + h * (a31 * k1 + a32 * k2));
    k4 = gen * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = gen * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = gen * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                         a65 * k5));
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = gen * y_new;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale =
          opts.tolerance *
          (1.0 + std::max(std::abs(y(i)), std::abs(y_new(i))));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }
    if (err_norm <= 1.0) {
      now += h;
      y.swap(y_new);
      k1 = k7;  // first-same-as-last
    }
    const double factor =
        err_norm == 0.0 ? 5.0
                        : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h *= factor;
    if (now < t && h < opts.min_step_fraction * t) {
      throw IntegrationFailure("step size underflow during propagation");
    }
  }

  DensityMatrix out;
  out.fock_dim = rho0.fock_dim;
  out.matrix = Eigen::Map<Eigen::MatrixXcd>(y.data(), rho0.hilbert_dim(),
                                            rho0.hilbert_dim());
  return out;
}

}  // namespace eitspec
