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

#include "eitspec/model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "eitspec/errors.hpp"

namespace eitspec {
namespace {

void check_dim(int fock_dim) {
  if (fock_dim < 2) {
    throw InvalidDimension("Fock dimension must be >= 2, got " +
                           std::to_string(fock_dim));
  }
}

// Sparse Kronecker product A (x) B, accumulated into triplets with a factor.
void kron_into(std::vector<Eigen::Triplet<Complex>>& out, Complex factor,
               const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::Index rb = b.rows(), cb = b.cols();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex aij = a(i, j);
      if (aij == 0.0) continue;
      for (Eigen::Index l = 0; l < cb; ++l) {
        for (Eigen::Index k = 0; k < rb; ++k) {
          const Complex bkl = b(k, l);
          if (bkl == 0.0) continue;
          out.emplace_back(i * rb + k, j * cb + l, factor * aij * bkl);
        }
      }
    }
  }
}

// Adds rate * (2 O (x) O - I (x) O^+O - (O^+O)^T (x) I) in column-stacked
// form: vec(A X B) = (B^T (x) A) vec(X).
void add_dissipator(std::vector<Eigen::Triplet<Complex>>& out,
                    const OperatorMatrix& op, double rate) {
  if (rate == 0.0) return;
  const Eigen::Index dim = op.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd odo = op.adjoint() * op;
  kron_into(out, 2.0 * rate, op.conjugate(), op);
  kron_into(out, -rate, id, odo);
  kron_into(out, -rate, odo.transpose(), id);
}

}  // namespace

void ModelParams::validate() const {
  const double all[] = {delta,   delta_sb,  chi_qt, omega_sb,
                        omega_p, gamma,     gamma_phi, kappa};
  for (double v : all) {
    if (!std::isfinite(v)) throw InvalidInput("model parameter is not finite");
  }
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  if (!(kappa > 0.0)) throw InvalidInput("kappa must be > 0");
  if (omega_sb < 0.0) throw InvalidInput("omega_sb must be >= 0");
  if (omega_p < 0.0) throw InvalidInput("omega_p must be >= 0");
  if (gamma_phi < 0.0) throw InvalidInput("gamma_phi must be >= 0");
}

void HilbertConfig::validate() const {
  check_dim(fock_dim);
  if (max_fock_dim < fock_dim) {
    throw InvalidDimension("max_fock_dim must be >= fock_dim");
  }
  if (fock_step < 1) throw InvalidDimension("fock_step must be >= 1");
  if (!(top_level_tolerance > 0.0)) {
    throw InvalidInput("top_level_tolerance must be > 0");
  }
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
  const int dim = hilbert_dim();
  if (rho.rows() != dim || rho.cols() != dim) {
    throw InvalidDimension("density matrix does not match the Liouvillian");
  }
  const Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
  Eigen::VectorXcd out = matrix * v;
  return Eigen::Map<Eigen::MatrixXcd>(out.data(), dim, dim);
}

OperatorMatrix annihilation(int fock_dim) {
  check_dim(fock_dim);
  OperatorMatrix a = OperatorMatrix::Zero(2 * fock_dim, 2 * fock_dim);
  for (int q = 0; q < 2; ++q) {
    for (int n = 1; n < fock_dim; ++n) {
      a(basis_index(q, n - 1, fock_dim), basis_index(q, n, fock_dim)) =
          std::sqrt(static_cast<double>(n));
    }
  }
  return a;
}

OperatorMatrix sigma_minus(int fock_dim) {
  check_dim(fock_dim);
  OperatorMatrix s = OperatorMatrix::Zero(2 * fock_dim, 2 * fock_dim);
  for (int n = 0; n < fock_dim; ++n) {
    s(basis_index(0, n, fock_dim), basis_index(1, n, fock_dim)) = 1.0;
  }
  return s;
}

OperatorMatrix sigma_z(int fock_dim) {
  check_dim(fock_dim);
  OperatorMatrix s = OperatorMatrix::Zero(2 * fock_dim, 2 * fock_dim);
  for (int n = 0; n < fock_dim; ++n) {
    s(basis_index(0, n, fock_dim), basis_index(0, n, fock_dim)) = -1.0;
    s(basis_index(1, n, fock_dim), basis_index(1, n, fock_dim)) = 1.0;
  }
  return s;
}

OperatorMatrix number_operator(int fock_dim) {
  check_dim(fock_dim);
  OperatorMatrix s = OperatorMatrix::Zero(2 * fock_dim, 2 * fock_dim);
  for (int q = 0; q < 2; ++q) {
    for (int n = 0; n < fock_dim; ++n) {
      s(basis_index(q, n, fock_dim), basis_index(q, n, fock_dim)) = n;
    }
  }
  return s;
}

OperatorMatrix build_hamiltonian(const ModelParams& p, const HilbertConfig& h) {
  p.validate();
  const int n_fock = h.fock_dim;
  check_dim(n_fock);
  const int dim = 2 * n_fock;
  OperatorMatrix ham = OperatorMatrix::Zero(dim, dim);
  // Diagonal: (Delta/2) sz + (Delta - delta) n - 2 chi sz n.
  for (int q = 0; q < 2; ++q) {
    const double sz = q == 1 ? 1.0 : -1.0;
    for (int n = 0; n < n_fock; ++n) {
      const int i = basis_index(q, n, n_fock);
      ham(i, i) = 0.5 * p.delta * sz + (p.delta - p.delta_sb) * n -
                  2.0 * p.chi_qt * sz * n;
    }
  }
  // Sideband (Omega_sb/2)(a s+ + a^+ s-): couples |g, n+1> and |e, n>.
  for (int n = 0; n + 1 < n_fock; ++n) {
    const int e_n = basis_index(1, n, n_fock);
    const int g_n1 = basis_index(0, n + 1, n_fock);
    const double c = 0.5 * p.omega_sb * std::sqrt(static_cast<double>(n + 1));
    ham(e_n, g_n1) = c;
    ham(g_n1, e_n) = c;
  }
  // Probe (Omega_p/2)(s+ + s-).
  for (int n = 0; n < n_fock; ++n) {
    const int g = basis_index(0, n, n_fock);
    const int e = basis_index(1, n, n_fock);
    ham(e, g) = 0.5 * p.omega_p;
    ham(g, e) = 0.5 * p.omega_p;
  }
  return ham;
}

Liouvillian build_liouvillian(const OperatorMatrix& hamiltonian,
                              const ModelParams& p) {
  p.validate();
  const Eigen::Index dim = hamiltonian.rows();
  if (dim != hamiltonian.cols() || dim < 4 || dim % 2 != 0) {
    throw InvalidDimension("Hamiltonian must be square with dimension 2N");
  }
  const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() >
      1e-12 * scale) {
    throw InvalidInput("Hamiltonian is not Hermitian");
  }
  const int n_fock = static_cast<int>(dim / 2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Complex minus_i(0.0, -1.0);

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<size_t>(dim * dim) * 16);
  kron_into(triplets, minus_i, id, hamiltonian);
  kron_into(triplets, -minus_i, hamiltonian.transpose(), id);
  add_dissipator(triplets, sigma_minus(n_fock), 0.5 * p.gamma);
  add_dissipator(triplets, annihilation(n_fock), 0.5 * p.kappa);
  add_dissipator(triplets, sigma_z(n_fock), 0.25 * p.gamma_phi);

  Liouvillian out;
  out.fock_dim = n_fock;
  out.matrix.resize(dim * dim, dim * dim);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.prune(Complex(0.0, 0.0));
  return out;
}

}  // namespace eitspec
