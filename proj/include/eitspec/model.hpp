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

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace eitspec {

using Complex = std::complex<double>;
using SparseGenerator = Eigen::SparseMatrix<Complex>;

// Rotating-frame parameters for one simulation point. Every value is an
// angular frequency or rate in rad/s.
struct ModelParams {
  double delta = 0.0;       // probe detuning, omega_q - omega_p
  double delta_sb = 0.0;    // sideband detuning, omega_q - omega_t - 2 omega_d
  double chi_qt = 0.0;      // dispersive shift; Hamiltonian term -2 chi sz n
  double omega_sb = 0.0;    // sideband coupling
  double omega_p = 0.0;     // probe amplitude
  double gamma = 1.0;       // qubit energy decay
  double gamma_phi = 0.0;   // qubit pure dephasing
  double kappa = 1.0;       // resonator decay

  // Throws InvalidInput unless gamma, kappa > 0 and omega_sb, omega_p,
  // gamma_phi >= 0 (all finite).
  void validate() const;
};

// Resonator truncation and the self-validation policy applied after every
// steady-state solve.
struct HilbertConfig {
  int fock_dim = 6;
  double top_level_tolerance = 1e-6;
  int max_fock_dim = 20;
  int fock_step = 2;

  void validate() const;
};

// Dense operator on qubit (x) Fock space, index = q * N + n with q = 0 for g
// and q = 1 for e.
using OperatorMatrix = Eigen::MatrixXcd;

inline int basis_index(int qubit, int photons, int fock_dim) {
  return qubit * fock_dim + photons;
}

// Generator acting on column-stacked density matrices:
// vec(rho)[i + D j] = rho(i, j) with D = 2N.
struct Liouvillian {
  SparseGenerator matrix;
  int fock_dim = 0;

  int hilbert_dim() const { return 2 * fock_dim; }
  // Applies the generator to a density matrix and returns d rho / dt.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

OperatorMatrix annihilation(int fock_dim);
OperatorMatrix sigma_minus(int fock_dim);
OperatorMatrix sigma_z(int fock_dim);
OperatorMatrix number_operator(int fock_dim);

OperatorMatrix build_hamiltonian(const ModelParams& p, const HilbertConfig& h);

// L(rho) = -i[H, rho] + (gamma/2) D[s-] + (kappa/2) D[a] + (gamma_phi/4) D[sz]
// with D[O]rho = 2 O rho O^+ - O^+ O rho - rho O^+ O. The dephasing channel
// acts on the qubit so that the coherence decays at gamma/2 + gamma_phi.
Liouvillian build_liouvillian(const OperatorMatrix& hamiltonian,
                              const ModelParams& p);

}  // namespace eitspec
