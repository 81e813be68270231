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

#include "eitspec/model.hpp"

namespace eitspec {

// Density matrix on qubit (x) Fock space, same basis ordering as
// OperatorMatrix.
struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  int fock_dim = 0;

  int hilbert_dim() const { return 2 * fock_dim; }

  // |q, n><q, n| for q in {0 = g, 1 = e}.
  static DensityMatrix basis_state(int qubit, int photons, int fock_dim);
};

// Solves L(rho) = 0 with Tr rho = 1. Hermiticity is imposed by solving for
// the real coordinates of a Hermitian matrix; one population equation is
// replaced by the trace constraint and the result is checked against the
// full complex generator.
//
// Throws NoUniqueSteadyState when the residual check fails and
// TruncationInsufficient when the population of the top Fock level reaches
// top_level_tolerance.
DensityMatrix solve_steady_state(const Liouvillian& L,
                                 double top_level_tolerance = 1e-6);

// Relative residual ||L vec(rho)|| / (||L||_F ||rho||_F).
double steady_state_residual(const Liouvillian& L, const DensityMatrix& rho);

struct SteadyStateSolution {
  DensityMatrix rho;
  int fock_dim = 0;  // truncation that passed the top-level check
};

// Builds H and L and solves, growing the Fock dimension by h.fock_step until
// the top-level check passes or h.max_fock_dim is exceeded.
SteadyStateSolution solve_adaptive(const ModelParams& p,
                                   const HilbertConfig& h);

double qubit_excited_population(const DensityMatrix& rho);
double mean_photon_number(const DensityMatrix& rho);
// Total population of Fock level N-1, summed over the qubit.
double top_fock_population(const DensityMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);

struct PropagateOptions {
  double tolerance = 1e-10;  // per-step error tolerance (abs and rel)
  double min_step_fraction = 1e-14;
  long max_steps = 50'000'000;
};

// Integrates d rho / dt = L(rho) from 0 to t with an adaptive
// Dormand-Prince 5(4) scheme. Throws IntegrationFailure on step-size
// underflow.
DensityMatrix propagate(const DensityMatrix& rho0, const Liouvillian& L,
                        double t, const PropagateOptions& opts = {});

}  // namespace eitspec
