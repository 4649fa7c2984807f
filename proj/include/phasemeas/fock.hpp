// Copyright 2026 The phasemeas Authors
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

// fock.hpp: operators, states and density matrices in a truncated number basis.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "phasemeas/tolerances.hpp"

namespace phasemeas {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};

/// Amplitudes indexed by occupation number n = 0..dim-1.
using FockVector = Eigen::VectorXcd;
/// Operators and density matrices on the truncated space.
using FockMatrix = Eigen::MatrixXcd;

namespace fock {

/// log(n!) for n = 0..count-1, accumulated as a running sum of logarithms.
std::vector<double> log_factorials(int count);

/// max(32, ceil(8 |alpha|^2)).
int default_dimension(double max_abs_alpha);

// Ladder-basis operators. All require dim >= 2.
FockMatrix ladder(int dim);
FockMatrix creation(int dim);
FockMatrix number(int dim);
FockMatrix quadrature_x(int dim);
FockMatrix quadrature_y(int dim);
FockMatrix identity(int dim);

FockVector fock_state(int n, int dim);

/// A truncated, renormalized state together with what truncation cost.
struct TruncatedState {
    FockVector amp;
    double raw_norm = 1.0;   // norm of the truncated amplitudes before renormalization
    double tail_mass = 0.0;  // probability that lies at n >= dim
};

/// Coherent state |alpha>. Throws TruncationError if the Poisson tail beyond
/// dim exceeds tol.coherent_tail.
TruncatedState coherent_state_diagnostics(Complex alpha, int dim,
                                          const Tolerances& tol = default_tolerances());
FockVector coherent_state(Complex alpha, int dim,
                          const Tolerances& tol = default_tolerances());

/// Even cat state N^{1/2}(|alpha> + |-alpha>), N^{-1} = 2(1 + exp(-2|alpha|^2)).
TruncatedState cat_state_diagnostics(Complex alpha, int dim,
                                     const Tolerances& tol = default_tolerances());
FockVector cat_state(Complex alpha, int dim,
                     const Tolerances& tol = default_tolerances());

/// |psi><psi|.
FockMatrix density(const FockVector& psi);

/// Tr[rho O].
Complex expectation(const FockMatrix& rho, const FockMatrix& op);

double purity(const FockMatrix& rho);
double min_eigenvalue(const FockMatrix& rho);
/// Max-abs entry of (A - A^dagger).
double hermiticity_error(const FockMatrix& a);

/// Throws InvalidState unless rho is Hermitian, unit-trace and positive
/// within the given tolerances.
void validate_density(const FockMatrix& rho, const Tolerances& tol = default_tolerances());

/// Thermal (Bose-Einstein) state with the given mean occupation.
FockMatrix thermal_state(double mean_occupation, int dim);

} // namespace fock
} // namespace phasemeas
