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

// displacement.hpp: displacement and parity operators in the truncated basis.
//
// The truncated matrix holds the exact top-left block of the infinite
// displacement operator: <m|D(alpha)|n> for m, n < dim. Elements are built
// from the associated-Laguerre closed form
//
//   <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^{-|alpha|^2/2} L_n^(m-n)(|alpha|^2),  m >= n
//
// with a log-scaled forward recurrence, which stays accurate for |alpha|^2
// well beyond dim (needed when sampling chi far from the origin).

#pragma once

#include <Eigen/Dense>

#include "phasemeas/fock.hpp"

namespace phasemeas {

/// Real matrix d(r) with <m|D(r e^{i theta})|n> = d_mn(r) e^{i (m-n) theta}.
/// d_mn = (-1)^(n-m) d_nm.
Eigen::MatrixXd radial_displacement(double r, int dim);

/// Exact top-left block of D(alpha), no range check.
FockMatrix displacement_elements(Complex alpha, int dim);

/// D(alpha) as an operator acting on states of the truncated space.
/// Throws OutOfRange when |alpha|^2 > dim/4, where the displaced vacuum no
/// longer fits and the block stops being unitary.
FockMatrix displacement_matrix(Complex alpha, int dim);

/// Largest |eta| for which displacement elements are evaluated.
inline constexpr double kMaxDisplacementRadius = 200.0;

/// diag((-1)^n).
Eigen::VectorXd parity_diagonal(int dim);

/// Applies D(alpha) to a state: D(alpha) psi, using displacement_elements.
FockVector displace(Complex alpha, const FockVector& psi);

} // namespace phasemeas
