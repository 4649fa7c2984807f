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

// hamiltonian.hpp: single-mode quadratic Hamiltonians and their normal form.
//
//   (Q,P) basis:    H = c1 Q^2 + c2 P^2 + c3 (QP + PQ) + c4 Q + c5 P
//   ladder basis:   H = z1 b^dag b + z2 b^2 + z2* (b^dag)^2 + z3 b + z3* b^dag
//   normal form:    H = z0 a^dag a + c,   b = mu a + nu a^dag + delta
//
// with Q = lambda (b + b^dag)/sqrt(2) and P = (hbar/lambda)(b - b^dag)/(sqrt(2) i).

#pragma once

#include <array>
#include <variant>
#include <vector>

#include "json.hpp"
#include "phasemeas/fock.hpp"

namespace phasemeas::hamiltonian {

struct QuadraticQP {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double c5 = 0.0;
    double lambda = 1.0;  // length scale
    double hbar = 1.0;    // action scale

    void validate() const;
};

struct QuadraticLadder {
    double z1 = 0.0;
    Complex z2{0.0, 0.0};
    Complex z3{0.0, 0.0};

    /// z1 > 2|z2|.
    bool stable() const { return z1 > 2.0 * std::abs(z2); }
};

/// to_ladder result: the ladder form plus the c-number left over by normal
/// ordering (the ladder form carries no constant term).
struct LadderForm {
    QuadraticLadder h;
    double constant = 0.0;
};

struct NormalForm {
    double z0 = 0.0;      // hbar * omega
    double c = 0.0;       // constant shift
    Complex mu{1.0, 0.0};
    Complex nu{0.0, 0.0};
    Complex delta{0.0, 0.0};
    double U = 1.0;       // |mu|
    double V = 0.0;       // |nu|
    double theta = 0.0;   // squeeze parameter, log sqrt((z1 - 2|z2|)/(z1 + 2|z2|))
    double phi = 0.0;     // Arg(z2), 0 when z2 == 0
};

LadderForm to_ladder(const QuadraticQP& h);

/// Throws InstabilityError when z1 <= 2|z2|.
NormalForm diagonalize(const QuadraticLadder& h);

/// Coefficients of a, a^dag and a^2 after substituting b = mu a + nu a^dag + delta;
/// all three vanish for a valid normal form.
std::array<Complex, 3> diagonalization_residuals(const QuadraticLadder& h, const NormalForm& nf);

/// |mu|^2 - |nu|^2 - 1.
double symplectic_residual(const NormalForm& nf);

FockMatrix ladder_matrix(const QuadraticLadder& h, int dim);
FockMatrix qp_matrix(const QuadraticQP& h, int dim);

struct SpectralReport {
    double max_error = 0.0;            // max_n |E_n - (z0 n + c)|
    double doubling_change = 0.0;      // max change of the k levels when dim doubles
    std::vector<double> eigenvalues;   // k lowest at the requested dim
};

/// Lowest k eigenvalues of ladder_matrix(h, dim) against z0 n + c. Throws
/// ConvergenceError when doubling dim moves them by more than 1e-8.
SpectralReport spectral_check(const QuadraticLadder& h, const NormalForm& nf, int dim, int k);

/// A Hamiltonian file in either basis.
using HamiltonianSpec = std::variant<QuadraticQP, QuadraticLadder>;

HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j);
/// The ladder form of either basis (the constant is dropped).
QuadraticLadder as_ladder(const HamiltonianSpec& spec);
/// The action scale for the spec (1 for ladder-basis input).
double hbar_of(const HamiltonianSpec& spec);
nlohmann::json to_json(const NormalForm& nf);

} // namespace phasemeas::hamiltonian
