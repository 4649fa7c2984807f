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

// povm.hpp: simultaneous (X, Y) measurement with apparatus state Psi.
//
//   pi_alpha  = D(alpha) Psi D(alpha)^dag / pi
//   A_alpha   = D(alpha) Psi^{1/2} D(alpha)^dag / sqrt(pi),   pi_alpha = A^dag A
//   Prob(alpha) = Tr[pi_alpha rho]
//
// alpha_x = Re alpha, alpha_y = Im alpha; X = (a + a^dag)/2, Y = (a - a^dag)/(2i).

#pragma once

#include <cstdint>
#include <vector>

#include "phasemeas/fock.hpp"
#include "phasemeas/kick.hpp"
#include "phasemeas/quadrature.hpp"
#include "phasemeas/tolerances.hpp"

namespace phasemeas {

class ApparatusState {
public:
    /// Validates Psi (Hermitian, unit trace, PSD after clipping eigenvalues
    /// above the sqrt floor) and caches its eigendecomposition.
    explicit ApparatusState(FockMatrix psi, const Tolerances& tol = default_tolerances());
    static ApparatusState pure(const FockVector& psi);

    int dim() const { return static_cast<int>(psi_.rows()); }
    const FockMatrix& psi() const { return psi_; }
    const FockMatrix& sqrt_psi() const { return sqrt_psi_; }
    /// Clipped eigenvalues (>= 0) and matching eigenvectors, rank-trimmed.
    const Eigen::VectorXd& weights() const { return weights_; }
    const FockMatrix& vectors() const { return vectors_; }

private:
    FockMatrix psi_;
    FockMatrix sqrt_psi_;
    Eigen::VectorXd weights_;
    FockMatrix vectors_;
};

struct ApparatusKickOptions {
    int n_radii = 401;
    double tail = 1e-14;  // |chi|^2 level that ends the radial table
};

/// g(|alpha|) = |Tr[Psi^{1/2} D(alpha)]|^2 / pi on a radial table. Psi is
/// zero-padded to `dim`. Throws UnsupportedApparatus when |chi|^2 depends on
/// the phase of alpha by more than the asymmetry tolerance.
KickDistribution kick_distribution_from_apparatus(const ApparatusState& psi, int dim,
                                                  const ApparatusKickOptions& opts = {},
                                                  const Tolerances& tol = default_tolerances());

double povm_probability(const FockMatrix& rho, const ApparatusState& psi, Complex alpha);

struct PovmQuadratureOptions {
    double radius = 0.0;  // 0: from the first two moments of rho and Psi
    int panels = 0;       // 0: about one panel per 0.75 in radius
    int n_angles = 0;     // 0: max(64, 2 dim + 6), exact in angle
    bool check_convergence = true;
};

/// Plane rule used for the POVM integrals.
quad::PolarRule povm_rule(const FockMatrix& rho, const ApparatusState& psi, const PovmQuadratureOptions& opts = {});

/// Raw moments M_ij = int Prob(alpha) alpha_x^i alpha_y^j d^2alpha for i + j <= 4.
struct PovmMoments {
    double m[5][5] = {};

    double mass() const { return m[0][0]; }
    double mean_x() const { return m[1][0]; }
    double mean_y() const { return m[0][1]; }
    double var_x() const { return m[2][0] - m[1][0] * m[1][0]; }
    double var_y() const { return m[0][2] - m[0][1] * m[0][1]; }
    double cov_xy() const { return m[1][1] - m[1][0] * m[0][1]; }
};

/// Throws ConvergenceError when doubling the radial panels moves any moment by
/// more than the convergence tolerance.
PovmMoments povm_moments(const FockMatrix& rho, const ApparatusState& psi, const PovmQuadratureOptions& opts = {},
                         const Tolerances& tol = default_tolerances());
double povm_moment(const FockMatrix& rho, const ApparatusState& psi, int i, int j,
                   const PovmQuadratureOptions& opts = {});

FockMatrix povm_effect(const ApparatusState& psi, Complex alpha);
FockMatrix kraus_operator(const ApparatusState& psi, Complex alpha);

/// A rho A^dag / Tr[pi_alpha rho]. Throws ZeroProbability for a null outcome
/// and TruncationError when the outcome is not resolved at this dimension.
FockMatrix post_measurement_state(const FockMatrix& rho, const ApparatusState& psi, Complex alpha,
                                  const Tolerances& tol = default_tolerances());

/// int pi_alpha d^2alpha over `rule`.
FockMatrix povm_completeness(const ApparatusState& psi, const quad::PolarRule& rule);

/// i.i.d. outcomes by rejection against a Gaussian envelope matched to the
/// second moments (covariance and bound both widened by 1.5).
std::vector<Complex> sample_outcomes(const FockMatrix& rho, const ApparatusState& psi, std::size_t n,
                                     std::uint64_t seed);

} // namespace phasemeas
