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

// lindblad.hpp: brute-force density-matrix master equations (hbar = 1,
// H in frequency units) and a fixed-step RK4 integrator with audit.
//
//   LGKS:        -i[H, rho] + 1/2 sum_j kappa_j (2 R rho R^dag - R^dag R rho - rho R^dag R)
//   measurement: -i omega [N, rho] + gamma (sum_k w_k D_k rho D_k^dag - rho)
//   diffusion:   -i omega [N, rho] - kappa (-2 a rho a^dag + a^dag a rho + rho a^dag a
//                                           -2 a^dag rho a + a a^dag rho + rho a a^dag)

#pragma once

#include <functional>
#include <vector>

#include "json.hpp"
#include "phasemeas/kick.hpp"
#include "phasemeas/propagator.hpp"
#include "phasemeas/tolerances.hpp"

namespace phasemeas {

struct LindbladChannel {
    FockMatrix R;
    double kappa = 0.0;
};

struct LindbladSpec {
    FockMatrix H;
    std::vector<LindbladChannel> channels;

    void validate(const Tolerances& tol = default_tolerances()) const;
};

FockMatrix lgks_rhs(const FockMatrix& rho, const LindbladSpec& spec);

/// rho -> sum_k w_k D(alpha_k) rho D(alpha_k)^dag over a KickQuadrature.
///
/// direct:    node-by-node sum (radial blocks cached, phases applied per angle)
/// covariant: with n_angles >= 2 dim - 1 the angular sum is exactly
///            block-diagonal in m - n; each block is a real matrix applied to
///            one diagonal of rho. Same result as direct, far cheaper.
class KickMap {
public:
    enum class Mode { direct, covariant };

    KickMap(const KickQuadrature& quadrature, int dim, Mode mode = Mode::covariant);

    int dim() const { return dim_; }
    Mode mode() const { return mode_; }
    const KickQuadrature& quadrature() const { return quad_; }

    FockMatrix apply(const FockMatrix& rho) const;

    /// H = omega N, channels R_k = D(alpha_k) with kappa_k = gamma w_k / n_angles.
    LindbladSpec as_lgks(double gamma, double omega) const;

private:
    FockMatrix apply_direct(const FockMatrix& rho) const;
    FockMatrix apply_covariant(const FockMatrix& rho) const;

    KickQuadrature quad_;
    int dim_;
    Mode mode_;
    std::vector<Eigen::MatrixXd> radial_;  // d(r_j), direct mode
    std::vector<Eigen::MatrixXd> blocks_;  // index delta + dim - 1, covariant mode
};

/// -i omega [N, rho] computed elementwise.
FockMatrix rotation_rhs(const FockMatrix& rho, double omega);

FockMatrix measurement_me_rhs(const FockMatrix& rho, const MeasurementModel& model, const KickMap& kicks);

FockMatrix diffusion_me_rhs(const FockMatrix& rho, double omega, double kappa);

/// kappa matched to the second moment of g: gamma * int |alpha|^2 g d^2alpha / 2.
double matched_diffusion_kappa(const MeasurementModel& model);

using RhsFunction = std::function<FockMatrix(const FockMatrix&)>;

struct IntegratorConfig {
    double dt = 1e-3;
    double trace_drift = 1e-8;
    double hermiticity_drift = 1e-8;
    double positivity = -1e-6;
    /// Rerun at dt/2 and require chi at the probes to move by < audit_tolerance.
    bool audit = true;
    double audit_tolerance = 1e-6;
    std::vector<Complex> audit_probes;  // empty: a fixed 9-point set

    void validate() const;
};

struct StepRecord {
    double t = 0.0;
    double trace = 0.0;
    double purity = 0.0;
    double mean_n = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double min_eigenvalue = 0.0;
    double hermiticity = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<FockMatrix> states;
    std::vector<StepRecord> records;
    double dt = 0.0;
    std::size_t steps = 0;
    double audit_change = 0.0;     // max |chi change| at probes under dt/2
    double audit_rho_change = 0.0; // max |rho change| under dt/2 (diagnostic)
    bool audited = false;
};

/// Fixed-step RK4 through every requested time (ascending, >= 0). Throws
/// NumericalAbort on drift or positivity failure, ConvergenceError when the
/// step-halving audit fails.
Trajectory integrate(const FockMatrix& rho0, const RhsFunction& rhs, const std::vector<double>& times,
                     const IntegratorConfig& config);

const std::vector<Complex>& default_audit_probes();

nlohmann::json trajectory_json(const Trajectory& traj);

} // namespace phasemeas
