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

#include "phasemeas/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <numbers>

#include "phasemeas/displacement.hpp"
#include "phasemeas/errors.hpp"
#include "phasemeas/parallel.hpp"
#include "phasemeas/phase_space.hpp"

namespace phasemeas {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void require_dim(const FockMatrix& rho, int dim, const char* what) {
    if (rho.rows() != dim || rho.cols() != dim) {
        throw DimensionMismatch(std::string(what) + ": rho is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", expected dim " + std::to_string(dim));
    }
}

// rho_mn * e^{i (m - n) theta}
FockMatrix phase_rotate(const FockMatrix& rho, double theta) {
    const auto dim = rho.rows();
    Eigen::VectorXcd ph(dim);
    for (Eigen::Index m = 0; m < dim; ++m) ph(m) = std::polar(1.0, static_cast<double>(m) * theta);
    return ph.asDiagonal() * rho * ph.conjugate().asDiagonal();
}

StepRecord record_for(double t, const FockMatrix& rho) {
    const int dim = static_cast<int>(rho.rows());
    StepRecord r;
    r.t = t;
    r.trace = rho.trace().real();
    r.purity = fock::purity(rho);
    double n = 0.0;
    for (int k = 0; k < dim; ++k) n += k * rho(k, k).real();
    r.mean_n = n;
    Complex a{0.0, 0.0};
    for (int k = 1; k < dim; ++k) a += std::sqrt(static_cast<double>(k)) * rho(k, k - 1);  // Tr[rho a]
    r.mean_x = a.real();
    r.mean_y = a.imag();
    r.min_eigenvalue = fock::min_eigenvalue(0.5 * (rho + rho.adjoint()));
    r.hermiticity = fock::hermiticity_error(rho);
    return r;
}

Trajectory run_rk4(const FockMatrix& rho0, const RhsFunction& rhs, const std::vector<double>& times,
                   const IntegratorConfig& config) {
    Trajectory traj;
    traj.dt = config.dt;
    const double trace0 = rho0.trace().real();
    FockMatrix rho = rho0;
    double now = 0.0;
    for (const double target : times) {
        const double span = target - now;
        const auto n = static_cast<std::size_t>(std::max(0.0, std::ceil(span / config.dt - 1e-9)));
        const double h = n > 0 ? span / static_cast<double>(n) : 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const FockMatrix k1 = rhs(rho);
            const FockMatrix k2 = rhs(rho + 0.5 * h * k1);
            const FockMatrix k3 = rhs(rho + 0.5 * h * k2);
            const FockMatrix k4 = rhs(rho + h * k3);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        traj.steps += n;
        now = target;
        if (!rho.allFinite()) throw NumericalAbort("integrator produced non-finite entries by t = " + sci(now));
        const StepRecord rec = record_for(now, rho);
        if (std::abs(rec.trace - trace0) > config.trace_drift) {
            throw NumericalAbort("trace drift " + sci(rec.trace - trace0) + " at t = " + sci(now));
        }
        if (rec.hermiticity > config.hermiticity_drift) {
            throw NumericalAbort("Hermiticity drift " + sci(rec.hermiticity) + " at t = " +
                                 sci(now));
        }
        if (rec.min_eigenvalue < config.positivity) {
            throw NumericalAbort("positivity violated: min eigenvalue " + sci(rec.min_eigenvalue) +
                                 " at t = " + sci(now) + " (truncation or step size)");
        }
        traj.times.push_back(now);
        traj.states.push_back(rho);
        traj.records.push_back(rec);
    }
    return traj;
}

} // namespace

void LindbladSpec::validate(const Tolerances& tol) const {
    if (H.rows() != H.cols()) throw DimensionMismatch("H must be square");
    if (fock::hermiticity_error(H) > tol.hermiticity * std::max(1.0, H.cwiseAbs().maxCoeff()) * 100.0) {
        throw InvalidArgument("H is not Hermitian");
    }
    for (const auto& c : channels) {
        if (c.R.rows() != H.rows() || c.R.cols() != H.cols()) throw DimensionMismatch("channel dimension differs from H");
        if (!(c.kappa >= 0.0)) throw InvalidArgument("channel rates must be >= 0");
    }
}

FockMatrix lgks_rhs(const FockMatrix& rho, const LindbladSpec& spec) {
    require_dim(rho, static_cast<int>(spec.H.rows()), "lgks_rhs");
    FockMatrix out = -kI * (spec.H * rho - rho * spec.H);
    std::vector<FockMatrix> parts(spec.channels.size());
    parallel_for(spec.channels.size(), [&](std::size_t j) {
        const auto& c = spec.channels[j];
        const FockMatrix rr = c.R.adjoint() * c.R;
        parts[j] = 0.5 * c.kappa * (2.0 * c.R * rho * c.R.adjoint() - rr * rho - rho * rr);
    });
    for (const auto& p : parts) out += p;
    return out;
}

KickMap::KickMap(const KickQuadrature& quadrature, int dim, Mode mode) : quad_(quadrature), dim_(dim), mode_(mode) {
    if (dim < 2) throw InvalidDimension("KickMap: dim must be >= 2");
    if (quad_.radii.empty()) throw InvalidArgument("KickMap: empty quadrature");
    std::vector<Eigen::MatrixXd> radial(quad_.radii.size());
    parallel_for(radial.size(), [&](std::size_t j) { radial[j] = radial_displacement(quad_.radii[j], dim); });

    if (mode_ == Mode::direct) {
        radial_ = std::move(radial);
        return;
    }
    if (quad_.n_angles < 2 * dim - 1) {
        throw InvalidArgument("covariant KickMap needs n_angles >= 2 dim - 1 (have " + sci(quad_.n_angles) +
                              " for dim " + sci(dim) + ")");
    }
    blocks_.resize(static_cast<std::size_t>(2 * dim - 1));
    parallel_for(blocks_.size(), [&](std::size_t b) {
        const int delta = static_cast<int>(b) - (dim - 1);
        const int len = dim - std::abs(delta);
        const int m0 = std::max(0, delta);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(len, len);
        for (std::size_t j = 0; j < radial.size(); ++j) {
            acc += quad_.weights[j] *
                   radial[j].block(m0, m0, len, len).cwiseProduct(radial[j].block(m0 - delta, m0 - delta, len, len));
        }
        blocks_[b] = std::move(acc);
    });
}

FockMatrix KickMap::apply(const FockMatrix& rho) const {
    require_dim(rho, dim_, "KickMap::apply");
    return mode_ == Mode::direct ? apply_direct(rho) : apply_covariant(rho);
}

FockMatrix KickMap::apply_direct(const FockMatrix& rho) const {
    std::vector<FockMatrix> parts(radial_.size());
    parallel_for(radial_.size(), [&](std::size_t j) {
        const Eigen::MatrixXd& d = radial_[j];
        FockMatrix acc = FockMatrix::Zero(dim_, dim_);
        for (int k = 0; k < quad_.n_angles; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / quad_.n_angles;
            // D = P d P^dag with P = diag(e^{i m theta})
            const FockMatrix inner = phase_rotate(rho, -theta);
            acc += phase_rotate(d * inner * d.transpose(), theta);
        }
        parts[j] = acc * quad_.node_weight(j);
    });
    FockMatrix out = FockMatrix::Zero(dim_, dim_);
    for (const auto& p : parts) out += p;
    return out;
}

FockMatrix KickMap::apply_covariant(const FockMatrix& rho) const {
    FockMatrix out(dim_, dim_);
    for (int delta = -(dim_ - 1); delta <= dim_ - 1; ++delta) {
        const auto& block = blocks_[static_cast<std::size_t>(delta + dim_ - 1)];
        const int len = dim_ - std::abs(delta);
        const int m0 = std::max(0, delta);
        Eigen::VectorXcd v(len);
        for (int i = 0; i < len; ++i) v(i) = rho(m0 + i, m0 + i - delta);
        const Eigen::VectorXcd w = block * v;
        for (int i = 0; i < len; ++i) out(m0 + i, m0 + i - delta) = w(i);
    }
    return out;
}

LindbladSpec KickMap::as_lgks(double gamma, double omega) const {
    LindbladSpec spec;
    spec.H = omega * fock::number(dim_);
    for (std::size_t j = 0; j < quad_.radii.size(); ++j) {
        for (int k = 0; k < quad_.n_angles; ++k) {
            spec.channels.push_back({displacement_elements(quad_.node(j, k), dim_), gamma * quad_.node_weight(j)});
        }
    }
    return spec;
}

FockMatrix rotation_rhs(const FockMatrix& rho, double omega) {
    FockMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index n = 0; n < rho.cols(); ++n) {
        for (Eigen::Index m = 0; m < rho.rows(); ++m) {
            out(m, n) = Complex(0.0, -omega * static_cast<double>(m - n)) * rho(m, n);
        }
    }
    return out;
}

FockMatrix measurement_me_rhs(const FockMatrix& rho, const MeasurementModel& model, const KickMap& kicks) {
    FockMatrix out = rotation_rhs(rho, model.omega);
    if (model.gamma != 0.0) out += model.gamma * (kicks.apply(rho) - rho);
    return out;
}

FockMatrix diffusion_me_rhs(const FockMatrix& rho, double omega, double kappa) {
    if (!(kappa >= 0.0)) throw InvalidArgument("diffusion rate kappa must be >= 0");
    if (rho.rows() != rho.cols()) throw DimensionMismatch("rho must be square");
    FockMatrix out = rotation_rhs(rho, omega);
    if (kappa == 0.0) return out;
    const int dim = static_cast<int>(rho.rows());
    const FockMatrix a = fock::ladder(dim);
    const FockMatrix ad = a.adjoint();
    const FockMatrix ada = ad * a;
    const FockMatrix aad = a * ad;
    out -= kappa * (-2.0 * a * rho * ad + ada * rho + rho * ada - 2.0 * ad * rho * a + aad * rho + rho * aad);
    return out;
}

double matched_diffusion_kappa(const MeasurementModel& model) { return 0.5 * model.gamma * model.g.second_moment(); }

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("integrator dt must be positive");
    if (!(audit_tolerance > 0.0)) throw InvalidArgument("audit tolerance must be positive");
}

const std::vector<Complex>& default_audit_probes() {
    static const std::vector<Complex> probes = {{0.0, 0.0},  {0.5, 0.0},  {0.0, 0.5},  {-1.0, 1.0}, {1.5, -0.5},
                                                {0.0, -2.0}, {2.5, 0.0},  {-2.0, -2.0}, {3.0, 3.0}};
    return probes;
}

Trajectory integrate(const FockMatrix& rho0, const RhsFunction& rhs, const std::vector<double>& times,
                     const IntegratorConfig& config) {
    config.validate();
    if (rho0.rows() != rho0.cols()) throw DimensionMismatch("rho0 must be square");
    if (times.empty()) throw InvalidArgument("integrate needs at least one time");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
            throw InvalidArgument("integration times must be nonnegative and ascending");
        }
    }
    Trajectory traj = run_rk4(rho0, rhs, times, config);
    if (!config.audit) return traj;

    IntegratorConfig half = config;
    half.dt = 0.5 * config.dt;
    half.audit = false;
    const Trajectory fine = run_rk4(rho0, rhs, times, half);
    const auto& probes = config.audit_probes.empty() ? default_audit_probes() : config.audit_probes;
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (const Complex eta : probes) {
            traj.audit_change = std::max(
                traj.audit_change, std::abs(char_function(traj.states[i], eta) - char_function(fine.states[i], eta)));
        }
        traj.audit_rho_change = std::max(traj.audit_rho_change, (traj.states[i] - fine.states[i]).cwiseAbs().maxCoeff());
    }
    traj.audited = true;
    if (traj.audit_change > config.audit_tolerance) {
        throw ConvergenceError("step-halving audit failed: chi moves by " + sci(traj.audit_change) +
                               " (tolerance " + sci(config.audit_tolerance) + ") at dt = " +
                               sci(config.dt));
    }
    return traj;
}

nlohmann::json trajectory_json(const Trajectory& traj) {
    nlohmann::json j;
    j["format"] = "phasemeas-trajectory";
    j["version"] = 1;
    j["dt"] = traj.dt;
    j["steps"] = traj.steps;
    j["audited"] = traj.audited;
    j["audit_change"] = traj.audit_change;
    j["records"] = nlohmann::json::array();
    for (const auto& r : traj.records) {
        j["records"].push_back({{"t", r.t},
                                {"trace", r.trace},
                                {"purity", r.purity},
                                {"mean_n", r.mean_n},
                                {"mean_x", r.mean_x},
                                {"mean_y", r.mean_y},
                                {"min_eigenvalue", r.min_eigenvalue},
                                {"hermiticity", r.hermiticity}});
    }
    return j;
}

} // namespace phasemeas
