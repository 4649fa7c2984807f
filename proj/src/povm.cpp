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

#include "phasemeas/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phasemeas/displacement.hpp"
#include "phasemeas/errors.hpp"
#include "phasemeas/parallel.hpp"

namespace phasemeas {

namespace {

constexpr double kPi = std::numbers::pi;
// moments must agree to this when the radial panels double
constexpr double kMomentConvergence = 1e-9;

void require_same_dim(const FockMatrix& rho, const ApparatusState& psi) {
    if (rho.rows() != rho.cols()) throw DimensionMismatch("rho must be square");
    if (rho.rows() != psi.dim()) {
        throw DimensionMismatch("rho has dim " + std::to_string(rho.rows()) + ", apparatus has dim " +
                                std::to_string(psi.dim()));
    }
}

// D(r e^{i theta}) v from the real radial block: e^{i m theta} sum_n d_mn e^{-i n theta} v_n
FockVector apply_displacement(const Eigen::MatrixXd& d, double theta, const FockVector& v) {
    const auto dim = v.size();
    FockVector phased(dim);
    for (Eigen::Index n = 0; n < dim; ++n) phased(n) = v(n) * std::polar(1.0, -static_cast<double>(n) * theta);
    FockVector out = d.cast<Complex>() * phased;
    for (Eigen::Index m = 0; m < dim; ++m) out(m) *= std::polar(1.0, static_cast<double>(m) * theta);
    return out;
}

// Prob(alpha) with the radial block precomputed
double probability_from_block(const FockMatrix& rho, const ApparatusState& psi, const Eigen::MatrixXd& d,
                              double theta) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < psi.weights().size(); ++k) {
        const FockVector v = apply_displacement(d, theta, psi.vectors().col(k));
        acc += psi.weights()(k) * (v.adjoint() * rho * v)(0).real();
    }
    return acc / kPi;
}

double variance_sum(const FockMatrix& m) {
    const int dim = static_cast<int>(m.rows());
    const Complex a = fock::expectation(m, fock::ladder(dim));
    const double n = fock::expectation(m, fock::number(dim)).real();
    return n - std::norm(a) + 0.5;  // <dX^2> + <dY^2>
}

PovmMoments moments_on_rule(const FockMatrix& rho, const ApparatusState& psi, const quad::PolarRule& rule) {
    const int dim = psi.dim();
    std::vector<PovmMoments> partial(rule.r.size());
    parallel_for(rule.r.size(), [&](std::size_t j) {
        const Eigen::MatrixXd d = radial_displacement(rule.r[j], dim);
        PovmMoments& acc = partial[j];
        for (int k = 0; k < rule.n_angles; ++k) {
            const double theta = rule.angle(k);
            const double p = probability_from_block(rho, psi, d, theta) * rule.weight(j);
            const double x = rule.r[j] * std::cos(theta);
            const double y = rule.r[j] * std::sin(theta);
            double xp = 1.0;
            for (int i = 0; i <= 4; ++i) {
                double yp = 1.0;
                for (int l = 0; l + i <= 4; ++l) {
                    acc.m[i][l] += p * xp * yp;
                    yp *= y;
                }
                xp *= x;
            }
        }
    });
    PovmMoments out;
    for (const auto& p : partial) {
        for (int i = 0; i <= 4; ++i) {
            for (int l = 0; l + i <= 4; ++l) out.m[i][l] += p.m[i][l];
        }
    }
    return out;
}

} // namespace

ApparatusState::ApparatusState(FockMatrix psi, const Tolerances& tol) : psi_(std::move(psi)) {
    if (psi_.rows() != psi_.cols() || psi_.rows() < 2) throw InvalidDimension("apparatus state must be square, dim >= 2");
    if (fock::hermiticity_error(psi_) > tol.hermiticity) throw InvalidState("apparatus state is not Hermitian");
    if (std::abs(psi_.trace() - 1.0) > tol.trace) throw InvalidState("apparatus state trace is not 1");
    Eigen::SelfAdjointEigenSolver<FockMatrix> solver(0.5 * (psi_ + psi_.adjoint()));
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (ev.minCoeff() < tol.sqrt_floor) {
        throw InvalidState("apparatus state has eigenvalue " + std::to_string(ev.minCoeff()) + " below the sqrt floor");
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (ev(k) > 0.0) keep.push_back(k);
    }
    weights_.resize(static_cast<Eigen::Index>(keep.size()));
    vectors_.resize(psi_.rows(), static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd root = Eigen::VectorXd::Zero(ev.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const auto k = keep[i];
        weights_(static_cast<Eigen::Index>(i)) = ev(k);
        vectors_.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(k);
        root(k) = std::sqrt(ev(k));
    }
    sqrt_psi_ = solver.eigenvectors() * root.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

ApparatusState ApparatusState::pure(const FockVector& psi) { return ApparatusState(fock::density(psi)); }

KickDistribution kick_distribution_from_apparatus(const ApparatusState& psi, int dim,
                                                  const ApparatusKickOptions& opts, const Tolerances& tol) {
    if (dim < psi.dim()) throw DimensionMismatch("apparatus dim exceeds the working dimension");
    if (opts.n_radii < 4) throw InvalidArgument("apparatus table needs at least 4 radii");
    FockMatrix root = FockMatrix::Zero(dim, dim);
    root.topLeftCorner(psi.dim(), psi.dim()) = psi.sqrt_psi();

    const int n_angles = 2 * dim + 1;  // resolves every harmonic e^{i l theta}, |l| < dim
    auto chi_sq = [&](double r, std::vector<double>& row) {
        const Eigen::MatrixXd d = radial_displacement(r, dim);
        row.resize(static_cast<std::size_t>(n_angles));
        for (int k = 0; k < n_angles; ++k) {
            const double theta = 2.0 * kPi * k / n_angles;
            Complex tr{0.0, 0.0};
            for (int m = 0; m < dim; ++m) {
                for (int n = 0; n < dim; ++n) {
                    if (root(n, m) == Complex(0.0, 0.0)) continue;
                    tr += root(n, m) * d(m, n) * std::polar(1.0, (m - n) * theta);
                }
            }
            row[static_cast<std::size_t>(k)] = std::norm(tr);
        }
    };

    // table edge: first radius where every direction has fallen below tail
    std::vector<double> row;
    double r_max = 2.0;
    for (;; r_max *= 1.5) {
        if (r_max > kMaxDisplacementRadius) throw InvalidArgument("apparatus kick distribution does not decay");
        chi_sq(r_max, row);
        if (*std::max_element(row.begin(), row.end()) < opts.tail) break;
    }

    std::vector<double> radii(static_cast<std::size_t>(opts.n_radii));
    std::vector<double> density(radii.size());
    std::vector<double> asym(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        std::vector<double> vals;
        const double r = r_max * static_cast<double>(i) / (opts.n_radii - 1);
        chi_sq(r, vals);
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double dev = 0.0;
        for (double v : vals) dev = std::max(dev, std::abs(v - mean));
        radii[i] = r;
        density[i] = mean / kPi;
        asym[i] = dev;
    });
    const double peak = *std::max_element(density.begin(), density.end()) * kPi;
    const double worst = *std::max_element(asym.begin(), asym.end());
    if (worst > tol.apparatus_asymmetry * std::max(1.0, peak)) {
        throw UnsupportedApparatus("apparatus kick distribution is not radial: |chi|^2 varies by " +
                                   std::to_string(worst) + " with the phase of alpha");
    }
    return KickDistribution::tabulated(std::move(radii), std::move(density));
}

double povm_probability(const FockMatrix& rho, const ApparatusState& psi, Complex alpha) {
    require_same_dim(rho, psi);
    const Eigen::MatrixXd d = radial_displacement(std::abs(alpha), psi.dim());
    return std::max(0.0, probability_from_block(rho, psi, d, std::arg(alpha)));
}

quad::PolarRule povm_rule(const FockMatrix& rho, const ApparatusState& psi, const PovmQuadratureOptions& opts) {
    require_same_dim(rho, psi);
    const int dim = psi.dim();
    double radius = opts.radius;
    if (radius <= 0.0) {
        const Complex centre =
            fock::expectation(rho, fock::ladder(dim)) - fock::expectation(psi.psi(), fock::ladder(dim));
        const double spread = std::sqrt(variance_sum(rho) + variance_sum(psi.psi()));
        radius = std::abs(centre) + 7.0 * spread + 2.0;
    }
    const int panels = opts.panels > 0 ? opts.panels : static_cast<int>(std::ceil(radius / 0.75));
    const int n_angles = opts.n_angles > 0 ? opts.n_angles : std::max(64, 2 * dim + 6);
    return quad::polar_rule(radius, panels, n_angles);
}

PovmMoments povm_moments(const FockMatrix& rho, const ApparatusState& psi, const PovmQuadratureOptions& opts,
                         const Tolerances& tol) {
    (void)tol;
    const quad::PolarRule rule = povm_rule(rho, psi, opts);
    const PovmMoments out = moments_on_rule(rho, psi, rule);
    if (!opts.check_convergence) return out;

    // same disc (auto radius is deterministic), twice the radial panels
    PovmQuadratureOptions fine = opts;
    fine.panels = 2 * static_cast<int>(rule.r.size()) / quad::kPanelOrder;
    const PovmMoments check = moments_on_rule(rho, psi, povm_rule(rho, psi, fine));
    double change = 0.0;
    for (int i = 0; i <= 4; ++i) {
        for (int l = 0; l + i <= 4; ++l) {
            change = std::max(change, std::abs(check.m[i][l] - out.m[i][l]) / std::max(1.0, std::abs(out.m[i][l])));
        }
    }
    if (change > kMomentConvergence) {
        throw ConvergenceError("POVM moment quadrature not converged (panel doubling moves moments by " +
                               std::to_string(change) + ")");
    }
    return out;
}

double povm_moment(const FockMatrix& rho, const ApparatusState& psi, int i, int j, const PovmQuadratureOptions& opts) {
    if (i < 0 || j < 0 || i + j > 4) throw InvalidArgument("povm_moment: need i, j >= 0 and i + j <= 4");
    return povm_moments(rho, psi, opts).m[i][j];
}

FockMatrix povm_effect(const ApparatusState& psi, Complex alpha) {
    const FockMatrix d = displacement_elements(alpha, psi.dim());
    return d * psi.psi() * d.adjoint() / kPi;
}

FockMatrix kraus_operator(const ApparatusState& psi, Complex alpha) {
    const FockMatrix d = displacement_elements(alpha, psi.dim());
    return d * psi.sqrt_psi() * d.adjoint() / std::sqrt(kPi);
}

FockMatrix post_measurement_state(const FockMatrix& rho, const ApparatusState& psi, Complex alpha,
                                  const Tolerances& tol) {
    require_same_dim(rho, psi);
    const double p = povm_probability(rho, psi, alpha);
    if (!(p > 1e-300) || p < 1e-14 * std::max(1.0, rho.trace().real())) {
        throw ZeroProbability("outcome has zero probability density");
    }
    const FockMatrix a = kraus_operator(psi, alpha);
    FockMatrix out = a * rho * a.adjoint() / p;
    const double trace = out.trace().real();
    if (std::abs(trace - 1.0) > tol.trace_drift) {
        throw TruncationError("post-measurement state loses trace " + std::to_string(1.0 - trace) +
                              "; outcome not resolved at this dimension");
    }
    return out;
}

FockMatrix povm_completeness(const ApparatusState& psi, const quad::PolarRule& rule) {
    const int dim = psi.dim();
    std::vector<FockMatrix> partial(rule.r.size());
    parallel_for(rule.r.size(), [&](std::size_t j) {
        const Eigen::MatrixXd d = radial_displacement(rule.r[j], dim);
        FockMatrix acc = FockMatrix::Zero(dim, dim);
        for (int k = 0; k < rule.n_angles; ++k) {
            for (Eigen::Index l = 0; l < psi.weights().size(); ++l) {
                const FockVector v = apply_displacement(d, rule.angle(k), psi.vectors().col(l));
                acc.noalias() += psi.weights()(l) * (v * v.adjoint());
            }
        }
        partial[j] = acc * (rule.weight(j) / kPi);
    });
    FockMatrix total = FockMatrix::Zero(dim, dim);
    for (const auto& p : partial) total += p;
    return total;
}

std::vector<Complex> sample_outcomes(const FockMatrix& rho, const ApparatusState& psi, std::size_t n,
                                     std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("sample_outcomes: n must be >= 1");
    require_same_dim(rho, psi);
    constexpr double kSafety = 1.5;
    constexpr double kUniformShare = 0.05;  // keeps the envelope off zero in the tails

    PovmQuadratureOptions qopts;
    qopts.check_convergence = false;
    const quad::PolarRule rule = povm_rule(rho, psi, qopts);
    const PovmMoments mom = moments_on_rule(rho, psi, rule);
    const double disc = rule.r.back() + 1e-9;  // outside, p is below the quadrature tail cut

    Eigen::Vector2d mean(mom.mean_x(), mom.mean_y());
    Eigen::Matrix2d cov;
    cov << mom.var_x(), mom.cov_xy(), mom.cov_xy(), mom.var_y();
    cov *= kSafety;
    const Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success) throw SamplingError("outcome covariance is not positive definite");
    const Eigen::Matrix2d chol = llt.matrixL();
    const Eigen::Matrix2d inv = cov.inverse();
    const double norm = 1.0 / (2.0 * kPi * std::sqrt(cov.determinant()));
    const double flat = 1.0 / (kPi * disc * disc);
    // gaussian around the outcome mean, mixed with a flat density on the disc;
    // a pure gaussian envelope makes p/q blow up far from an off-centre mean
    auto envelope = [&](double x, double y) {
        const Eigen::Vector2d dz(x - mean(0), y - mean(1));
        const double inside = std::hypot(x, y) <= disc ? flat : 0.0;
        return (1.0 - kUniformShare) * norm * std::exp(-0.5 * dz.dot(inv * dz)) + kUniformShare * inside;
    };

    // bound on Prob / envelope over the quadrature disc
    std::vector<double> ratio(rule.r.size(), 0.0);
    parallel_for(rule.r.size(), [&](std::size_t j) {
        const Eigen::MatrixXd d = radial_displacement(rule.r[j], psi.dim());
        for (int k = 0; k < rule.n_angles; ++k) {
            const double theta = rule.angle(k);
            const double p = probability_from_block(rho, psi, d, theta);
            const double q = envelope(rule.r[j] * std::cos(theta), rule.r[j] * std::sin(theta));
            if (q > 0.0) ratio[j] = std::max(ratio[j], p / q);
        }
    });
    const double bound = kSafety * *std::max_element(ratio.begin(), ratio.end());
    if (!(bound > 0.0) || !std::isfinite(bound)) throw SamplingError("rejection envelope bound is degenerate");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Complex> out;
    out.reserve(n);
    const std::size_t max_attempts = 1000 + 200 * n;
    for (std::size_t attempt = 0; out.size() < n; ++attempt) {
        if (attempt >= max_attempts) throw SamplingError("rejection sampler acceptance rate collapsed");
        Eigen::Vector2d x;
        if (unif(rng) < kUniformShare) {
            const double r = disc * std::sqrt(unif(rng)), th = 2.0 * kPi * unif(rng);
            x = Eigen::Vector2d(r * std::cos(th), r * std::sin(th));
        } else {
            x = mean + chol * Eigen::Vector2d(normal(rng), normal(rng));
        }
        const Complex alpha(x(0), x(1));
        const double p = povm_probability(rho, psi, alpha);
        const double q = envelope(x(0), x(1));
        if (p > bound * q) {
            throw SamplingError("rejection envelope violated at alpha = (" + std::to_string(x(0)) + ", " +
                                std::to_string(x(1)) + ")");
        }
        if (unif(rng) * bound * q <= p) out.push_back(alpha);
    }
    return out;
}

} // namespace phasemeas
