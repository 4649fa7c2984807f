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

#include "phasemeas/unravelling.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "phasemeas/displacement.hpp"
#include "phasemeas/errors.hpp"
#include "phasemeas/parallel.hpp"

namespace phasemeas {

namespace {

// trajectories summed together before the ordered reduction
constexpr std::size_t kBlock = 32;

struct BlockSums {
    std::vector<FockMatrix> rho;
    std::vector<std::vector<Complex>> chi;     // sum of chi
    std::vector<std::vector<Complex>> chi_sq;  // (sum Re^2, sum Im^2)
    std::size_t jumps = 0;
};

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::size_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(static_cast<std::uint64_t>(k) >> 32)};
    return std::mt19937_64(seq);
}

void rotate(FockVector& psi, double omega, double dt) {
    if (omega == 0.0 || dt == 0.0) return;
    for (Eigen::Index n = 0; n < psi.size(); ++n) psi(n) *= std::polar(1.0, -omega * static_cast<double>(n) * dt);
}

} // namespace

UnravellingResult monte_carlo_unravelling(const FockMatrix& rho0, const MeasurementModel& model,
                                          const std::vector<double>& times, const UnravellingOptions& opts) {
    model.validate();
    fock::validate_density(rho0);
    if (opts.n_traj < 1) throw InvalidArgument("n_traj must be >= 1");
    if (times.empty()) throw InvalidArgument("unravelling needs at least one time");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
            throw InvalidArgument("unravelling times must be nonnegative and ascending");
        }
    }
    const int dim = static_cast<int>(rho0.rows());
    const std::size_t n_times = times.size();
    const std::size_t n_probes = opts.probes.size();

    // initial ensemble: eigen-decomposition of rho0
    Eigen::SelfAdjointEigenSolver<FockMatrix> solver(rho0);
    std::vector<double> cumulative;
    std::vector<FockVector> components;
    double running = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double p = solver.eigenvalues()(k);
        if (p <= 1e-14) continue;
        running += p;
        cumulative.push_back(running);
        components.push_back(solver.eigenvectors().col(k));
    }

    std::vector<FockMatrix> probe_ops;
    for (const Complex eta : opts.probes) probe_ops.push_back(displacement_elements(eta, dim));

    const std::size_t n_blocks = (opts.n_traj + kBlock - 1) / kBlock;
    std::vector<BlockSums> blocks(n_blocks);
    parallel_for(n_blocks, [&](std::size_t b) {
        BlockSums& sums = blocks[b];
        sums.rho.assign(n_times, FockMatrix::Zero(dim, dim));
        sums.chi.assign(n_times, std::vector<Complex>(n_probes, Complex(0.0, 0.0)));
        sums.chi_sq.assign(n_times, std::vector<Complex>(n_probes, Complex(0.0, 0.0)));
        const std::size_t end = std::min(opts.n_traj, (b + 1) * kBlock);
        for (std::size_t k = b * kBlock; k < end; ++k) {
            auto rng = trajectory_rng(opts.seed, k);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::size_t which = 0;
            if (components.size() > 1) {
                const double u = unif(rng) * running;
                while (which + 1 < components.size() && cumulative[which] < u) ++which;
            }
            FockVector psi = components[which];
            double now = 0.0;
            std::exponential_distribution<double> wait(model.gamma > 0.0 ? model.gamma : 1.0);
            double next_jump = model.gamma > 0.0 ? wait(rng) : std::numeric_limits<double>::infinity();
            for (std::size_t ti = 0; ti < n_times; ++ti) {
                while (next_jump <= times[ti]) {
                    rotate(psi, model.omega, next_jump - now);
                    now = next_jump;
                    const double r = model.g.sample_radius(rng);
                    const double phi = 2.0 * std::numbers::pi * unif(rng);
                    psi = displacement_elements(std::polar(r, phi), dim) * psi;
                    const double norm2 = psi.squaredNorm();
                    if (1.0 - norm2 > opts.norm_tolerance) {
                        throw TruncationError("kick of size " + std::to_string(r) + " pushes norm " +
                                              std::to_string(1.0 - norm2) + " out of the truncated space");
                    }
                    psi /= std::sqrt(norm2);
                    ++sums.jumps;
                    next_jump = now + wait(rng);
                }
                rotate(psi, model.omega, times[ti] - now);
                now = times[ti];
                sums.rho[ti].noalias() += psi * psi.adjoint();
                for (std::size_t p = 0; p < n_probes; ++p) {
                    const Complex c = psi.dot(probe_ops[p] * psi);
                    sums.chi[ti][p] += c;
                    sums.chi_sq[ti][p] += Complex(c.real() * c.real(), c.imag() * c.imag());
                }
            }
        }
    });

    UnravellingResult out;
    out.times = times;
    out.n_traj = opts.n_traj;
    out.rho.assign(n_times, FockMatrix::Zero(dim, dim));
    out.chi_mean.assign(n_times, std::vector<Complex>(n_probes, Complex(0.0, 0.0)));
    out.chi_stderr.assign(n_times, std::vector<Complex>(n_probes, Complex(0.0, 0.0)));
    std::vector<std::vector<Complex>> sq(n_times, std::vector<Complex>(n_probes, Complex(0.0, 0.0)));
    for (const auto& s : blocks) {
        out.total_jumps += s.jumps;
        for (std::size_t ti = 0; ti < n_times; ++ti) {
            out.rho[ti] += s.rho[ti];
            for (std::size_t p = 0; p < n_probes; ++p) {
                out.chi_mean[ti][p] += s.chi[ti][p];
                sq[ti][p] += s.chi_sq[ti][p];
            }
        }
    }
    const double n = static_cast<double>(opts.n_traj);
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        out.rho[ti] /= n;
        for (std::size_t p = 0; p < n_probes; ++p) {
            const Complex mean = out.chi_mean[ti][p] / n;
            out.chi_mean[ti][p] = mean;
            if (opts.n_traj > 1) {
                const double var_re = std::max(0.0, (sq[ti][p].real() - n * mean.real() * mean.real()) / (n - 1.0));
                const double var_im = std::max(0.0, (sq[ti][p].imag() - n * mean.imag() * mean.imag()) / (n - 1.0));
                out.chi_stderr[ti][p] = Complex(std::sqrt(var_re / n), std::sqrt(var_im / n));
            }
        }
    }
    return out;
}

FockMatrix monte_carlo_unravelling(const FockMatrix& rho0, const MeasurementModel& model, double t,
                                   std::size_t n_traj, std::uint64_t seed) {
    UnravellingOptions opts;
    opts.n_traj = n_traj;
    opts.seed = seed;
    return monte_carlo_unravelling(rho0, model, {t}, opts).rho.front();
}

} // namespace phasemeas
