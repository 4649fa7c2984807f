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

#include "phasemeas/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasemeas/errors.hpp"

namespace phasemeas::hamiltonian {

namespace {

const double kSqrt2 = std::sqrt(2.0);

Complex complex_from_json(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return {0.0, 0.0};
    const auto& v = j.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(std::string("'") + key + "' must be a number or [re, im]");
}

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::vector<double> lowest_levels(const QuadraticLadder& h, int dim, int k) {
    Eigen::SelfAdjointEigenSolver<FockMatrix> solver(ladder_matrix(h, dim), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("spectral_check: eigensolver failed");
    std::vector<double> out(static_cast<std::size_t>(k));
    for (int n = 0; n < k; ++n) out[static_cast<std::size_t>(n)] = solver.eigenvalues()(n);
    return out;
}

} // namespace

void QuadraticQP::validate() const {
    for (double c : {c1, c2, c3, c4, c5, lambda, hbar}) {
        if (!std::isfinite(c)) throw InvalidArgument("quadratic Hamiltonian coefficients must be finite");
    }
    if (!(lambda > 0.0) || !(hbar > 0.0)) throw InvalidArgument("lambda and hbar must be positive");
}

LadderForm to_ladder(const QuadraticQP& h) {
    h.validate();
    const double l2 = h.lambda * h.lambda;
    const double q2 = 0.5 * h.c1 * l2;                   // c1 Q^2 -> q2 (b^2 + b^dag^2 + 2 b^dag b + 1)
    const double p2 = 0.5 * h.c2 * h.hbar * h.hbar / l2; // c2 P^2 -> p2 (-b^2 - b^dag^2 + 2 b^dag b + 1)
    LadderForm out;
    out.h.z1 = 2.0 * (q2 + p2);
    out.h.z2 = Complex(q2 - p2, -h.c3 * h.hbar);         // c3 (QP + PQ) = -i c3 hbar (b^2 - b^dag^2)
    out.h.z3 = Complex(h.c4 * h.lambda / kSqrt2, -h.c5 * h.hbar / (h.lambda * kSqrt2));
    out.constant = q2 + p2;
    return out;
}

NormalForm diagonalize(const QuadraticLadder& h) {
    if (!std::isfinite(h.z1) || !std::isfinite(std::abs(h.z2)) || !std::isfinite(std::abs(h.z3))) {
        throw InvalidArgument("ladder coefficients must be finite");
    }
    const double a2 = std::abs(h.z2);
    const double z0_sq = h.z1 * h.z1 - 4.0 * a2 * a2;
    if (!(h.z1 > 2.0 * a2)) {
        const bool degenerate = std::abs(h.z1 - 2.0 * a2) <= 1e-14 * std::max(1.0, std::abs(h.z1));
        throw InstabilityError(degenerate
                                   ? "z1 == 2|z2|: degenerate quadratic Hamiltonian has no normal form"
                                   : "z1 < 2|z2|: quadratic Hamiltonian is unstable (z0 imaginary)",
                               degenerate);
    }
    NormalForm nf;
    nf.z0 = std::sqrt(z0_sq);
    nf.phi = a2 > 0.0 ? std::arg(h.z2) : 0.0;
    nf.theta = std::log(std::sqrt((h.z1 - 2.0 * a2) / (h.z1 + 2.0 * a2)));
    nf.U = std::sqrt(0.5 * (h.z1 + nf.z0) / nf.z0);
    nf.V = std::sqrt(std::max(0.0, 0.5 * (h.z1 - nf.z0) / nf.z0));
    // The a^2 coefficient z1 nu* mu + z2 mu^2 + z2* nu*^2 vanishes for
    // mu = U e^{-i phi/2}, nu = -V e^{-i phi/2} (V = sinh(theta/2) < 0 branch).
    const Complex half_phase = std::polar(1.0, -0.5 * nf.phi);
    nf.mu = nf.U * half_phase;
    nf.nu = -nf.V * half_phase;
    nf.delta = (2.0 * std::conj(h.z2) * h.z3 - h.z1 * std::conj(h.z3)) / z0_sq;
    nf.c = 0.5 * (nf.z0 - h.z1) +
           (h.z2 * std::conj(h.z3) * std::conj(h.z3) + std::conj(h.z2) * h.z3 * h.z3).real() / z0_sq -
           h.z1 * std::norm(h.z3) / z0_sq;
    return nf;
}

std::array<Complex, 3> diagonalization_residuals(const QuadraticLadder& h, const NormalForm& nf) {
    const Complex mu = nf.mu, nu = nf.nu, d = nf.delta;
    const Complex z2 = h.z2, z3 = h.z3;
    const double z1 = h.z1;
    using std::conj;
    const Complex coeff_a = z1 * (conj(nu) * d + conj(d) * mu) + 2.0 * z2 * mu * d +
                            2.0 * conj(z2) * conj(nu) * conj(d) + z3 * mu + conj(z3) * conj(nu);
    const Complex coeff_adag = z1 * (conj(mu) * d + conj(d) * nu) + 2.0 * z2 * nu * d +
                               2.0 * conj(z2) * conj(mu) * conj(d) + z3 * nu + conj(z3) * conj(mu);
    const Complex coeff_a2 = z1 * conj(nu) * mu + z2 * mu * mu + conj(z2) * conj(nu) * conj(nu);
    return {coeff_a, coeff_adag, coeff_a2};
}

double symplectic_residual(const NormalForm& nf) {
    return std::norm(nf.mu) - std::norm(nf.nu) - 1.0;
}

FockMatrix ladder_matrix(const QuadraticLadder& h, int dim) {
    const FockMatrix b = fock::ladder(dim);
    const FockMatrix bd = b.adjoint();
    return h.z1 * (bd * b) + h.z2 * (b * b) + std::conj(h.z2) * (bd * bd) + h.z3 * b + std::conj(h.z3) * bd;
}

FockMatrix qp_matrix(const QuadraticQP& h, int dim) {
    h.validate();
    const FockMatrix b = fock::ladder(dim);
    const FockMatrix bd = b.adjoint();
    const FockMatrix q = h.lambda / kSqrt2 * (b + bd);
    const FockMatrix p = h.hbar / (h.lambda * kSqrt2 * kI) * (b - bd);
    return h.c1 * (q * q) + h.c2 * (p * p) + h.c3 * (q * p + p * q) + h.c4 * q + h.c5 * p;
}

SpectralReport spectral_check(const QuadraticLadder& h, const NormalForm& nf, int dim, int k) {
    if (!h.stable()) {
        throw InstabilityError("spectral_check: z1 <= 2|z2|", std::abs(h.z1 - 2.0 * std::abs(h.z2)) < 1e-14);
    }
    if (k < 1 || dim < k) throw InvalidArgument("spectral_check needs 1 <= k <= dim");
    SpectralReport out;
    out.eigenvalues = lowest_levels(h, dim, k);
    const auto doubled = lowest_levels(h, 2 * dim, k);
    for (int n = 0; n < k; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        out.doubling_change = std::max(out.doubling_change, std::abs(doubled[idx] - out.eigenvalues[idx]));
        out.max_error = std::max(out.max_error, std::abs(out.eigenvalues[idx] - (nf.z0 * n + nf.c)));
    }
    if (out.doubling_change > 1e-8) {
        throw ConvergenceError("spectral_check: lowest " + std::to_string(k) + " levels not converged at dim " +
                               std::to_string(dim) + " (doubling moves them by " +
                               std::to_string(out.doubling_change) + ")");
    }
    return out;
}

HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j) {
    try {
        std::string basis;
        if (j.contains("basis")) {
            basis = j.at("basis").get<std::string>();
        } else {
            basis = j.contains("z1") ? "ladder" : "qp";  // infer from the coefficients given
        }
        if (basis == "qp") {
            QuadraticQP h;
            h.c1 = j.value("c1", 0.0);
            h.c2 = j.value("c2", 0.0);
            h.c3 = j.value("c3", 0.0);
            h.c4 = j.value("c4", 0.0);
            h.c5 = j.value("c5", 0.0);
            h.lambda = j.value("lambda", 1.0);
            h.hbar = j.value("hbar", 1.0);
            h.validate();
            return h;
        }
        if (basis == "ladder") {
            QuadraticLadder h;
            h.z1 = j.at("z1").get<double>();
            h.z2 = complex_from_json(j, "z2");
            h.z3 = complex_from_json(j, "z3");
            return h;
        }
        throw ConfigError("hamiltonian basis must be 'qp' or 'ladder', got '" + basis + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed hamiltonian spec: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

QuadraticLadder as_ladder(const HamiltonianSpec& spec) {
    if (const auto* qp = std::get_if<QuadraticQP>(&spec)) return to_ladder(*qp).h;
    return std::get<QuadraticLadder>(spec);
}

double hbar_of(const HamiltonianSpec& spec) {
    if (const auto* qp = std::get_if<QuadraticQP>(&spec)) return qp->hbar;
    return 1.0;
}

nlohmann::json to_json(const NormalForm& nf) {
    nlohmann::json j;
    j["z0"] = nf.z0;
    j["c"] = nf.c;
    j["mu"] = complex_to_json(nf.mu);
    j["nu"] = complex_to_json(nf.nu);
    j["delta"] = complex_to_json(nf.delta);
    j["U"] = nf.U;
    j["V"] = nf.V;
    j["theta"] = nf.theta;
    j["phi"] = nf.phi;
    return j;
}

} // namespace phasemeas::hamiltonian
