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

#include "phasemeas/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasemeas/errors.hpp"

namespace phasemeas::fock {

namespace {

void require_dim(int dim) {
    if (dim < 2) {
        throw InvalidDimension("truncation dimension must be >= 2, got " + std::to_string(dim));
    }
}

// Poisson(mean) mass at n >= dim, summed directly so that tiny tails are not
// lost to cancellation against 1.
double poisson_tail(double mean, int dim) {
    if (mean == 0.0) return 0.0;
    const double log_mean = std::log(mean);
    double log_term = -mean + dim * log_mean - std::lgamma(dim + 1.0);
    double tail = 0.0;
    for (int n = dim;; ++n) {
        const double term = std::exp(log_term);
        tail += term;
        if (n > mean && term < 1e-30 * std::max(tail, 1e-300)) break;
        if (n > dim + 100000) break;
        log_term += log_mean - std::log(n + 1.0);
    }
    return tail;
}

} // namespace

std::vector<double> log_factorials(int count) {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 1)), 0.0);
    for (int n = 1; n < count; ++n) {
        out[static_cast<std::size_t>(n)] = out[static_cast<std::size_t>(n - 1)] + std::log(static_cast<double>(n));
    }
    return out;
}

int default_dimension(double max_abs_alpha) {
    return std::max(32, static_cast<int>(std::ceil(8.0 * max_abs_alpha * max_abs_alpha)));
}

FockMatrix ladder(int dim) {
    require_dim(dim);
    FockMatrix a = FockMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

FockMatrix creation(int dim) { return ladder(dim).adjoint(); }

FockMatrix number(int dim) {
    require_dim(dim);
    FockMatrix n = FockMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

FockMatrix quadrature_x(int dim) {
    const FockMatrix a = ladder(dim);
    return 0.5 * (a + a.adjoint());
}

FockMatrix quadrature_y(int dim) {
    const FockMatrix a = ladder(dim);
    return (a - a.adjoint()) / Complex(0.0, 2.0);
}

FockMatrix identity(int dim) {
    require_dim(dim);
    return FockMatrix::Identity(dim, dim);
}

FockVector fock_state(int n, int dim) {
    require_dim(dim);
    if (n < 0 || n >= dim) {
        throw TruncationError("Fock state |" + std::to_string(n) + "> outside dimension " + std::to_string(dim));
    }
    FockVector v = FockVector::Zero(dim);
    v(n) = 1.0;
    return v;
}

TruncatedState coherent_state_diagnostics(Complex alpha, int dim, const Tolerances& tol) {
    require_dim(dim);
    const double r = std::abs(alpha);
    const double tail = poisson_tail(r * r, dim);
    if (tail > tol.coherent_tail) {
        throw TruncationError("coherent state |alpha|=" + std::to_string(r) + " needs more than " +
                              std::to_string(dim) + " levels (tail mass " + std::to_string(tail) + ")");
    }
    const auto lf = log_factorials(dim);
    const double phase = std::arg(alpha);
    FockVector amp = FockVector::Zero(dim);
    amp(0) = std::exp(-0.5 * r * r);
    if (r > 0.0) {
        const double log_r = std::log(r);
        for (int n = 1; n < dim; ++n) {
            const double mag = std::exp(-0.5 * r * r + n * log_r - 0.5 * lf[static_cast<std::size_t>(n)]);
            amp(n) = std::polar(mag, n * phase);
        }
    }
    TruncatedState out;
    out.raw_norm = amp.norm();
    out.tail_mass = tail;
    out.amp = amp / out.raw_norm;
    return out;
}

FockVector coherent_state(Complex alpha, int dim, const Tolerances& tol) {
    return coherent_state_diagnostics(alpha, dim, tol).amp;
}

TruncatedState cat_state_diagnostics(Complex alpha, int dim, const Tolerances& tol) {
    TruncatedState coh = coherent_state_diagnostics(alpha, dim, tol);
    // |alpha> + |-alpha> keeps the even amplitudes twice and cancels the odd ones.
    FockVector amp = coh.amp * coh.raw_norm;
    for (int n = 1; n < dim; n += 2) amp(n) = 0.0;
    amp *= 2.0;
    const double r2 = std::norm(alpha);
    const double exact_norm = std::sqrt(2.0 * (1.0 + std::exp(-2.0 * r2)));
    TruncatedState out;
    out.raw_norm = amp.norm() / exact_norm;
    out.tail_mass = coh.tail_mass;
    out.amp = amp / amp.norm();
    return out;
}

FockVector cat_state(Complex alpha, int dim, const Tolerances& tol) {
    return cat_state_diagnostics(alpha, dim, tol).amp;
}

FockMatrix density(const FockVector& psi) { return psi * psi.adjoint(); }

Complex expectation(const FockMatrix& rho, const FockMatrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols() || rho.rows() != rho.cols()) {
        throw DimensionMismatch("expectation: rho is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", operator is " +
                                std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
    }
    // Tr[rho O] without forming the product.
    return (rho.transpose().array() * op.array()).sum();
}

double purity(const FockMatrix& rho) {
    return (rho.transpose().array() * rho.array()).sum().real();
}

double min_eigenvalue(const FockMatrix& rho) {
    const FockMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<FockMatrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double hermiticity_error(const FockMatrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

void validate_density(const FockMatrix& rho, const Tolerances& tol) {
    if (rho.rows() != rho.cols() || rho.rows() < 2) {
        throw InvalidState("density matrix must be square with dim >= 2");
    }
    const double herm = hermiticity_error(rho);
    if (herm > tol.hermiticity) {
        throw InvalidState("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const double tr = std::abs(rho.trace() - 1.0);
    if (tr > tol.trace) {
        throw InvalidState("density matrix trace deviates from 1 by " + std::to_string(tr));
    }
    const double lmin = min_eigenvalue(rho);
    if (lmin < tol.min_eigenvalue) {
        throw InvalidState("density matrix has negative eigenvalue " + std::to_string(lmin));
    }
}

FockMatrix thermal_state(double mean_occupation, int dim) {
    require_dim(dim);
    if (!(mean_occupation >= 0.0)) throw InvalidArgument("thermal occupation must be >= 0");
    FockMatrix rho = FockMatrix::Zero(dim, dim);
    const double q = mean_occupation / (1.0 + mean_occupation);
    double p = 1.0;
    double total = 0.0;
    for (int n = 0; n < dim; ++n) {
        rho(n, n) = p;
        total += p;
        p *= q;
    }
    rho /= total;
    return rho;
}

} // namespace phasemeas::fock
