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

#include "phasemeas/displacement.hpp"

#include <cmath>
#include <string>

#include "phasemeas/errors.hpp"

namespace phasemeas {

namespace {

constexpr double kRescale = 1e100;
const double kLogRescale = std::log(kRescale);

} // namespace

Eigen::MatrixXd radial_displacement(double r, int dim) {
    if (dim < 2) throw InvalidDimension("displacement needs dim >= 2");
    if (!(r >= 0.0) || r > kMaxDisplacementRadius) {
        throw OutOfRange("displacement radius " + std::to_string(r) + " outside [0, " +
                         std::to_string(kMaxDisplacementRadius) + "]");
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    if (r == 0.0) {
        d.setIdentity();
        return d;
    }
    const auto lf = fock::log_factorials(dim);
    const double x = r * r;
    const double log_r = std::log(r);

    for (int k = 0; k < dim; ++k) {
        // L_n^(k)(x) for n = 0..dim-1-k, kept as value * exp(log_scale).
        double prev = 0.0;
        double cur = 1.0;
        double log_scale = 0.0;
        for (int n = 0; n + k < dim; ++n) {
            if (n == 1) {
                prev = cur;
                cur = 1.0 + k - x;
            } else if (n > 1) {
                const double j = n - 1;
                const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
                prev = cur;
                cur = next;
            }
            if (std::abs(cur) > kRescale) {
                cur /= kRescale;
                prev /= kRescale;
                log_scale += kLogRescale;
            }
            const double log_pref = 0.5 * (lf[static_cast<std::size_t>(n)] - lf[static_cast<std::size_t>(n + k)]) +
                                    k * log_r - 0.5 * x + log_scale;
            const double value = cur == 0.0 ? 0.0 : std::exp(log_pref) * cur;
            d(n + k, n) = value;
            if (k > 0) d(n, n + k) = (k % 2 == 0) ? value : -value;
        }
    }
    return d;
}

FockMatrix displacement_elements(Complex alpha, int dim) {
    const double r = std::abs(alpha);
    const Eigen::MatrixXd d = radial_displacement(r, dim);
    const double theta = std::arg(alpha);
    FockMatrix out(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            out(m, n) = d(m, n) * std::polar(1.0, (m - n) * theta);
        }
    }
    return out;
}

FockMatrix displacement_matrix(Complex alpha, int dim) {
    if (dim < 2) throw InvalidDimension("displacement needs dim >= 2");
    if (std::norm(alpha) > dim / 4.0) {
        throw OutOfRange("displacement |alpha|^2=" + std::to_string(std::norm(alpha)) +
                         " leaves the truncated space of dimension " + std::to_string(dim));
    }
    return displacement_elements(alpha, dim);
}

Eigen::VectorXd parity_diagonal(int dim) {
    Eigen::VectorXd p(dim);
    for (int n = 0; n < dim; ++n) p(n) = (n % 2 == 0) ? 1.0 : -1.0;
    return p;
}

FockVector displace(Complex alpha, const FockVector& psi) {
    return displacement_elements(alpha, static_cast<int>(psi.size())) * psi;
}

} // namespace phasemeas
