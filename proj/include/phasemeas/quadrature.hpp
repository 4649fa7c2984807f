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

// quadrature.hpp: composite Gauss-Legendre rules and polar plane rules.

#pragma once

#include <complex>
#include <vector>

namespace phasemeas::quad {

/// Nodes per Gauss-Legendre panel.
inline constexpr int kPanelOrder = 30;

struct Rule {
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
};

/// Composite 30-point Gauss-Legendre on [a, b] split into `panels` equal pieces.
Rule gauss_legendre(double a, double b, int panels);

/// Plane rule on the disc |alpha| <= radius:
///   int f d^2alpha ~= sum_j sum_k radial_w[j] * (2 pi / n_angles) * f(r_j e^{i theta_k})
/// with radial_w already containing the Jacobian r.
struct PolarRule {
    std::vector<double> r;
    std::vector<double> radial_w;
    int n_angles = 64;

    double angle(int k) const;
    std::complex<double> node(std::size_t j, int k) const;
    double weight(std::size_t j) const;  // radial_w[j] * 2 pi / n_angles
    std::size_t size() const { return r.size() * static_cast<std::size_t>(n_angles); }
};

PolarRule polar_rule(double radius, int panels, int n_angles);

} // namespace phasemeas::quad
